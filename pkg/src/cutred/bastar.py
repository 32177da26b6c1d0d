"""Finitary proof system with eigenvariables and logarithmic induction.

Derivations are finite trees of inference symbols.  The endsequent is
computed bottom-up; premises are never matched against child conclusions,
a child simply contributes whatever it proves beyond the premise formulas.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .config import get_config
from .errors import OpenSubstitutionTerm, WellFormednessError
from .formula import (
    App,
    Conj,
    Disj,
    Exists,
    Forall,
    FormulaClass,
    Literal,
    Num,
    Var,
    ZERO,
    check_formula,
    free_vars,
    literal_value,
    negate,
    rank,
    subst,
    suc,
    term_depth,
    term_vars,
)
from .immutable import node
from .proofsys import EMPTY, Sequent

_CACHE = 1 << 18


@node
class AxSeq:
    literals: tuple

    def __post_init__(self):
        for L in self.literals:
            if type(L) is not Literal:
                raise WellFormednessError("axioms consist of literals only")
        # canonical order, duplicates modulo ieq removed
        object.__setattr__(self, "literals", tuple(Sequent(self.literals)))


@node
class ConjI:
    formula: Conj


@node
class DisjI:
    k: int
    formula: Disj

    def __post_init__(self):
        if self.k not in (0, 1):
            raise WellFormednessError(f"disjunction index must be 0 or 1, got {self.k}")


@node
class AllI:
    eigen: str
    formula: Forall


@node
class ExI:
    term: object
    formula: Exists


@node
class IndT:
    eigen: str
    bound: object
    formula: object


@node
class IndNI:
    eigen: str
    start: int
    exponent: int
    formula: object

    def __post_init__(self):
        if self.start < 0 or self.exponent < 0:
            raise WellFormednessError("induction interval parameters are natural numbers")


@node
class CutI:
    formula: object


_EXPECTED = {ConjI: Conj, DisjI: Disj, AllI: Forall, ExI: Exists}
BINDERS = (AllI, IndT, IndNI)


@node
class Deriv:
    symbol: object
    children: tuple

    def __post_init__(self):
        want = star_arity(self.symbol)
        if len(self.children) != want:
            raise WellFormednessError(
                f"{type(self.symbol).__name__} takes {want} premises, got {len(self.children)}")
        expected = _EXPECTED.get(type(self.symbol))
        if expected is not None and type(self.symbol.formula) is not expected:
            raise WellFormednessError(f"{type(self.symbol).__name__} needs a {expected.__name__} formula")


def star_arity(sym) -> int:
    t = type(sym)
    if t is AxSeq:
        return 0
    if t is ConjI or t is CutI:
        return 2
    return 1


def axiom(*literals):
    return Deriv(AxSeq(tuple(literals)), ())


def mk(sym, *children):
    return Deriv(sym, tuple(children))


AX_ZERO = axiom(Literal(True, "eq", ZERO, ZERO))


def induction_end(formula, eigen, low, high):
    """The pair ¬F(low), F(high) concluded by an induction over [low, high]."""
    return Sequent([negate(subst(formula, eigen, low)), subst(formula, eigen, high)])


@lru_cache(maxsize=_CACHE)
def star_conclusion(sym) -> Sequent:
    t = type(sym)
    if t is AxSeq:
        return Sequent(sym.literals)
    if t is CutI:
        return EMPTY
    if t is IndT:
        return induction_end(sym.formula, sym.eigen, ZERO, App("zhl", (sym.bound,)))
    if t is IndNI:
        return induction_end(sym.formula, sym.eigen, Num(sym.start), Num(sym.start + 2 ** sym.exponent))
    return Sequent([sym.formula])


@lru_cache(maxsize=_CACHE)
def star_premise(sym, i) -> Sequent:
    t = type(sym)
    if t is ConjI:
        return Sequent([sym.formula.right if i else sym.formula.left])
    if t is DisjI:
        return Sequent([sym.formula.right if sym.k else sym.formula.left])
    if t is AllI:
        A = sym.formula
        return Sequent([subst(A.body, A.var, Var(sym.eigen))])
    if t is ExI:
        A = sym.formula
        return Sequent([subst(A.body, A.var, sym.term)])
    if t is IndT or t is IndNI:
        F = sym.formula
        return Sequent([negate(F), subst(F, sym.eigen, suc(Var(sym.eigen)))])
    if t is CutI:
        return Sequent([sym.formula if i == 0 else negate(sym.formula)])
    return EMPTY


@lru_cache(maxsize=_CACHE)
def gamma_star(h) -> Sequent:
    out = list(star_conclusion(h.symbol))
    for i, child in enumerate(h.children):
        excluded = star_premise(h.symbol, i)
        out.extend(A for A in gamma_star(child) if A not in excluded)
    return Sequent(out)


@lru_cache(maxsize=_CACHE)
def size(h) -> int:
    return 1 + sum(size(c) for c in h.children)


@lru_cache(maxsize=_CACHE)
def height(h) -> int:
    return max((height(c) + 1 for c in h.children), default=0)


def symbol_formulas(sym):
    t = type(sym)
    if t is AxSeq:
        return sym.literals
    return (sym.formula,)


def symbol_terms(sym):
    t = type(sym)
    if t is ExI:
        return (sym.term,)
    if t is IndT:
        return (sym.bound,)
    return ()


@lru_cache(maxsize=_CACHE)
def symbol_vars(sym) -> frozenset:
    out = frozenset()
    for A in symbol_formulas(sym):
        out |= free_vars(A)
    for t in symbol_terms(sym):
        out |= term_vars(t)
    if type(sym) in BINDERS:
        out |= {sym.eigen}
    return out


@lru_cache(maxsize=_CACHE)
def deriv_vars(h) -> frozenset:
    """Every variable name mentioned anywhere in `h` (over-approximates free ones)."""
    out = symbol_vars(h.symbol)
    for c in h.children:
        out |= deriv_vars(c)
    return out


def fv_deriv(h) -> frozenset:
    """Free variables of `h`: those not captured by an enclosing binder."""
    # the induction formula mentions its eigenvariable, the bound term does not
    scoped = frozenset()
    for A in symbol_formulas(h.symbol):
        scoped |= free_vars(A)
    for c in h.children:
        scoped |= fv_deriv(c)
    if type(h.symbol) in BINDERS:
        scoped -= {h.symbol.eigen}
    for t in symbol_terms(h.symbol):
        scoped |= term_vars(t)
    return scoped


# --------------------------------------------------------------------------
# well-formedness

@dataclass(frozen=True)
class Violation:
    path: tuple
    clause: str
    detail: str

    def __str__(self):
        where = ".".join(map(str, self.path)) or "root"
        return f"[{where}] {self.clause}: {self.detail}"


def diagnose(h, xs=()) -> list:
    """All violations of the derivation clauses with free variables among `xs`."""
    out = []
    _diagnose(h, tuple(xs), (), out)
    return out


def _diagnose(h, xs, path, out):
    sym = h.symbol
    t = type(sym)
    allowed = set(xs)
    if t in BINDERS:
        if sym.eigen in allowed:
            out.append(Violation(path, "distinct-binder", f"eigenvariable {sym.eigen} already in scope"))
        stray = free_vars_of_sequent(gamma_star(h)) - allowed
        if stray:
            out.append(Violation(path, "eigenvariable", f"free {sorted(stray)} in the conclusion"))
        _diagnose(h.children[0], xs + (sym.eigen,), path + (0,), out)
        return
    if t is ExI:
        stray = (free_vars(sym.formula) | term_vars(sym.term)) - allowed
        clause = "exists-witness"
    elif t is CutI:
        stray = free_vars(sym.formula) - allowed
        clause = "cut-formula"
    elif t is AxSeq:
        stray = free_vars_of_sequent(sym.literals) - allowed
        clause = "axiom"
    else:
        stray = free_vars(sym.formula) - allowed
        clause = "and-intro" if t is ConjI else "or-intro"
    if stray:
        out.append(Violation(path, clause, f"free {sorted(stray)} not among {list(xs)}"))
    for i, c in enumerate(h.children):
        _diagnose(c, xs, path + (i,), out)


def free_vars_of_sequent(formulas) -> frozenset:
    out = frozenset()
    for A in formulas:
        out |= free_vars(A)
    return out


def var_deriv(h, xs=()) -> bool:
    return not diagnose(h, xs)


_SAMPLE_VALUES = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 15, 16, 17, 31, 32, 33, 63, 64, 100,
                  127, 128, 255, 256, 1000, 1023, 1024, 4096)


def is_basic(literals, samples=20000) -> bool:
    """Whether the disjunction of `literals` holds under every assignment.

    Exact for closed literals.  Open disjunctions are tested on a fixed grid of
    assignments (randomly thinned beyond `samples` points), so a positive
    answer there is evidence rather than proof.
    """
    names = sorted(free_vars_of_sequent(literals))
    if not names:
        return any(literal_value(L) for L in literals)
    grid = itertools.product(_SAMPLE_VALUES, repeat=len(names))
    total = len(_SAMPLE_VALUES) ** len(names)
    if total > samples:
        rnd = random.Random(get_config().seed)
        grid = (tuple(rnd.choice(_SAMPLE_VALUES) for _ in names) for _ in range(samples))
    for values in grid:
        env = dict(zip(names, values))
        if not any(literal_value(L, env) for L in literals):
            return False
    return True


def check_script(h, xs=(), assume_axioms=False) -> list:
    """Violations of every well-formedness rule: variable clauses, bounded
    formulas, term depth, and axiomhood of every axiom node."""
    out = diagnose(h, xs)
    cap = get_config().term_depth_cap
    for path, node_ in walk(h):
        sym = node_.symbol
        for A in symbol_formulas(sym):
            try:
                check_formula(A)
            except WellFormednessError as exc:
                out.append(Violation(path, "formula", str(exc)))
        for t in symbol_terms(sym):
            if term_depth(t) > cap:
                out.append(Violation(path, "term-depth", f"depth {term_depth(t)} exceeds {cap}"))
        if type(sym) is AxSeq and not assume_axioms and not is_basic(sym.literals):
            out.append(Violation(path, "basic-axiom", "disjunction of literals is not valid"))
    return out


def walk(h, path=()):
    yield path, h
    for i, c in enumerate(h.children):
        yield from walk(c, path + (i,))


# --------------------------------------------------------------------------
# substitution of closed terms

def substitute(h, t, y):
    """h(t/y): replace free y by the closed term t, stopping at binders of y."""
    if term_vars(t):
        raise OpenSubstitutionTerm("only closed terms may be substituted into derivations")
    return _substitute(h, y, t)


@lru_cache(maxsize=_CACHE)
def _substitute(h, y, t):
    sym = h.symbol
    if y not in deriv_vars(h):
        return h
    if type(sym) in BINDERS and sym.eigen == y:
        return h
    return Deriv(subst_symbol(sym, y, t), tuple(_substitute(c, y, t) for c in h.children))


def subst_symbol(sym, y, t):
    from .formula import subst_term

    kind = type(sym)
    if kind is AxSeq:
        return AxSeq(tuple(subst(L, y, t) for L in sym.literals))
    if kind is ConjI or kind is CutI:
        return kind(subst(sym.formula, y, t))
    if kind is DisjI:
        return DisjI(sym.k, subst(sym.formula, y, t))
    if kind is AllI:
        return AllI(sym.eigen, subst(sym.formula, y, t))
    if kind is ExI:
        return ExI(subst_term(sym.term, y, t), subst(sym.formula, y, t))
    if kind is IndT:
        return IndT(sym.eigen, subst_term(sym.bound, y, t), subst(sym.formula, y, t))
    return IndNI(sym.eigen, sym.start, sym.exponent, subst(sym.formula, y, t))


# --------------------------------------------------------------------------
# cut rank and decorations

@lru_cache(maxsize=_CACHE)
def crk_star(cls: FormulaClass, h) -> int:
    """Cut rank; induction formulas count as cut formulas since they unfold into cuts."""
    sym = h.symbol
    own = 0
    if type(sym) in (CutI, IndT, IndNI):
        own = rank(cls, sym.formula) + 1
    return max([own] + [crk_star(cls, c) for c in h.children])


@lru_cache(maxsize=_CACHE)
def deco_star(h) -> Sequent:
    sym = h.symbol
    out = list(star_conclusion(sym))
    if type(sym) in (IndT, IndNI):
        out.append(sym.formula)
    for c in h.children:
        out.extend(deco_star(c))
    return Sequent(out)
