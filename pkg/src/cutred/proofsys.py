"""Sequents, the infinitary inference symbols and generic quasi-derivation measures."""
from __future__ import annotations

import math
from functools import lru_cache

from .errors import BadConnective
from .formula import (
    Conn,
    FormulaClass,
    formula_key,
    negate,
    normalize,
    rank,
    rng_formula,
    show_formula,
    sub_formula,
    tp_formula,
)
from .immutable import node

OMEGA = math.inf


class Sequent:
    """Finite set of formulas, identified up to `ieq`.

    Each class of intensionally equal formulas keeps one representative (the
    one with the least serialization); iteration follows the canonical order.
    """

    __slots__ = ("_reps", "_hash")

    def __init__(self, formulas=()):
        reps = {}
        for A in formulas:
            k = normalize(A)
            old = reps.get(k)
            if old is None or show_formula(A) < show_formula(old):
                reps[k] = A
        self._reps = dict(sorted(reps.items(), key=lambda kv: formula_key(kv[1])))
        self._hash = None

    def __iter__(self):
        return iter(self._reps.values())

    def __len__(self):
        return len(self._reps)

    def __contains__(self, A):
        return normalize(A) in self._reps

    def __eq__(self, other):
        return isinstance(other, Sequent) and self._reps.keys() == other._reps.keys()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._reps))
        return self._hash

    def __repr__(self):
        return "{" + ", ".join(show_formula(A) for A in self) + "}"

    def __or__(self, other):
        return Sequent([*self, *other])

    def minus(self, other):
        """Elements not intensionally equal to any element of `other`."""
        return Sequent(A for A in self if A not in other)

    __sub__ = minus

    def issubset(self, other):
        return all(A in other for A in self)

    __le__ = issubset

    def isdisjoint(self, other):
        return not any(A in other for A in self)

    def map(self, fn):
        return Sequent(fn(A) for A in self)


EMPTY = Sequent()


def seq_closure(delta: Sequent):
    """Membership predicate of the closure of `delta` under `ieq`."""
    return lambda A: A in delta


# --------------------------------------------------------------------------
# inference symbols of the infinitary system

def _require(formula, allowed, what):
    if tp_formula(formula) not in allowed:
        raise BadConnective(f"{what} needs connective in {[c.value for c in allowed]}: {show_formula(formula)}")


@node
class Ax:
    formula: object

    def __post_init__(self):
        _require(self.formula, (Conn.TOP,), "Ax")


@node
class BigAnd:
    formula: object

    def __post_init__(self):
        _require(self.formula, (Conn.AND,), "BigAnd")


@node
class BigOr:
    index: int
    formula: object

    def __post_init__(self):
        _require(self.formula, (Conn.OR,), "BigOr")


@node
class Cut:
    formula: object

    def __post_init__(self):
        _require(self.formula, (Conn.TOP, Conn.AND), "Cut")


@node
class Rep:
    pass


REP = Rep()
InfSymbol = Ax | BigAnd | BigOr | Cut | Rep


def arity(sym):
    t = type(sym)
    if t is Ax:
        return 0
    if t is BigAnd:
        return OMEGA
    if t is Cut:
        return 2
    return 1


def rng_symbol(sym) -> int:
    """Number of informative premises."""
    t = type(sym)
    if t is Ax:
        return 0
    if t is BigAnd:
        return rng_formula(sym.formula)
    if t is Cut:
        return 2
    return 1


def effective_arity(sym) -> int:
    return rng_symbol(sym) if type(sym) is BigAnd else arity(sym)


@lru_cache(maxsize=1 << 16)
def conclusion(sym) -> Sequent:
    t = type(sym)
    if t is Cut or t is Rep:
        return EMPTY
    return Sequent([sym.formula])


def premise(sym, i) -> Sequent:
    t = type(sym)
    if t is BigAnd:
        return Sequent([sub_formula(sym.formula, i)])
    if t is BigOr:
        return Sequent([sub_formula(sym.formula, sym.index)])
    if t is Cut:
        return Sequent([sym.formula if i == 0 else negate(sym.formula)])
    return EMPTY


def mk_cut_abbrev(formula, left, right):
    """Cut on a formula of connective ⊥/⋁ stands for Cut on its negation with swapped premises."""
    if tp_formula(formula) in (Conn.TOP, Conn.AND):
        raise BadConnective("cut formula already has connective ⊤/⋀; use Cut directly")
    return Cut(negate(formula)), (right, left)


def cut_on(formula):
    """Cut symbol for `formula` of any polarity, and whether premises swap."""
    if tp_formula(formula) in (Conn.TOP, Conn.AND):
        return Cut(formula), False
    return Cut(negate(formula)), True


def symbol_rank(cls: FormulaClass, sym) -> int:
    return rank(cls, sym.formula) + 1 if type(sym) is Cut else 0


def show_symbol(sym) -> str:
    t = type(sym)
    if t is Rep:
        return "Rep"
    if t is BigOr:
        return f"Or^{sym.index} {show_formula(sym.formula)}"
    name = {Ax: "Ax", BigAnd: "And", Cut: "Cut"}[t]
    return f"{name} {show_formula(sym.formula)}"


def symbol_to_json(sym):
    t = type(sym)
    if t is Rep:
        return {"rule": "Rep"}
    out = {"rule": {Ax: "Ax", BigAnd: "And", BigOr: "Or", Cut: "Cut"}[t], "formula": show_formula(sym.formula)}
    if t is BigOr:
        out["index"] = sym.index
    return out


def symbols_ieq(a, b) -> bool:
    """Equality of inference symbols modulo intensional equality of decorations."""
    if type(a) is not type(b):
        return False
    if type(a) is Rep:
        return True
    if type(a) is BigOr and a.index != b.index:
        return False
    return normalize(a.formula) == normalize(b.formula)


# --------------------------------------------------------------------------
# measures of explicit quasi-derivations (anything with .symbol and .children)

def tree_gamma(d) -> Sequent:
    sym = d.symbol
    out = list(conclusion(sym))
    for i, child in enumerate(d.children):
        excluded = premise(sym, i)
        out.extend(A for A in tree_gamma(child) if A not in excluded)
    return Sequent(out)


def tree_crk(cls, d) -> int:
    return max([symbol_rank(cls, d.symbol)] + [tree_crk(cls, c) for c in d.children])


def tree_height(d) -> int:
    return max((tree_height(c) + 1 for c in d.children), default=0)


def tree_size(d) -> int:
    return 1 + sum(tree_size(c) for c in d.children)


def check_judgment(d, alpha: int, cls: FormulaClass, m: int, gamma: Sequent) -> bool:
    """d proves gamma with height at most alpha and cut rank at most m."""
    return tree_gamma(d).issubset(gamma) and tree_crk(cls, d) <= m and tree_height(d) <= alpha
