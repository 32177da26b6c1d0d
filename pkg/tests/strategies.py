"""Generators for terms, formulas, finitary derivations and notations.

Each generator takes a chooser with `int(lo, hi)`, `pick(seq)` and `flip()`.
`Seeded` drives them from a seeded RNG (fast bulk sampling); `strategy(...)`
wraps one as a hypothesis strategy (shrinking, smaller runs).

Generated axioms have at most two literals and are valid by construction
(a literal together with its negation, or a reflexive equation), so every
derivation passes the axiom check and denotes a proper infinitary tree.
Truncated subtraction is never applied to open terms.
"""
from __future__ import annotations

import random

from hypothesis import strategies as st

from cutred import cutelim as ce
from cutred.bastar import AllI, ConjI, CutI, DisjI, ExI, IndNI, IndT, axiom, free_vars_of_sequent, gamma_star, mk
from cutred.formula import (
    App,
    Conj,
    Conn,
    Disj,
    Num,
    Var,
    eq,
    exists_le,
    forall_le,
    is_closed,
    le,
    negate,
    subst,
    suc,
    term_vars,
    tp_formula,
)

UNARY = ("suc", "len", "shr", "zhl")
BINARY_OPEN = ("add", "min", "max", "mul")
BINARY_CLOSED = BINARY_OPEN + ("monus",)
BOUND_NAMES = ("q", "r", "p")
EIGEN_NAMES = ("u", "v", "w", "z")


class Seeded:
    def __init__(self, seed=0):
        self.rnd = random.Random(seed)

    def int(self, lo, hi):
        return self.rnd.randint(lo, hi)

    def pick(self, seq):
        return self.rnd.choice(list(seq))

    def flip(self):
        return self.rnd.random() < 0.5


class _Drawn:
    def __init__(self, draw):
        self.draw = draw

    def int(self, lo, hi):
        return self.draw(st.integers(lo, hi))

    def pick(self, seq):
        return self.draw(st.sampled_from(list(seq)))

    def flip(self):
        return self.draw(st.booleans())


def strategy(gen, *args, accept=None, **kwargs):
    """Hypothesis strategy drawing `gen(chooser, *args, **kwargs)`, optionally filtered."""
    base = st.composite(lambda draw: gen(_Drawn(draw), *args, **kwargs))()
    return base.filter(accept) if accept else base


def samples(gen, count, *args, seed=0, accept=None, tries=50, **kwargs):
    """`count` distinct values of `gen` from a seeded chooser (raises if the filter starves)."""
    c = Seeded(seed)
    out = {}
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > tries * count:
            raise RuntimeError(f"only {len(out)} of {count} samples accepted")
        value = gen(c, *args, **kwargs)
        if accept is None or accept(value):
            out.setdefault(value, None)
    return list(out)


# --------------------------------------------------------------------------
# terms and formulas

def term(c, scope=(), depth=2, hi=6):
    if depth == 0 or c.int(0, 2) == 0:
        if scope and c.flip():
            return Var(c.pick(scope))
        return Num(c.int(0, hi))
    if c.flip():
        return App(c.pick(UNARY), (term(c, scope, depth - 1, hi),))
    left, right = term(c, scope, depth - 1, hi), term(c, scope, depth - 1, hi)
    closed = not (term_vars(left) | term_vars(right))
    return App(c.pick(BINARY_CLOSED if closed else BINARY_OPEN), (left, right))


def literal(c, scope=(), hi=6):
    A = c.pick((eq, le))(term(c, scope, 1, hi), term(c, scope, 1, hi))
    return negate(A) if c.flip() else A


def formula(c, scope=(), depth=2, bound_hi=3, hi=6):
    """Bounded formula whose free variables lie in `scope`."""
    if depth == 0 or c.int(0, 3) == 0:
        return literal(c, scope, hi)
    kind = c.pick(("and", "or", "all", "ex"))
    if kind in ("and", "or"):
        left = formula(c, scope, depth - 1, bound_hi, hi)
        right = formula(c, scope, depth - 1, bound_hi, hi)
        return (Conj if kind == "and" else Disj)(left, right)
    name = next(n for n in BOUND_NAMES if n not in scope)
    bound = Num(c.int(0, bound_hi))
    body = formula(c, tuple(scope) + (name,), depth - 1, bound_hi, hi)
    return (forall_le if kind == "all" else exists_le)(name, bound, body)


def formula_of(c, connectives, depth=1, bound_hi=3):
    """Closed formula whose outermost connective is in `connectives`."""
    while True:
        A = formula(c, (), depth, bound_hi)
        if tp_formula(A) in connectives:
            return A


def and_formula(c, depth=1):
    return formula_of(c, (Conn.AND,), depth)


def top_or_and_formula(c, depth=1):
    return formula_of(c, (Conn.TOP, Conn.AND), depth)


# --------------------------------------------------------------------------
# finitary derivations

def valid_axiom(c, scope=()):
    if c.int(0, 3) == 0:
        t = term(c, scope, 1)
        return axiom(eq(t, t))
    L = literal(c, scope)
    return axiom(L, negate(L))


def derivation(c, scope=(), depth=3, hi=6, bound_hi=3, induction=True, avoid=()):
    """Derivation with free variables in `scope`; binders are distinct along
    every branch, and `avoid` holds eigenvariables bound further up."""
    # leaves become likelier towards the bottom
    if depth == 0 or c.int(0, depth + 1) == 0:
        return valid_axiom(c, scope)
    fresh = [n for n in EIGEN_NAMES if n not in scope and n not in avoid]
    # binary inferences are doubled so that trees branch
    kinds = ["and", "and", "cut", "cut", "or", "ex"]
    if fresh:
        kinds += ["all", "indt", "indn"] if induction else ["all"]
    kind = c.pick(kinds)

    def sub(s=scope, extra=()):
        return derivation(c, s, depth - 1, hi, bound_hi, induction, tuple(avoid) + extra)

    if kind in ("and", "or"):
        left, right = formula(c, scope, 1, bound_hi, hi), formula(c, scope, 1, bound_hi, hi)
        if kind == "and":
            return mk(ConjI(Conj(left, right)), sub(), sub())
        return mk(DisjI(c.int(0, 1), Disj(left, right)), sub())
    if kind == "ex":
        name = next(n for n in BOUND_NAMES if n not in scope)
        G = exists_le(name, Num(c.int(0, bound_hi)), formula(c, scope + (name,), 1, bound_hi, hi))
        return mk(ExI(term(c, scope, 1, hi), G), sub())
    if kind == "cut":
        return mk(CutI(formula(c, scope, 2, bound_hi, hi)), sub(), sub())
    y = fresh[0]
    if kind == "all":
        name = next(n for n in BOUND_NAMES if n not in scope)
        A = forall_le(name, Num(c.int(0, bound_hi)), formula(c, scope + (name,), 1, bound_hi, hi))
        # the eigenvariable may occur in the child only inside the premise
        child = sub(scope + (y,))
        if y in free_vars_of_sequent(gamma_star(child)):
            child = sub(scope, (y,))
        return mk(AllI(y, A), child)
    # F(y) = s <= y is monotone, so {not F(y), F(y+1)} is a valid axiom
    F = le(term(c, scope, 1, hi), Var(y))
    step = axiom(negate(F), subst(F, y, suc(Var(y))))
    if kind == "indt":
        return mk(IndT(y, term(c, scope, 1, hi), F), step)
    return mk(IndNI(y, c.int(0, hi), c.int(0, 3), F), step)


def closed_derivation(c, depth=3, **kw):
    return derivation(c, (), depth, **kw)


# --------------------------------------------------------------------------
# notations

def _candidates(h, conn):
    return [A for A in ce.deco(h) if is_closed(A) and tp_formula(A) is conn]


def notation(c, depth=2, max_e=1, max_ord=8, base_depth=3):
    """Operator term over closed bases of height at most `max_ord`; formulas
    are mostly taken from the decorations of the operands so that inversions
    and reductions fire."""
    if depth == 0 or c.int(0, 2) == 0:
        while True:
            d = closed_derivation(c, base_depth)
            if ce.ord_ch(ce.Base(d)) <= max_ord:
                return ce.Base(d)
    kind = c.pick(["I", "R"] + (["E"] if max_e > 0 else []))
    if kind == "E":
        return ce.EOp(notation(c, depth - 1, max_e - 1, max_ord, base_depth))
    if kind == "I":
        body = notation(c, depth - 1, max_e, max_ord, base_depth)
        options = _candidates(body, Conn.AND)
        C = c.pick(options) if options and c.flip() else and_formula(c)
        return ce.IOp(c.int(0, 4), C, body)
    left = notation(c, depth - 1, max_e, max_ord, base_depth)
    right = notation(c, depth - 1, max_e, max_ord, base_depth)
    options = [negate(A) for A in _candidates(right, Conn.OR)]
    C = c.pick(options) if options and c.flip() else top_or_and_formula(c)
    return ce.ROp(C, left, right)
