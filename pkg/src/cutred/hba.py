"""Closed finitary derivations read as notations for infinitary derivations.

A closed derivation `h` denotes an infinitary tree through its last
inference `tp_h(h)` and its immediate sub-derivations `child_h(h, j)`.
Inductions unfold by splitting their interval in halves, so the denoted
height depends on a bound for the logarithm of every interval length.
"""
from __future__ import annotations

from functools import lru_cache

from .bastar import (
    AX_ZERO,
    AllI,
    AxSeq,
    ConjI,
    Deriv,
    DisjI,
    ExI,
    IndNI,
    IndT,
    deco_star,
    gamma_star,
    size,
    substitute,
)
from .config import get_config
from .errors import NoTrueLiteral, ResourceCap
from .formula import Num, eval_term, formula_key, literal_value, quantifier_bound, show_formula, subst
from .proofsys import REP, Ax, BigAnd, BigOr, arity, cut_on

_CACHE = 1 << 18


def _least_true_literal(literals):
    true = [L for L in literals if literal_value(L)]
    if not true:
        raise NoTrueLiteral("axiom without a true literal: " + ", ".join(map(show_formula, literals)))
    return min(true, key=formula_key)


def _split_point(sym):
    return Num(sym.start + 2 ** (sym.exponent - 1))


@lru_cache(maxsize=_CACHE)
def _tp_and_swap(h):
    sym = h.symbol
    t = type(sym)
    if t is AxSeq:
        return Ax(_least_true_literal(sym.literals)), False
    if t is ConjI or t is AllI:
        return BigAnd(sym.formula), False
    if t is DisjI:
        return BigOr(sym.k, sym.formula), False
    if t is ExI:
        return BigOr(eval_term(sym.term), sym.formula), False
    if t is IndT or (t is IndNI and sym.exponent == 0):
        return REP, False
    if t is IndNI:
        return cut_on(subst(sym.formula, sym.eigen, _split_point(sym)))
    return cut_on(sym.formula)


def tp_h(h):
    """Last inference of the infinitary derivation denoted by closed `h`.

    Cuts on formulas of connective ⊥/⋁ are reported as cuts on the negation,
    with the two premises exchanged accordingly.
    """
    return _tp_and_swap(h)[0]


@lru_cache(maxsize=_CACHE)
def child_h(h, j: int):
    sym, swapped = _tp_and_swap(h)
    if j >= arity(sym):
        return AX_ZERO
    s = h.symbol
    t = type(s)
    kids = h.children
    if t is ConjI:
        return kids[min(j, 1)]
    if t is DisjI or t is ExI:
        return kids[0]
    if t is AllI:
        return substitute(kids[0], Num(j), s.eigen)
    if t is IndT:
        length = eval_term(s.bound).bit_length()
        return Deriv(IndNI(s.eigen, 0, length, s.formula), kids)
    if t is IndNI:
        if s.exponent == 0:
            return substitute(kids[0], Num(s.start), s.eigen)
        lower = Deriv(IndNI(s.eigen, s.start, s.exponent - 1, s.formula), kids)
        upper = Deriv(IndNI(s.eigen, _split_point(s).value, s.exponent - 1, s.formula), kids)
        halves = (upper, lower) if swapped else (lower, upper)
        return halves[j]
    # CutI
    return kids[1 - j] if swapped else kids[j]


gamma_h = gamma_star
size_h = size
deco_h = deco_star


@lru_cache(maxsize=_CACHE)
def ord_m(h, m: int) -> int:
    """Denoted height, given `m` bounding the log of every induction length."""
    sym = h.symbol
    t = type(sym)
    if t is IndNI:
        return ord_m(h.children[0], m) + sym.exponent + 1
    if t is IndT:
        return ord_m(h.children[0], m) + m + 1
    return 1 + max((ord_m(c, m) for c in h.children), default=0)


# --------------------------------------------------------------------------
# bounding data

class _Exceeded(Exception):
    pass


def _checked(value, limit):
    if limit is not None and value > limit:
        raise _Exceeded
    return value


def _pow2(exponent, limit):
    # 2**e > limit exactly when e >= bit_length(limit)
    if limit is not None and exponent >= limit.bit_length():
        raise _Exceeded
    cap = get_config().magnitude_cap
    if exponent + 1 > cap:
        raise ResourceCap(f"bound 2^{exponent} exceeds the magnitude cap of {cap} bits")
    return 1 << exponent


def _binder_value(sym):
    bound = quantifier_bound(sym.formula.var, sym.formula.body)
    return 0 if bound is None else eval_term(bound)


@lru_cache(maxsize=_CACHE)
def _bd(h, limit):
    sym = h.symbol
    t = type(sym)
    if t is AllI:
        b = _checked(_binder_value(sym), limit)
        return max(_bd(substitute(h.children[0], Num(b), sym.eigen), limit), b)
    if t is ExI:
        return max(_bd(h.children[0], limit), _checked(eval_term(sym.term), limit))
    if t is IndT:
        p = _pow2(eval_term(sym.bound).bit_length(), limit)
        return max(_bd(substitute(h.children[0], Num(p), sym.eigen), limit), p)
    if t is IndNI:
        v = _checked(sym.start + _pow2(sym.exponent, limit), limit)
        return max(_bd(substitute(h.children[0], Num(v), sym.eigen), limit), v)
    return max((_bd(c, limit) for c in h.children), default=0)


@lru_cache(maxsize=_CACHE)
def _ibd(h, limit):
    sym = h.symbol
    t = type(sym)
    if t is AllI:
        # the substituted value itself is bounded by bd, not ibd
        b = _binder_value(sym)
        return _ibd(substitute(h.children[0], Num(b), sym.eigen), limit)
    if t is IndT:
        p = _pow2(eval_term(sym.bound).bit_length(), limit)
        return max(_ibd(substitute(h.children[0], Num(p), sym.eigen), limit), p)
    if t is IndNI:
        v = sym.start + _pow2(sym.exponent, None)
        return max(_ibd(substitute(h.children[0], Num(v), sym.eigen), limit), _pow2(sym.exponent, limit))
    return max((_ibd(c, limit) for c in h.children), default=0)


def bd_h(h) -> int:
    """Largest value substituted during the embedding of `h` (exact)."""
    return _bd(h, None)


def ibd_h(h) -> int:
    """Bound on every induction length arising during the embedding of `h` (exact)."""
    return _ibd(h, None)


def bd_le(h, m: int) -> bool:
    """Decide bd_h(h) <= m, stopping as soon as an intermediate value exceeds m."""
    try:
        _bd(h, m)
    except _Exceeded:
        return False
    return True


def ibd_le(h, m: int) -> bool:
    try:
        _ibd(h, m)
    except _Exceeded:
        return False
    return True


def ord_h(h) -> int:
    return ord_m(h, ibd_h(h).bit_length())


def ord_capped(h, m: int) -> int:
    """ord_m with m replaced by min(|ibd(h)|, m); never materializes a large ibd."""
    if ibd_le(h, (1 << m) - 1):
        return ord_m(h, ibd_h(h).bit_length())
    return ord_m(h, m)
