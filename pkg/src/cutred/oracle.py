"""Eager reference implementation of the cut-reduction operators on explicit trees.

Trees are finite prefixes of infinitary derivations: ⋀-nodes keep at most
`width` children and everything below `depth` levels is a `Truncated`
marker.  The operators are evaluated eagerly, level by level, and never
look below a marker, so any node they produce outside a marker is exact.
"""
from __future__ import annotations

import json
from functools import lru_cache

from .cutelim import Base, IOp, ROp, child_ch, effective_arity_ch, tp_ch
from .errors import InvariantViolation, RankViolation, WidthExceeded
from .formula import Conn, negate, normalize, rank, sub_formula, tp_formula
from .immutable import node
from .proofsys import REP, BigAnd, BigOr, Cut, conclusion, cut_on, show_symbol, symbol_to_json, symbols_ieq

_CACHE = 1 << 18


@node
class Tree:
    symbol: object
    children: tuple


@node
class Truncated:
    """Stands for a subtree that was not materialized; never equal to any leaf."""


TRUNCATED = Truncated()


@lru_cache(maxsize=_CACHE)
def denote(h, width: int, depth: int):
    """The first `depth` levels of the tree denoted by notation `h`."""
    if depth <= 0:
        return TRUNCATED
    n = min(effective_arity_ch(h), width)
    return Tree(tp_ch(h), tuple(denote(child_ch(h, j), width, depth - 1) for j in range(n)))


def _child(d, k):
    if k >= len(d.children):
        raise WidthExceeded(f"operator needs child {k} of {show_symbol(d.symbol)}, only {len(d.children)} kept")
    return d.children[k]


@lru_cache(maxsize=_CACHE)
def eager_I(k: int, C, d, depth: int):
    if depth <= 0 or d is TRUNCATED:
        return TRUNCATED
    sym = d.symbol
    if type(sym) is BigAnd and normalize(sym.formula) == normalize(C):
        return Tree(REP, (eager_I(k, C, _child(d, k), depth - 1),))
    return Tree(sym, tuple(eager_I(k, C, c, depth - 1) for c in d.children))


@lru_cache(maxsize=_CACHE)
def eager_R(C, d0, d1, depth: int, cls=None):
    if depth <= 0 or d1 is TRUNCATED:
        return TRUNCATED
    sym = d1.symbol
    if negate(C) not in conclusion(sym):
        return Tree(sym, tuple(eager_R(C, d0, c, depth - 1, cls) for c in d1.children))
    if type(sym) is not BigOr or tp_formula(C) is not Conn.AND:
        raise InvariantViolation(f"{show_symbol(sym)} concludes the negation of the reduced formula")
    k = sym.index
    Ck = sub_formula(C, k)
    if cls is not None and rank(cls, C) > 0 and rank(cls, Ck) >= rank(cls, C):
        raise RankViolation(f"rank of instance {k} does not drop below the rank of the reduced formula")
    cut, swapped = cut_on(Ck)
    inverted = eager_I(k, C, d0, depth - 1)
    reduced = eager_R(C, d0, _child(d1, 0), depth - 1, cls)
    return Tree(cut, (reduced, inverted) if swapped else (inverted, reduced))


@lru_cache(maxsize=_CACHE)
def eager_E(d, depth: int, cls=None):
    if depth <= 0 or d is TRUNCATED:
        return TRUNCATED
    sym = d.symbol
    if type(sym) is Cut:
        left = eager_E(_child(d, 0), depth - 1, cls)
        right = eager_E(_child(d, 1), depth - 1, cls)
        return Tree(REP, (eager_R(sym.formula, left, right, depth - 1, cls),))
    return Tree(sym, tuple(eager_E(c, depth - 1, cls) for c in d.children))


def interpret(h, width: int, depth: int, cls=None):
    """Explicit tree of notation `h`, applying the eager operator for every
    operator symbol on top of the denoted base trees."""
    t = type(h)
    if t is Base:
        return denote(h, width, depth)
    if t is IOp:
        return eager_I(h.k, h.formula, interpret(h.body, width, depth, cls), depth)
    if t is ROp:
        return eager_R(h.formula, interpret(h.left, width, depth, cls),
                       interpret(h.right, width, depth, cls), depth, cls)
    return eager_E(interpret(h.body, width, depth, cls), depth, cls)


def node_at(tree, path):
    """Subtree at `path`, TRUNCATED when it runs into a marker, None past the kept children."""
    for j in path:
        if tree is TRUNCATED:
            return TRUNCATED
        if j >= len(tree.children):
            return None
        tree = tree.children[j]
    return tree


def paths(tree, max_len: int, prefix=()):
    """Every path of length <= max_len that stays clear of truncation markers."""
    if tree is TRUNCATED:
        return
    yield prefix
    if len(prefix) == max_len:
        return
    for j, c in enumerate(tree.children):
        yield from paths(c, max_len, prefix + (j,))


def compare_lazy_eager(h, width: int, depth: int, max_len: int, cls=None):
    """Paths on which the eager tree and lazy exploration disagree (modulo ieq)."""
    tree = interpret(h, width, depth, cls)
    mismatches = []
    checked = 0
    for p in paths(tree, max_len):
        sub = node_at(tree, p)
        lazy = h
        for j in p:
            lazy = child_ch(lazy, j)
        checked += 1
        if not symbols_ieq(sub.symbol, tp_ch(lazy)):
            mismatches.append((p, sub.symbol, tp_ch(lazy)))
    return checked, mismatches


def is_complete(tree) -> bool:
    if tree is TRUNCATED:
        return False
    return all(is_complete(c) for c in tree.children)


# --------------------------------------------------------------------------
# dumps

def dump_text(tree, indent: str = "  ") -> str:
    lines = []

    def walk(t, level):
        if t is TRUNCATED:
            lines.append(indent * level + "...")
            return
        lines.append(indent * level + show_symbol(t.symbol))
        for c in t.children:
            walk(c, level + 1)

    walk(tree, 0)
    return "\n".join(lines)


def to_json(tree):
    if tree is TRUNCATED:
        return {"truncated": True}
    out = symbol_to_json(tree.symbol)
    out["children"] = [to_json(c) for c in tree.children]
    return out


def dump_json(tree) -> str:
    return json.dumps(to_json(tree), indent=2)
