"""Notations for continuous cut-elimination over closed finitary derivations.

Three operator symbols extend the base notations: `IOp` inverts a ⋀-formula
at a fixed index, `ROp` reduces a cut on a ⊤/⋀-formula, and `EOp` lowers
the cut rank by one.  Last inference and sub-derivations of a compound
notation are computed by inspecting only the last inference of its parts.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from . import hba
from .bastar import AX_ZERO, crk_star
from .config import get_config
from .errors import InvariantViolation, ResourceCap, WellFormednessError
from .formula import (
    App,
    Conj,
    Conn,
    Disj,
    FormulaClass,
    Literal,
    Num,
    Var,
    eval_term,
    free_vars,
    negate,
    normalize,
    normalize_term,
    rng_formula,
    show_formula,
    sub_formula,
    subst,
    term_vars,
    tp_formula,
)
from .immutable import node
from .proofsys import REP, BigAnd, BigOr, Cut, Sequent, arity, conclusion, cut_on, premise, rng_symbol

_CACHE = 1 << 18


@node
class Base:
    deriv: object


@node
class IOp:
    k: int
    formula: object
    body: object

    def __post_init__(self):
        if self.k < 0:
            raise WellFormednessError("inversion index must be a natural number")
        if tp_formula(self.formula) is not Conn.AND:
            raise WellFormednessError(f"inversion needs a ⋀-formula: {show_formula(self.formula)}")


@node
class ROp:
    formula: object
    left: object
    right: object

    def __post_init__(self):
        if tp_formula(self.formula) not in (Conn.TOP, Conn.AND):
            raise WellFormednessError(f"reduction needs a ⊤/⋀-formula: {show_formula(self.formula)}")


@node
class EOp:
    body: object


BASE_AX_ZERO = Base(AX_ZERO)


def e_power(h, k: int):
    for _ in range(k):
        h = EOp(h)
    return h


def children_of(h) -> tuple:
    t = type(h)
    if t is IOp or t is EOp:
        return (h.body,)
    if t is ROp:
        return (h.left, h.right)
    return ()


# --------------------------------------------------------------------------
# last inference and sub-derivations

@lru_cache(maxsize=_CACHE)
def _shape(h):
    """(tp, case tag, extra) for `h`; the tag selects the child table."""
    t = type(h)
    if t is Base:
        return hba.tp_h(h.deriv), "base", None
    if t is IOp:
        inner = tp_ch(h.body)
        if type(inner) is BigAnd and normalize(inner.formula) == normalize(h.formula):
            return REP, "inv", None
        return inner, "push", None
    if t is ROp:
        inner = tp_ch(h.right)
        neg = negate(h.formula)
        if neg not in conclusion(inner):
            return inner, "push", None
        if type(inner) is not BigOr or normalize(inner.formula) != normalize(neg):
            raise InvariantViolation(f"reduction met {inner!r} concluding the negated cut formula")
        k = inner.index
        sym, swapped = cut_on(sub_formula(h.formula, k))
        return sym, "cut", (k, swapped)
    inner = tp_ch(h.body)
    if type(inner) is Cut:
        return REP, "elim", inner.formula
    return inner, "push", None


def tp_ch(h):
    return _shape(h)[0]


@lru_cache(maxsize=_CACHE)
def child_ch(h, j: int):
    tp, case, extra = _shape(h)
    if j >= arity(tp):
        return BASE_AX_ZERO
    t = type(h)
    if t is Base:
        return Base(hba.child_h(h.deriv, j))
    if t is IOp:
        index = h.k if case == "inv" else j
        return IOp(h.k, h.formula, child_ch(h.body, index))
    if t is ROp:
        if case == "push":
            return ROp(h.formula, h.left, child_ch(h.right, j))
        k, swapped = extra
        inverted = IOp(k, h.formula, h.left)
        reduced = ROp(h.formula, h.left, child_ch(h.right, 0))
        pair = (reduced, inverted) if swapped else (inverted, reduced)
        return pair[j]
    if case == "elim":
        # cut symbols always carry a ⊤/⋀-formula, so no premise exchange is needed here
        return ROp(extra, EOp(child_ch(h.body, 0)), EOp(child_ch(h.body, 1)))
    return EOp(child_ch(h.body, j))


def child_path(h, path):
    for j in path:
        h = child_ch(h, j)
    return h


def rng_ch(h) -> int:
    return rng_symbol(tp_ch(h))


def faithfulness_gap(h, indices=None) -> Sequent:
    """Formulas that the last inference and the children at `indices` need
    but the endsequent of `h` does not provide; empty when `h` is locally faithful.

    By default the children below the range are checked, plus the first index
    past it for ⋀-inferences (whose arity is infinite).
    """
    tp = tp_ch(h)
    if indices is None:
        n = rng_symbol(tp)
        indices = range(n + 1) if type(tp) is BigAnd else range(n)
    need = list(conclusion(tp))
    for j in indices:
        need.extend(A for A in gamma_ch(child_ch(h, j)) if A not in premise(tp, j))
    return Sequent(need).minus(gamma_ch(h))


def effective_arity_ch(h) -> int:
    tp = tp_ch(h)
    return rng_symbol(tp) if type(tp) is BigAnd else arity(tp)


# --------------------------------------------------------------------------
# endsequent, measures

@lru_cache(maxsize=_CACHE)
def gamma_ch(h) -> Sequent:
    t = type(h)
    if t is Base:
        return hba.gamma_h(h.deriv)
    if t is IOp:
        C = h.formula
        return Sequent([sub_formula(C, h.k)]) | gamma_ch(h.body).minus(Sequent([C]))
    if t is ROp:
        C = h.formula
        return gamma_ch(h.left).minus(Sequent([C])) | gamma_ch(h.right).minus(Sequent([negate(C)]))
    return gamma_ch(h.body)


@lru_cache(maxsize=_CACHE)
def crk_ch(cls: FormulaClass, h) -> int:
    t = type(h)
    if t is Base:
        return crk_star(cls, h.deriv)
    if t is IOp:
        return crk_ch(cls, h.body)
    if t is ROp:
        return max(crk_ch(cls, h.left), crk_ch(cls, h.right))
    return max(crk_ch(cls, h.body) - 1, 0)


@lru_cache(maxsize=_CACHE)
def size_ch(h) -> int:
    t = type(h)
    if t is Base:
        return hba.size_h(h.deriv)
    if t is ROp:
        return size_ch(h.left) + size_ch(h.right) + 1
    return size_ch(h.body) + 1


def iexp(n: int, x: int) -> int:
    """Iterated exponentiation 2_n(x)."""
    cap = get_config().magnitude_cap
    for _ in range(n):
        if x + 1 > cap:
            raise ResourceCap(f"2^{x} exceeds the magnitude cap of {cap} bits")
        x = 1 << x
    return x


def tower_le(value: int, n: int, x: int) -> bool:
    """value <= 2_n(x), decided without materializing the tower."""
    if n == 0:
        return value <= x
    if value <= 1:
        return True
    # value <= 2**E  iff  bit_length(value - 1) <= E
    return tower_le((value - 1).bit_length(), n - 1, x)


def exp_minus_one(o: int) -> int:
    """2**o - 1 under the magnitude and tower caps."""
    config = get_config()
    if o > config.magnitude_cap:
        raise ResourceCap(f"height 2^{o}-1 exceeds the magnitude cap of {config.magnitude_cap} bits")
    value = (1 << o) - 1
    if not tower_le(value, *config.tower_cap):
        raise ResourceCap(f"height exceeds the tower cap 2_{config.tower_cap[0]}({config.tower_cap[1]})")
    return value


@lru_cache(maxsize=_CACHE)
def ord_ch(h) -> int:
    t = type(h)
    if t is Base:
        return hba.ord_h(h.deriv)
    if t is IOp:
        return ord_ch(h.body)
    if t is ROp:
        return ord_ch(h.left) + ord_ch(h.right)
    return exp_minus_one(ord_ch(h.body))


@lru_cache(maxsize=_CACHE)
def bd_ch(h) -> int:
    t = type(h)
    if t is Base:
        return hba.bd_h(h.deriv)
    if t is IOp:
        return bd_ch(h.body) if h.k < rng_formula(h.formula) else 0
    if t is ROp:
        return max(bd_ch(h.left), bd_ch(h.right))
    return bd_ch(h.body)


@lru_cache(maxsize=_CACHE)
def ibd_ch(h) -> int:
    t = type(h)
    if t is Base:
        return hba.ibd_h(h.deriv)
    if t is ROp:
        return max(ibd_ch(h.left), ibd_ch(h.right))
    return ibd_ch(h.body)


@lru_cache(maxsize=_CACHE)
def deco_ch(h) -> Sequent:
    t = type(h)
    if t is Base:
        return hba.deco_h(h.deriv)
    if t is IOp:
        return Sequent([sub_formula(h.formula, h.k)]) | deco_ch(h.body)
    if t is ROp:
        return deco_ch(h.left) | deco_ch(h.right)
    return deco_ch(h.body)


def deco(h) -> Sequent:
    """Decorations of a notation or of a finitary derivation."""
    if type(h) in (Base, IOp, ROp, EOp):
        return deco_ch(h)
    return hba.deco_h(h)


@lru_cache(maxsize=_CACHE)
def is_comp(h) -> bool:
    """Every inversion index is below the range of its formula."""
    if type(h) is IOp and h.k >= rng_formula(h.formula):
        return False
    return all(is_comp(c) for c in children_of(h))


@lru_cache(maxsize=_CACHE)
def base_sizes(h) -> frozenset:
    """Sizes of the finitary derivations at the leaves of `h`."""
    if type(h) is Base:
        return frozenset((hba.size_h(h.deriv),))
    out = frozenset()
    for c in children_of(h):
        out |= base_sizes(c)
    return out


# --------------------------------------------------------------------------
# size functions

@lru_cache(maxsize=_CACHE)
def szf(h, s: int) -> int:
    """Size function: bounds the size of every notation reachable from `h`
    when every base reachable along the way has size at most s."""
    t = type(h)
    if t is Base:
        return s
    if t is IOp:
        return szf(h.body, s) + 1
    if t is ROp:
        return max(size_ch(h.left) + 1 + szf(h.right, s), szf(h.left, s) + 1)
    return ord_ch(h.body) * (szf(h.body, s) + 2)


@lru_cache(maxsize=_CACHE)
def szf_k(h, s: int, k: int) -> int:
    """Size function for at most k reduction steps."""
    t = type(h)
    if t is Base:
        return s
    if t is IOp:
        return szf_k(h.body, s, k) + 1
    if t is ROp:
        return max(size_ch(h.left) + 1 + szf_k(h.right, s, k), szf_k(h.left, s, k) + 1)
    return (k + 1) * (szf_k(h.body, s, k) + 2)


# --------------------------------------------------------------------------
# abstract notations: operator shape over opaque bases

@node
class ABase:
    ref: object
    size: int
    ord: int


@node
class AI:
    body: object


@node
class AR:
    left: object
    right: object


@node
class AE:
    body: object


@lru_cache(maxsize=_CACHE)
def abstract(h):
    t = type(h)
    if t is Base:
        return ABase(h.deriv, hba.size_h(h.deriv), hba.ord_h(h.deriv))
    if t is IOp:
        return AI(abstract(h.body))
    if t is ROp:
        return AR(abstract(h.left), abstract(h.right))
    return AE(abstract(h.body))


@lru_cache(maxsize=_CACHE)
def a_size(a) -> int:
    t = type(a)
    if t is ABase:
        return a.size
    if t is AR:
        return a_size(a.left) + a_size(a.right) + 1
    return a_size(a.body) + 1


@lru_cache(maxsize=_CACHE)
def a_ord(a) -> int:
    t = type(a)
    if t is ABase:
        return a.ord
    if t is AI:
        return a_ord(a.body)
    if t is AR:
        return a_ord(a.left) + a_ord(a.right)
    return exp_minus_one(a_ord(a.body))


@lru_cache(maxsize=_CACHE)
def a_szf(a, s: int) -> int:
    t = type(a)
    if t is ABase:
        return s
    if t is AI:
        return a_szf(a.body, s) + 1
    if t is AR:
        return max(a_size(a.left) + 1 + a_szf(a.right, s), a_szf(a.left, s) + 1)
    return a_ord(a.body) * (a_szf(a.body, s) + 2)


def _base_steps(d):
    h = Base(d)
    return [abstract(child_ch(h, j)) for j in range(effective_arity_ch(h))]


def a_steps(a) -> list:
    """One-step reducts of `a` in the closure under the operator rules."""
    t = type(a)
    if t is ABase:
        return _base_steps(a.ref)
    if t is AI:
        return [AI(b) for b in a_steps(a.body)]
    if t is AR:
        return [AR(a.left, b) for b in a_steps(a.right)] + [AI(a.left)]
    inner = a_steps(a.body)
    out = [AE(b) for b in inner]
    out.extend(AR(AE(b), AE(c)) for b in inner for c in inner)
    return out


# --------------------------------------------------------------------------
# exploration and reachability

@dataclass(frozen=True)
class Exploration:
    symbol: object
    notation: object
    sizes: tuple


def explore(h, path=()):
    """Follow `path` from `h`; returns the last inference there, the notation
    reached and the size of every notation visited (including `h`)."""
    sizes = [size_ch(h)]
    for j in path:
        h = child_ch(h, j)
        sizes.append(size_ch(h))
    return Exploration(tp_ch(h), h, tuple(sizes))


def successors(h) -> list:
    return [child_ch(h, j) for j in range(effective_arity_ch(h))]


def reachable(h, depth: int | None = None):
    """Breadth-first map from each notation reachable within `depth` steps to its distance."""
    if depth is None:
        depth = get_config().explore_depth
    seen = {h: 0}
    queue = deque([h])
    while queue:
        cur = queue.popleft()
        d = seen[cur]
        if d == depth:
            continue
        for nxt in successors(cur):
            if nxt not in seen:
                seen[nxt] = d + 1
                queue.append(nxt)
    return seen


def edges(h, depth: int | None = None):
    """Every (parent, child) edge explored within `depth` steps of `h`."""
    dist = reachable(h, depth)
    limit = get_config().explore_depth if depth is None else depth
    for cur, d in dist.items():
        if d < limit:
            for nxt in successors(cur):
                yield cur, nxt


# --------------------------------------------------------------------------
# formula sets with constants substituted for free variables

_KEEP = "keep"


def _match_term(pat, target, bound, binding, limit):
    if type(pat) is Var and pat.name not in bound:
        if target == pat:
            # the variable stays free in the instance
            value = _KEEP
        elif term_vars(target):
            return False
        else:
            value = eval_term(target)
            if value > limit:
                return False
        old = binding.setdefault(pat.name, value)
        return old == value
    if type(pat) is Var:
        return pat == target
    if not (term_vars(pat) - bound):
        # closed relative to the pattern's free variables: compare values or shape
        if not term_vars(target) and not term_vars(pat):
            return eval_term(pat) == eval_term(target)
        return normalize_term(pat) == normalize_term(target)
    if type(target) is not App or target.symbol != pat.symbol:
        return False
    return all(_match_term(p, q, bound, binding, limit) for p, q in zip(pat.args, target.args))


def _match(pat, target, bound, binding, limit):
    t = type(pat)
    if t is not type(target):
        return False
    if t is Literal:
        return (pat.positive == target.positive and pat.rel == target.rel
                and _match_term(pat.lhs, target.lhs, bound, binding, limit)
                and _match_term(pat.rhs, target.rhs, bound, binding, limit))
    if t is Conj or t is Disj:
        return (_match(pat.left, target.left, bound, binding, limit)
                and _match(pat.right, target.right, bound, binding, limit))
    if pat.var != target.var:
        return False
    return _match(pat.body, target.body, bound | {pat.var}, binding, limit)


def instance_of(pattern, A, K: int) -> bool:
    """Whether A is ≈ to `pattern` with some of its free variables replaced by numerals <= K."""
    fv = free_vars(pattern)
    if not fv:
        return normalize(pattern) == normalize(A)
    for target in (A, normalize(A)):
        binding = {}
        if _match(pattern, target, frozenset(), binding, K):
            inst = pattern
            for name in fv:
                value = binding.get(name, 0)
                if value != _KEEP:
                    inst = subst(inst, name, Num(value))
            if normalize(inst) == normalize(A):
                return True
    return False


@lru_cache(maxsize=_CACHE)
def in_phi_k(A, Phi: Sequent, K: int) -> bool:
    return any(instance_of(phi, A, K) for phi in Phi)


def phi_k(Phi: Sequent, K: int, limit: int = 100_000) -> Sequent:
    """All instances of Phi with free variables replaced by numerals 0..K."""
    out = []
    for phi in Phi:
        names = sorted(free_vars(phi))
        if (K + 1) ** len(names) > limit:
            raise ResourceCap(f"{(K + 1) ** len(names)} instances exceed the enumeration limit {limit}")
        for values in itertools.product(range(K + 1), repeat=len(names)):
            inst = phi
            for name, v in zip(names, values):
                inst = subst(inst, name, Num(v))
            out.append(inst)
    return Sequent(out)


def subseteq_phi_k(S, Phi: Sequent, K: int) -> bool:
    return all(in_phi_k(A, Phi, K) for A in S)


def closure(formulas) -> Sequent:
    """Smallest superset closed under negation and immediate sub-formulas.

    Quantified sub-formulas keep their bound variable free, so instances are
    reached through the constant substitution of the Φ_K construction.
    """
    out = {}
    stack = list(formulas)
    while stack:
        A = stack.pop()
        key = normalize(A)
        if key in out:
            continue
        out[key] = A
        stack.append(negate(A))
        t = type(A)
        if t is Literal:
            continue
        if t is Conj or t is Disj:
            stack.extend((A.left, A.right))
        else:
            stack.append(A.body)
    return Sequent(out.values())

