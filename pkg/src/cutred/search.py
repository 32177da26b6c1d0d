"""Witness extraction as a local search over cut-reduction notations.

Starting from E^j applied to a closed instance of a finitary derivation of
an existential statement, the search repeatedly moves to an immediate
sub-derivation whose extra premise is false.  The height `ord` strictly
drops on every move, and a fixpoint is a ⋁-inference on the goal whose
chosen instance is true: that instance is the witness.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from . import cutelim as ce
from .bastar import crk_star, diagnose, gamma_star, size, substitute
from .errors import (
    AxiomAmongSolutions,
    InvariantViolation,
    NoFalseChild,
    PreconditionFailed,
    StepBudgetExceeded,
)
from .formula import (
    Exists,
    FormulaClass,
    Num,
    free_vars,
    negate,
    normalize,
    rng_formula,
    show_formula,
    sub_formula,
    subst,
    truth,
)
from .proofsys import BigAnd, BigOr, Cut, Rep, Sequent, show_symbol

log = logging.getLogger(__name__)

RECIPE_KINDS = ("S2_im1", "S2_i", "S2_ip1", "dilind")

# predicted growth of ord(h_a), recorded for bench output only
_REGIMES = {
    "S2_im1": "O(||a||)",
    "S2_i": "2^O(||a||) = |a|^O(1)",
    "S2_ip1": "2^(|a|^O(1))",
    "dilind": "2_j(O(|a|_(3+j)))",
}


class TruthOracle:
    """Memoized truth of closed formulas, counting batched queries."""

    def __init__(self):
        self._cache = {}
        self.batches = 0
        self.evaluations = 0

    def __call__(self, A) -> bool:
        key = normalize(A)
        value = self._cache.get(key)
        if value is None:
            self.evaluations += 1
            value = truth(A)
            self._cache[key] = value
        return value

    def batch(self, formulas):
        """One query answering the truth of several formulas at once."""
        self.batches += 1
        return [self(A) for A in formulas]

    def first_false(self, formulas):
        """One query returning the index of the first false formula, or None."""
        self.batches += 1
        for j, A in enumerate(formulas):
            if not self(A):
                return j
        return None


@dataclass(frozen=True)
class SearchParams:
    phi: Sequent
    class_level: int
    s: int
    e_count: int
    base_deriv: object
    goal: Exists
    var: str = "x"
    kind: str = "custom"

    @property
    def cls(self) -> FormulaClass:
        return FormulaClass(self.class_level)

    @property
    def regime(self) -> str:
        return _REGIMES.get(self.kind, "unspecified")

    def goal_at(self, a: int):
        return subst(self.goal, self.var, Num(a))


def make_params(base_deriv, class_level, e_count, kind="custom", var="x", phi=None):
    """Parameters derived from a finitary derivation of a single existential formula."""
    problems = diagnose(base_deriv, (var,))
    if problems:
        raise PreconditionFailed("variables", "; ".join(map(str, problems)))
    end = list(gamma_star(base_deriv))
    if len(end) != 1 or type(end[0]) is not Exists:
        raise PreconditionFailed("endsequent", f"expected one existential formula, got {gamma_star(base_deriv)!r}")
    goal = end[0]
    body_cls = FormulaClass(class_level)
    if not body_cls.contains(negate(goal.body)):
        raise PreconditionFailed("class", f"negated matrix of {show_formula(goal)} is not in level {class_level}")
    if phi is None:
        phi = ce.closure(ce.deco(base_deriv))
    return SearchParams(phi, class_level, size(base_deriv), e_count, base_deriv, goal, var, kind)


def recipe(kind: str, base_deriv, i: int = 1, j: int = 0) -> SearchParams:
    """Parameters for one of the witnessing regimes.

    S2_im1, S2_i, S2_ip1 use the class at level i-1 and 0, 1, 2 elimination
    prefixes; dilind uses level i and j prefixes.  The cut rank of the base
    derivation must be small enough that the prefixes bring it down to 1.
    """
    if kind not in RECIPE_KINDS:
        raise PreconditionFailed("kind", f"unknown recipe {kind!r}; choose from {', '.join(RECIPE_KINDS)}")
    if kind == "dilind":
        level, e_count = i, j
    else:
        if i < 1:
            raise PreconditionFailed("level", "the recipe needs i >= 1")
        level, e_count = i - 1, RECIPE_KINDS.index(kind)
    params = make_params(base_deriv, level, e_count, kind)
    crk = crk_star(params.cls, base_deriv)
    if crk > e_count + 1:
        raise PreconditionFailed("crk", f"cut rank {crk} exceeds {e_count + 1} for recipe {kind}")
    return params


# --------------------------------------------------------------------------
# the search problem

@dataclass
class Reference:
    """Measures of the initial notation that every solution must respect."""
    notation: object
    ord: int
    szf: int
    bd: int
    ibd: int


def initial(p: SearchParams, a: int):
    return ce.e_power(ce.Base(substitute(p.base_deriv, Num(a), p.var)), p.e_count)


def reference(p: SearchParams, a: int, check: bool = True) -> Reference:
    h = initial(p, a)
    ref = Reference(h, ce.ord_ch(h), ce.szf(h, p.s), ce.bd_ch(h), ce.ibd_ch(h))
    if check:
        goal = p.goal_at(a)
        if ce.gamma_ch(h) != Sequent([goal]):
            raise PreconditionFailed("endsequent", f"{ce.gamma_ch(h)!r} is not {{{show_formula(goal)}}}")
        if ce.crk_ch(p.cls, h) > 1:
            raise PreconditionFailed("crk", f"cut rank {ce.crk_ch(p.cls, h)} of the initial notation exceeds 1")
        bad = [A for A in ce.deco(h) if not ce.in_phi_k(A, p.phi, a)]
        if bad:
            raise PreconditionFailed("deco", f"{show_formula(bad[0])} is not an instance of the formula set")
    return ref


def solution_report(p: SearchParams, a: int, h, ref: Reference, oracle: TruthOracle | None = None) -> dict:
    """Each clause of the solution predicate with its verdict."""
    oracle = oracle or TruthOracle()
    goal = p.goal_at(a)
    side = [A for A in ce.gamma_ch(h) if normalize(A) != normalize(goal)]
    side_ok = all(not free_vars(A) and p.cls.contains(A) and not oracle(A) for A in side)
    out = {
        "side-formulas": side_ok,
        "crk": ce.crk_ch(p.cls, h) <= 1,
        "ord": ce.ord_ch(h) <= ref.ord,
        "szf": ce.szf(h, p.s) <= ref.szf,
        "bd": ce.bd_ch(h) <= ref.bd and ce.ibd_ch(h) <= ref.ibd,
        # the initial notation is only known to lie in Phi_a, and bd(h_a) may be below a
        "deco": ce.subseteq_phi_k(ce.deco(h), p.phi, max(a, ref.bd)),
        "comp": ce.is_comp(h) and max(ce.base_sizes(h)) <= p.s,
    }
    return out


def is_solution(p: SearchParams, a: int, h, ref: Reference | None = None, oracle=None) -> bool:
    ref = ref or reference(p, a, check=False)
    return all(solution_report(p, a, h, ref, oracle).values())


def neighbour(p: SearchParams, a: int, h, oracle: TruthOracle):
    """Deterministic neighbourhood: returns (next notation, child index or None)."""
    tp = ce.tp_ch(h)
    t = type(tp)
    if t is BigAnd:
        C = tp.formula
        n = rng_formula(C)
        j = oracle.first_false(sub_formula(C, i) for i in range(n))
        if j is None:
            raise NoFalseChild(f"every instance of {show_formula(C)} below {n} is true")
        return ce.child_ch(h, j), j
    if t is BigOr:
        C = tp.formula
        if normalize(C) == normalize(p.goal_at(a)):
            (holds,) = oracle.batch([sub_formula(C, tp.index)])
            if holds:
                return h, None
        return ce.child_ch(h, 0), 0
    if t is Cut:
        (holds,) = oracle.batch([tp.formula])
        j = 1 if holds else 0
        return ce.child_ch(h, j), j
    if t is Rep:
        return ce.child_ch(h, 0), 0
    raise AxiomAmongSolutions(f"reached an axiom {show_symbol(tp)} while every side formula is false")


@dataclass
class Step:
    tp: str
    child_index: int | None
    ord: int
    size: int
    batches: int

    def to_json(self):
        return {"tp": self.tp, "childIndex": self.child_index, "ord": self.ord, "size": self.size}


@dataclass
class Witness:
    a: int
    value: int
    steps: list
    ord_initial: int
    checks: dict = field(default_factory=dict)
    truth_evaluations: int = 0

    @property
    def path_length(self) -> int:
        return len(self.steps) - 1

    @property
    def max_size(self) -> int:
        return max(s.size for s in self.steps)

    def to_json(self):
        return {
            "a": self.a,
            "steps": [s.to_json() for s in self.steps],
            "witness": self.value,
            "pathLength": self.path_length,
            "ordInitial": self.ord_initial,
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2)


def run_search(p: SearchParams, a: int, check_states: bool = True, budget: int | None = None) -> Witness:
    """Follow the canonical path from the initial notation to a fixpoint.

    With `check_states` every visited notation is checked against the
    solution predicate; a failure raises, since it would break soundness.
    """
    ref = reference(p, a)
    if budget is None:
        budget = ref.ord + 1
    oracle = TruthOracle()
    side_oracle = TruthOracle()
    h = ref.notation
    steps = []
    while True:
        if check_states:
            report = solution_report(p, a, h, ref, side_oracle)
            failed = [k for k, ok in report.items() if not ok]
            if failed:
                raise InvariantViolation(f"state {len(steps)} violates the solution clauses {failed}")
        before = oracle.batches
        nxt, j = neighbour(p, a, h, oracle)
        steps.append(Step(show_symbol(ce.tp_ch(h)), j, ce.ord_ch(h), ce.size_ch(h), oracle.batches - before))
        if j is None:
            break
        if ce.ord_ch(nxt) >= ce.ord_ch(h):
            raise StepBudgetExceeded(f"height did not drop at step {len(steps)}")
        h = nxt
        if len(steps) > budget:
            raise StepBudgetExceeded(f"no fixpoint within {budget} steps")
    value = ce.tp_ch(h).index
    holds = truth(sub_formula(p.goal_at(a), value))
    w = Witness(a, value, steps, ref.ord, truth_evaluations=oracle.evaluations)
    w.checks = {
        "witnessTrue": holds,
        "pathWithinOrd": w.path_length <= ref.ord,
        "batchesPerStep": max(s.batches for s in steps),
    }
    log.info("a=%d witness=%d path=%d ord=%d", a, value, w.path_length, ref.ord)
    return w
