import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutred.bastar import AX_ZERO, AllI, CutI, ExI, IndNI, IndT, axiom, gamma_star, mk, substitute
from cutred.errors import NoTrueLiteral
from cutred.formula import App, Exists, Num, Var, eq, exists_le, forall_le, le, negate, subst, suc
from cutred.hba import bd_h, bd_le, child_h, ibd_h, ibd_le, ord_capped, ord_h, ord_m, tp_h
from cutred.proofsys import REP, Ax, BigAnd, BigOr, Cut, Sequent, conclusion, effective_arity, premise, symbols_ieq

from strategies import closed_derivation, derivation, strategy, term

y = Var("y")
TRUE = eq(Num(0), Num(0))
F = le(Num(0), y)
STEP = axiom(negate(F), subst(F, "y", suc(y)))


def test_tp_examples():
    assert tp_h(mk(IndT("y", Num(6), F), STEP)) == REP
    assert tp_h(mk(IndNI("y", 0, 0, F), STEP)) == REP
    assert symbols_ieq(tp_h(mk(IndNI("y", 3, 2, F), STEP)), Cut(le(Num(0), Num(5))))
    G = exists_le("q", Num(9), eq(Var("q"), Num(4)))
    h = mk(ExI(App("add", (Num(2), Num(2))), G), axiom(eq(Num(4), Num(4))))
    assert tp_h(h) == BigOr(4, G)


def test_axiom_uses_least_true_literal():
    h = axiom(le(Num(1), Num(0)), TRUE, le(Num(0), Num(0)))
    assert tp_h(h) in (Ax(TRUE), Ax(le(Num(0), Num(0))))
    assert tp_h(h) == tp_h(axiom(le(Num(0), Num(0)), TRUE))
    with pytest.raises(NoTrueLiteral):
        tp_h(axiom(le(Num(1), Num(0))))


def test_child_examples():
    ind = mk(IndT("y", Num(6), F), STEP)
    assert child_h(ind, 0) == mk(IndNI("y", 0, 3, F), STEP)
    half = mk(IndNI("y", 3, 2, F), STEP)
    assert child_h(half, 0) == mk(IndNI("y", 3, 1, F), STEP)
    assert child_h(half, 1) == mk(IndNI("y", 5, 1, F), STEP)
    A = forall_le("x", Num(5), le(App("min", (Var("x"), Num(5))), Num(5)))
    body = axiom(le(App("min", (y, Num(5))), Num(5)))
    h = mk(AllI("y", A), body)
    assert child_h(h, 3) == substitute(body, Num(3), "y")
    assert child_h(mk(IndNI("y", 2, 0, F), STEP), 0) == substitute(STEP, Num(2), "y")


def test_children_beyond_arity_are_default_axiom():
    assert child_h(axiom(TRUE), 0) == AX_ZERO
    cut = mk(CutI(TRUE), axiom(TRUE), axiom(TRUE))
    assert child_h(cut, 2) == AX_ZERO
    assert child_h(mk(IndT("y", Num(6), F), STEP), 1) == AX_ZERO


def test_cut_on_false_formula_swaps_premises():
    C = le(Num(2), Num(1))
    left, right = axiom(C, TRUE), axiom(negate(C))
    h = mk(CutI(C), left, right)
    assert tp_h(h) == Cut(negate(C))
    assert child_h(h, 0) == right and child_h(h, 1) == left


def test_ord_examples():
    assert ord_h(axiom(TRUE)) == 1
    assert ord_m(mk(IndT("y", Num(6), F), STEP), 3) == 5
    assert ord_h(mk(CutI(TRUE), axiom(TRUE), axiom(TRUE))) == 2
    # ibd = 2^|1| = 2, so m = |2| = 2 and ord = 1 + 2 + 1
    ind = mk(IndT("y", Num(1), F), STEP)
    assert ibd_h(ind) == 2
    assert ord_h(ind) == 4
    assert ord_h(child_h(ind, 0)) == 3


def test_bound_examples():
    assert bd_h(axiom(TRUE)) == 0 and ibd_h(axiom(TRUE)) == 0
    G = exists_le("q", Num(9), eq(Var("q"), Num(5)))
    h = mk(ExI(Num(5), G), axiom(eq(Num(5), Num(5))))
    assert bd_h(h) == 5
    ind = mk(IndT("y", Num(6), F), STEP)
    # 2^|6| = 8 is both the largest substituted value and the induction length
    assert bd_h(ind) == 8 and ibd_h(ind) == 8
    assert bd_le(ind, 8) and not bd_le(ind, 7)
    assert ibd_le(ind, 8) and not ibd_le(ind, 7)


def test_ord_capped():
    ind = mk(IndT("y", Num(200), F), STEP)
    assert ord_capped(ind, 64) == ord_h(ind)
    assert ord_capped(ind, 2) == ord_m(ind, 2)


closed = strategy(closed_derivation, 4)


def in_range(h):
    return range(effective_arity(tp_h(h)))


@settings(max_examples=200, deadline=None)
@given(closed)
def test_strict_descent(h):
    for j in in_range(h):
        assert ord_h(child_h(h, j)) < ord_h(h)


@settings(max_examples=200, deadline=None)
@given(closed, st.integers(0, 5))
def test_local_faithfulness(h, extra):
    tp = tp_h(h)
    n = effective_arity(tp)
    gathered = list(conclusion(tp))
    for j in list(range(n)) + ([n + extra] if type(tp) is BigAnd else []):
        gathered += [A for A in gamma_star(child_h(h, j)) if A not in premise(tp, j)]
    assert Sequent(gathered).issubset(gamma_star(h))


@settings(max_examples=200, deadline=None)
@given(closed)
def test_bounds_monotone_on_children(h):
    for j in in_range(h):
        assert bd_h(child_h(h, j)) <= bd_h(h)
        assert ibd_h(child_h(h, j)) <= ibd_h(h)
    # only instances of quantifiers are bounded; a disjunction index is 0 or 1 regardless
    if type(tp_h(h)) is BigOr and type(tp_h(h).formula) is Exists:
        assert tp_h(h).index <= bd_h(h)


@settings(max_examples=200, deadline=None)
@given(strategy(derivation, ("y",), 4), strategy(term, (), 1), st.integers(0, 6))
def test_ord_invariant_under_substitution(h, t, m):
    assert ord_m(substitute(h, t, "y"), m) == ord_m(h, m)


@settings(max_examples=100, deadline=None)
@given(closed, st.integers(0, 40))
def test_bound_deciders_agree_with_values(h, m):
    assert bd_le(h, m) == (bd_h(h) <= m)
    assert ibd_le(h, m) == (ibd_h(h) <= m)
