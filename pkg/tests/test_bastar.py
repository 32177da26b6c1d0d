import pytest
from hypothesis import given, settings

from cutred.bastar import (
    AllI,
    ConjI,
    CutI,
    ExI,
    IndNI,
    IndT,
    axiom,
    check_script,
    diagnose,
    fv_deriv,
    gamma_star,
    height,
    is_basic,
    mk,
    size,
    substitute,
    var_deriv,
)
from cutred.errors import OpenSubstitutionTerm, WellFormednessError
from cutred.proofsys import Sequent
from cutred.formula import App, Conj, Num, Var, eq, exists_le, forall_le, free_vars, le, negate, subst, suc

from strategies import derivation, strategy, term

x, y = Var("x"), Var("y")
TRUE = eq(Num(0), Num(0))


def test_closed_axiom_is_derivation():
    assert var_deriv(axiom(TRUE), ())


def all_intro(child):
    return mk(AllI("y", forall_le("x", Num(1), le(x, Num(1)))), child)


def test_binder_clause():
    # the eigenvariable may appear in the premise instance only
    fine = all_intro(axiom(le(App("min", (y, Num(1))), Num(1))))
    assert var_deriv(fine, ())
    leaking = all_intro(axiom(eq(y, y)))
    problems = diagnose(leaking, ())
    assert [p.clause for p in problems] == ["eigenvariable"]


def test_witness_term_must_be_in_scope():
    G = exists_le("q", Num(3), eq(Var("q"), Var("q")))
    h = mk(ExI(x, G), axiom(eq(App("min", (x, Num(3))), App("min", (x, Num(3))))))
    assert not var_deriv(h, ())
    assert diagnose(h, ())[0].clause == "exists-witness"
    assert var_deriv(h, ("x",))


def test_distinct_binders_along_a_branch():
    inner = all_intro(axiom(TRUE))
    outer = all_intro(inner)
    assert [p.clause for p in diagnose(outer, ())] == ["distinct-binder"]
    # siblings may reuse a name
    assert var_deriv(mk(ConjI(Conj(*[forall_le("x", Num(1), le(x, Num(1)))] * 2)), inner, inner), ())


def test_endsequent_examples():
    A = le(Num(1), Num(2))
    assert gamma_star(axiom(A)) == Sequent([A])
    C, G = le(Num(3), Num(3)), eq(Num(1), Num(1))
    cut = mk(CutI(C), axiom(C, G), axiom(negate(C), TRUE))
    assert gamma_star(cut) == Sequent([G, TRUE])
    F = le(Num(1), y)
    ind = mk(IndT("y", Num(5), F), axiom(negate(F), subst(F, "y", suc(y))))
    assert gamma_star(ind) == Sequent([negate(subst(F, "y", Num(0))), subst(F, "y", App("zhl", (Num(5),)))])


def test_cut_discharges_each_premise_formula_separately():
    C, G = le(Num(3), Num(3)), eq(Num(1), Num(2))
    # C survives from the right premise, which only discharges its negation
    cut = mk(CutI(C), axiom(C, G), axiom(negate(C), C))
    assert gamma_star(cut) == Sequent([G, C])


def test_size_and_height():
    d = mk(CutI(TRUE), axiom(TRUE), mk(CutI(TRUE), axiom(TRUE), axiom(TRUE)))
    assert size(d) == 5 and height(d) == 2
    assert size(axiom(TRUE)) == 1 and height(axiom(TRUE)) == 0


def test_substitution_examples():
    A = forall_le("x", Num(1), le(x, y))
    bound = all_intro(axiom(TRUE))
    assert substitute(bound, Num(3), "y") == bound
    G = exists_le("q", Num(3), le(Var("q"), y))
    h = mk(ExI(y, G), axiom(TRUE))
    out = substitute(h, Num(2), "y")
    assert out.symbol == ExI(Num(2), subst(G, "y", Num(2)))
    assert substitute(axiom(le(y, Num(2))), Num(1), "y") == axiom(le(Num(1), Num(2)))
    with pytest.raises(OpenSubstitutionTerm):
        substitute(h, x, "y")
    assert free_vars(A) == {"y"}


def test_induction_formula_variable_is_not_free():
    F = le(Num(0), y)
    ind = mk(IndT("y", x, F), axiom(negate(F), subst(F, "y", suc(y))))
    assert fv_deriv(ind) == {"x"}


def test_basic_axioms():
    assert is_basic([le(x, x)])
    assert is_basic([le(x, y), negate(le(x, y))])
    assert not is_basic([le(x, Num(3))])
    assert not is_basic([eq(Num(0), Num(1))])
    assert is_basic([eq(Num(0), Num(1)), TRUE])


def test_check_script_flags_non_axiom():
    bad = axiom(eq(Num(0), Num(1)))
    assert [v.clause for v in check_script(bad)] == ["basic-axiom"]
    assert check_script(bad, assume_axioms=True) == []


def test_induction_conclusions():
    F = le(Num(0), y)
    step = axiom(negate(F), subst(F, "y", suc(y)))
    h = mk(IndNI("y", 3, 2, F), step)
    assert gamma_star(h) == Sequent([negate(subst(F, "y", Num(3))), subst(F, "y", Num(7))])
    with pytest.raises(WellFormednessError):
        IndNI("y", -1, 0, F)


def test_endsequent_size_bound_needs_two_literal_axioms():
    # three distinct literals in one axiom of size 1: the bound holds only for
    # axioms of at most two literals, which is what the generators produce
    h = axiom(le(x, x), eq(x, x), le(Num(0), x))
    assert len(gamma_star(h)) == 3 > 2 * size(h)


open_deriv = strategy(derivation, ("y",), 4)


@settings(max_examples=150, deadline=None)
@given(open_deriv, strategy(term, (), 2))
def test_substitution_lemma(h, t):
    lhs = gamma_star(substitute(h, t, "y"))
    rhs = gamma_star(h).map(lambda A: subst(A, "y", t))
    assert lhs.issubset(rhs)
    assert var_deriv(substitute(h, t, "y"), ())


@settings(max_examples=150, deadline=None)
@given(open_deriv)
def test_endsequent_variables_in_scope(h):
    assert var_deriv(h, ("y",))
    assert all(free_vars(A) <= {"y"} for A in gamma_star(h))
    assert check_script(h, ("y",)) == []
    assert len(gamma_star(h)) <= 2 * size(h)
