import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cutred.config import use_config
from cutred.errors import OpenFormula, OpenTerm, ResourceCap, UnboundedQuantifier, WellFormednessError
from cutred.formula import (
    SIGNATURE,
    App,
    Conj,
    Conn,
    Disj,
    Exists,
    Forall,
    FormulaClass,
    Literal,
    Num,
    Var,
    bd_term,
    check_formula,
    eq,
    eval_term,
    exists_le,
    exists_lt,
    forall_le,
    forall_lt,
    ieq,
    le,
    negate,
    normalize,
    rank,
    rng_formula,
    sub_formula,
    subst,
    tp_formula,
    truth,
)

from strategies import formula, strategy, term

x, y = Var("x"), Var("y")


def app(name, *args):
    return App(name, tuple(args))


def shr_of_product():
    return app("shr", app("mul", Num(5), Num(3)))


def test_eval_examples():
    assert eval_term(app("len", Num(5))) == 3
    assert eval_term(app("smash", Num(5), Num(3))) == 64
    assert eval_term(shr_of_product()) == 7


def test_eval_semantics_against_python():
    cases = {
        "suc": (lambda a: a + 1, 1),
        "add": (lambda a, b: a + b, 2),
        "mul": (lambda a, b: a * b, 2),
        "monus": (lambda a, b: max(a - b, 0), 2),
        "min": (min, 2),
        "max": (max, 2),
        "len": (lambda a: len(bin(a)) - 2 if a else 0, 1),
        "zhl": (lambda a: 2 ** (len(bin(a)) - 2 if a else 0), 1),
        "shr": (lambda a: a // 2, 1),
    }
    for name, (fn, arity) in cases.items():
        for a in range(0, 40):
            args = (a, 40 - a)[:arity]
            assert eval_term(App(name, tuple(map(Num, args)))) == fn(*args), (name, args)


def test_eval_rejects_open_and_huge():
    with pytest.raises(OpenTerm):
        eval_term(app("add", x, Num(1)))
    with use_config(magnitude_cap=64):
        with pytest.raises(ResourceCap):
            eval_term(app("smash", Num(2 ** 20), Num(2 ** 20)))


def test_unknown_symbol_and_arity():
    with pytest.raises(WellFormednessError):
        App("pow", (Num(1), Num(2)))
    with pytest.raises(WellFormednessError):
        App("suc", (Num(1), Num(2)))


def test_normalize_examples():
    A = forall_le("x", Num(9), le(x, shr_of_product()))
    assert normalize(A) == forall_le("x", Num(9), le(x, Num(7)))
    zero = eq(Num(0), Num(0))
    assert normalize(zero) == zero
    B = le(app("add", x, app("mul", Num(2), Num(3))), x)
    assert normalize(B) == le(app("add", x, Num(6)), x)


def test_ieq_examples():
    A = Forall("x", le(x, shr_of_product()))
    assert ieq(A, Forall("x", le(x, Num(7))))
    assert ieq(A, A)
    assert not ieq(eq(Num(1), Num(1)), eq(Num(2), Num(2)))


def test_tp_examples():
    assert tp_formula(eq(Num(0), Num(0))) is Conn.TOP
    assert tp_formula(eq(Num(0), Num(1))) is Conn.BOT
    assert tp_formula(forall_le("x", Num(3), le(x, Num(3)))) is Conn.AND
    assert tp_formula(Disj(exists_le("x", Num(1), eq(x, Num(1))), eq(Num(0), Num(1)))) is Conn.OR
    with pytest.raises(OpenFormula):
        tp_formula(eq(x, Num(0)))


def test_sub_formula_examples():
    A0, A1 = eq(Num(0), Num(0)), le(Num(1), Num(0))
    assert sub_formula(Conj(A0, A1), 5) == A1
    assert sub_formula(Conj(A0, A1), 0) == A0
    body = le(x, Num(2))
    assert sub_formula(Forall("x", body), 3) == le(Num(3), Num(2))
    assert sub_formula(A0, 7) == A0


def test_negate_examples():
    A, B = eq(Num(0), Num(0)), le(Num(1), Num(2))
    assert negate(Conj(A, B)) == Disj(negate(A), negate(B))
    assert negate(Exists("x", le(x, Num(1)))) == Forall("x", negate(le(x, Num(1))))
    assert negate(le(Num(1), Num(2))) == Literal(False, "le", Num(1), Num(2))


def test_rank_examples():
    s1 = FormulaClass(1)
    sigma1 = exists_le("x", Num(4), le(x, Num(2)))
    assert rank(s1, sigma1) == 0
    # (forall)(exists)(forall) alternation is outside level 1 and its negation
    B = forall_le("y", Num(2), exists_le("x", Num(2), forall_le("q", Num(1), le(x, Var("q")))))
    assert rank(s1, B) == 1
    assert rank(s1, Conj(B, sigma1)) == 2
    assert rank(s1, Forall("p", B)) == 2


def test_class_membership_by_prefix():
    c0 = FormulaClass(0)
    qf = le(Num(1), Num(2))
    assert qf in c0
    # one sharply bounded existential is allowed on top of level 0
    assert exists_le("x", Num(3), le(x, Num(1))) in c0
    assert exists_le("x", app("len", y), le(x, y)) in c0
    assert exists_le("x", y, le(x, y)) not in c0
    assert exists_le("x", Num(1), exists_le("q", Num(1), le(x, Var("q")))) not in c0
    c1 = FormulaClass(1)
    assert exists_le("x", y, forall_le("q", Num(1), le(x, Var("q")))) in c1
    assert forall_le("x", y, le(x, y)) in c1  # as a negation


def test_rng_examples():
    assert rng_formula(eq(Num(0), Num(0))) == 0
    assert rng_formula(Conj(eq(Num(0), Num(0)), eq(Num(0), Num(0)))) == 2
    assert rng_formula(forall_le("x", Num(5), le(x, Num(9)))) == 6
    assert rng_formula(Forall("x", eq(Num(0), Num(0)))) == 1
    with pytest.raises(UnboundedQuantifier):
        rng_formula(Forall("x", le(x, Num(5))))


def test_truth_examples():
    assert truth(eq(Num(0), Num(0)))
    assert truth(exists_le("x", Num(3), eq(x, Num(2))))
    assert not truth(forall_le("x", Num(2), le(x, Num(1))))


def test_truth_strict_bounds():
    assert not truth(exists_lt("x", Num(3), eq(x, Num(3))))
    assert truth(exists_le("x", Num(3), eq(x, Num(3))))
    assert truth(forall_lt("x", Num(3), le(x, Num(2))))


def test_truth_budget():
    A = forall_le("x", Num(10 ** 6), le(x, Num(10 ** 7)))
    with use_config(truth_budget=1000):
        with pytest.raises(ResourceCap):
            truth(A)


def test_bd_examples():
    assert bd_term(app("add", Num(3), Num(4))) == Num(7)
    assert bd_term(app("len", x)) == app("len", x)
    bound = bd_term(app("min", x, Num(3)))
    assert bound == SIGNATURE["min"].template([x, Num(3)])
    for v in range(101):
        assert eval_term(bound, {"x": v}) >= min(v, 3)


def test_templates_dominate_and_are_monotone():
    values = (0, 1, 2, 3, 7, 8, 100, 1023)
    for sym in SIGNATURE.values():
        template = sym.template([Var(f"v{i}") for i in range(sym.arity)])
        pts = [(a,) for a in values] if sym.arity == 1 else [(a, b) for a in values for b in values]
        for p in pts:
            env = {f"v{i}": v for i, v in enumerate(p)}
            bound = eval_term(template, env)
            assert bound >= sym.semantics(*p), (sym.name, p)
            for i in range(sym.arity):
                bigger = dict(env, **{f"v{i}": p[i] + 1})
                assert eval_term(template, bigger) >= bound, (sym.name, p)


def test_check_formula_rejects_unbounded_and_deep():
    with pytest.raises(UnboundedQuantifier):
        check_formula(Exists("x", eq(x, Num(1))))
    deep = Num(0)
    for _ in range(40):
        deep = app("suc", deep)
    with pytest.raises(WellFormednessError):
        check_formula(eq(deep, Num(0)))
    check_formula(forall_le("x", Num(1), eq(x, x)))


def test_subst_avoids_capture():
    A = Forall("x", le(x, y))
    with pytest.raises(WellFormednessError):
        subst(A, "y", x)
    assert subst(A, "x", Num(3)) == A


closed = strategy(formula, (), 2)


@settings(max_examples=200, deadline=None)
@given(closed, st.integers(0, 6))
def test_negation_contract(A, n):
    assert negate(negate(A)) == A
    assert tp_formula(negate(A)) is tp_formula(A).dual
    assert negate(sub_formula(A, n)) == sub_formula(negate(A), n)


@settings(max_examples=200, deadline=None)
@given(closed, st.integers(0, 6))
def test_ieq_contract(A, n):
    B = normalize(A)
    assert ieq(A, B) and normalize(B) == B
    assert tp_formula(A) is tp_formula(B)
    assert ieq(sub_formula(A, n), sub_formula(B, n))
    assert ieq(negate(A), negate(B))
    for level in (0, 1, 2):
        assert rank(FormulaClass(level), A) == rank(FormulaClass(level), B)


@settings(max_examples=200, deadline=None)
@given(closed, st.integers(0, 6), st.integers(0, 2))
def test_rank_drops_on_sub_formulas(A, n, level):
    cls = FormulaClass(level)
    if rank(cls, A) > 0 and tp_formula(A) in (Conn.AND, Conn.OR):
        assert rank(cls, sub_formula(A, n)) < rank(cls, A)


@settings(max_examples=200, deadline=None)
@given(closed, st.integers(0, 4))
def test_instances_beyond_range_agree(A, extra):
    if type(A) in (Forall, Exists):
        top = rng_formula(A) - 1
        assert ieq(sub_formula(A, top), sub_formula(A, top + 1 + extra))


@settings(max_examples=200, deadline=None)
@given(strategy(term, ("x",), 3), st.integers(0, 300))
def test_bound_dominates(t, v):
    # nested templates are iterated smashes, so large points exceed the magnitude cap
    try:
        low, high = eval_term(bd_term(t), {"x": v}), eval_term(bd_term(t), {"x": v + 1})
    except ResourceCap:
        assume(False)
    assert low >= eval_term(t, {"x": v})
    assert high >= low
