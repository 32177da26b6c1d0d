"""Bounded arithmetic terms and formulas, viewed as notations for infinitary formulas.

A closed formula denotes an infinitary formula through three computable
functions: its outermost connective (`tp_formula`), its immediate
sub-formulas (`sub_formula`) and its negation (`negate`).  Formulas are
identified up to evaluation of closed sub-terms (`ieq`).

Bounded quantifiers are encoded as unbounded ones whose bound variable only
occurs guarded: ``(forall x <= t) A`` is ``(forall x) A[min(x, t)/x]``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .config import get_config
from .errors import OpenFormula, OpenTerm, ResourceCap, UnboundedQuantifier, WellFormednessError
from .immutable import node

_CACHE = 1 << 18


# --------------------------------------------------------------------------
# signature

def _guard_bits(bits):
    cap = get_config().magnitude_cap
    if bits > cap:
        raise ResourceCap(f"value needs {bits} bits, magnitude cap is {cap}")


def _power_of_two(exponent):
    _guard_bits(exponent + 1)
    return 1 << exponent


def _times(x, y):
    _guard_bits(x.bit_length() + y.bit_length())
    return x * y


@dataclass(frozen=True)
class FunctionSymbol:
    name: str
    arity: int
    semantics: Callable[..., int]
    # c_f: the template is a smash of 2**c_f copies of max{2, args}
    template_exponent: int

    def template(self, args):
        """Monotone bounding term of this symbol applied to `args`."""
        if self.name == "len":
            return App("len", (args[0],))
        bound = Num(2)
        for a in args:
            bound = App("max", (bound, a))
        out = bound
        for _ in range(2 ** self.template_exponent - 1):
            out = App("smash", (out, bound))
        return out


SIGNATURE = {
    s.name: s
    for s in [
        FunctionSymbol("suc", 1, lambda x: x + 1, 1),
        FunctionSymbol("add", 2, lambda x, y: x + y, 1),
        FunctionSymbol("mul", 2, _times, 1),
        FunctionSymbol("monus", 2, lambda x, y: x - y if x > y else 0, 1),
        FunctionSymbol("min", 2, min, 0),
        FunctionSymbol("max", 2, max, 0),
        FunctionSymbol("len", 1, int.bit_length, 0),
        FunctionSymbol("zhl", 1, lambda x: _power_of_two(x.bit_length()), 1),
        FunctionSymbol("smash", 2, lambda x, y: _power_of_two(x.bit_length() * y.bit_length()), 1),
        FunctionSymbol("shr", 1, lambda x: x >> 1, 0),
    ]
}


# --------------------------------------------------------------------------
# terms

@node
class Var:
    name: str


@node
class Num:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise WellFormednessError(f"numerals are natural numbers, got {self.value}")


@node
class App:
    symbol: str
    args: tuple

    def __post_init__(self):
        sym = SIGNATURE.get(self.symbol)
        if sym is None:
            raise WellFormednessError(f"unknown function symbol {self.symbol!r}")
        if len(self.args) != sym.arity:
            raise WellFormednessError(f"{self.symbol} expects {sym.arity} arguments, got {len(self.args)}")


Term = Var | Num | App

ZERO = Num(0)


def suc(t):
    return App("suc", (t,))


@lru_cache(maxsize=_CACHE)
def term_vars(t) -> frozenset:
    if type(t) is Var:
        return frozenset((t.name,))
    if type(t) is Num:
        return frozenset()
    out = frozenset()
    for a in t.args:
        out |= term_vars(a)
    return out


@lru_cache(maxsize=_CACHE)
def term_depth(t) -> int:
    if type(t) is App:
        return 1 + max(term_depth(a) for a in t.args)
    return 0


def _eval(t, env):
    if type(t) is Num:
        return t.value
    if type(t) is Var:
        if env is not None and t.name in env:
            return env[t.name]
        raise OpenTerm(f"variable {t.name} has no value")
    value = SIGNATURE[t.symbol].semantics(*[_eval(a, env) for a in t.args])
    _guard_bits(value.bit_length())
    return value


@lru_cache(maxsize=_CACHE)
def _eval_closed(t):
    return _eval(t, None)


def eval_term(t, env=None) -> int:
    """Numerical value of `t`; every variable must be bound by `env`."""
    if env:
        return _eval(t, env)
    return _eval_closed(t)


def subst_term(t, name, repl):
    if name not in term_vars(t):
        return t
    if type(t) is Var:
        return repl
    return App(t.symbol, tuple(subst_term(a, name, repl) for a in t.args))


@lru_cache(maxsize=_CACHE)
def normalize_term(t):
    if type(t) is App:
        if not term_vars(t):
            return Num(_eval_closed(t))
        return App(t.symbol, tuple(normalize_term(a) for a in t.args))
    return t


@lru_cache(maxsize=_CACHE)
def bd_term(t):
    """Monotone bounding term: closed terms become their numeral."""
    if type(t) is Var:
        return t
    if not term_vars(t):
        return Num(eval_term(t))
    return SIGNATURE[t.symbol].template([bd_term(a) for a in t.args])


# --------------------------------------------------------------------------
# formulas

@node
class Literal:
    positive: bool
    rel: str
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if self.rel not in ("eq", "le"):
            raise WellFormednessError(f"unknown relation {self.rel!r}")


@node
class Conj:
    left: "Formula"
    right: "Formula"


@node
class Disj:
    left: "Formula"
    right: "Formula"


@node
class Forall:
    var: str
    body: "Formula"


@node
class Exists:
    var: str
    body: "Formula"


Formula = Literal | Conj | Disj | Forall | Exists
QUANTIFIERS = (Forall, Exists)


def eq(s, t):
    return Literal(True, "eq", s, t)


def le(s, t):
    return Literal(True, "le", s, t)


def lt(s, t):
    """s < t, read as not (t <= s)."""
    return Literal(False, "le", t, s)


TRUE_LITERAL = eq(ZERO, ZERO)


class Conn(enum.Enum):
    TOP = "⊤"
    BOT = "⊥"
    AND = "⋀"
    OR = "⋁"

    @property
    def dual(self):
        return _DUAL[self]


_DUAL = {Conn.TOP: Conn.BOT, Conn.BOT: Conn.TOP, Conn.AND: Conn.OR, Conn.OR: Conn.AND}


@lru_cache(maxsize=_CACHE)
def free_vars(A) -> frozenset:
    t = type(A)
    if t is Literal:
        return term_vars(A.lhs) | term_vars(A.rhs)
    if t is Conj or t is Disj:
        return free_vars(A.left) | free_vars(A.right)
    return free_vars(A.body) - {A.var}


def is_closed(A) -> bool:
    return not free_vars(A)


def subst(A, name, repl):
    """Replace free occurrences of variable `name` by the term `repl`."""
    if name not in free_vars(A):
        return A
    t = type(A)
    if t is Literal:
        return Literal(A.positive, A.rel, subst_term(A.lhs, name, repl), subst_term(A.rhs, name, repl))
    if t is Conj or t is Disj:
        return t(subst(A.left, name, repl), subst(A.right, name, repl))
    if A.var in term_vars(repl):
        raise WellFormednessError(f"substituting for {name} would capture {A.var}")
    return t(A.var, subst(A.body, name, repl))


def subst_closed(A, name, repl):
    if term_vars(repl):
        raise WellFormednessError("substituted term must be closed")
    return subst(A, name, repl)


@lru_cache(maxsize=_CACHE)
def normalize(A):
    """Replace every maximal closed sub-term by its numeral."""
    t = type(A)
    if t is Literal:
        return Literal(A.positive, A.rel, normalize_term(A.lhs), normalize_term(A.rhs))
    if t is Conj or t is Disj:
        return t(normalize(A.left), normalize(A.right))
    return t(A.var, normalize(A.body))


def ieq(A, B) -> bool:
    return A is B or normalize(A) == normalize(B)


@lru_cache(maxsize=_CACHE)
def negate(A):
    t = type(A)
    if t is Literal:
        return Literal(not A.positive, A.rel, A.lhs, A.rhs)
    if t is Conj:
        return Disj(negate(A.left), negate(A.right))
    if t is Disj:
        return Conj(negate(A.left), negate(A.right))
    if t is Forall:
        return Exists(A.var, negate(A.body))
    return Forall(A.var, negate(A.body))


def literal_value(L, env=None) -> bool:
    lhs, rhs = eval_term(L.lhs, env), eval_term(L.rhs, env)
    holds = lhs == rhs if L.rel == "eq" else lhs <= rhs
    return holds == L.positive


def _require_closed(A):
    if free_vars(A):
        raise OpenFormula(f"formula has free variables {sorted(free_vars(A))}")


def tp_formula(A) -> Conn:
    t = type(A)
    if t is Literal:
        _require_closed(A)
        return Conn.TOP if literal_value(A) else Conn.BOT
    if t is Conj or t is Forall:
        return Conn.AND
    return Conn.OR


def sub_formula(A, n: int):
    _require_closed(A)
    t = type(A)
    if t is Literal:
        return A
    if t is Conj or t is Disj:
        return A.left if n == 0 else A.right
    return subst(A.body, A.var, Num(n))


# --------------------------------------------------------------------------
# bounded quantifiers

def _collect_guards(name, t, out):
    if type(t) is Var:
        if t.name == name:
            raise UnboundedQuantifier(f"{name} occurs outside a min(.., bound) guard")
        return
    if type(t) is Num:
        return
    if t.symbol == "min" and t.args[0] == Var(name):
        if name in term_vars(t.args[1]):
            raise UnboundedQuantifier(f"bound of {name} mentions {name}")
        out.add(t.args[1])
        return
    for a in t.args:
        _collect_guards(name, a, out)


def _collect_formula_guards(name, A, out):
    t = type(A)
    if t is Literal:
        _collect_guards(name, A.lhs, out)
        _collect_guards(name, A.rhs, out)
    elif t is Conj or t is Disj:
        _collect_formula_guards(name, A.left, out)
        _collect_formula_guards(name, A.right, out)
    elif A.var != name:
        _collect_formula_guards(name, A.body, out)


@lru_cache(maxsize=_CACHE)
def quantifier_bound(name, body) -> Optional[Term]:
    """The term t such that `name` occurs in `body` only as min(name, t).

    Returns None when `name` does not occur at all (a vacuous quantifier).
    """
    guards = set()
    _collect_formula_guards(name, body, guards)
    if len(guards) > 1:
        raise UnboundedQuantifier(f"{name} is guarded by several different bounds")
    return next(iter(guards), None)


def _guard(name, bound, A):
    if name in term_vars(bound):
        raise WellFormednessError(f"bound of {name} may not mention {name}")
    return subst(A, name, App("min", (Var(name), bound)))


def forall_le(name, bound, A):
    return Forall(name, _guard(name, bound, A))


def exists_le(name, bound, A):
    return Exists(name, _guard(name, bound, A))


def forall_lt(name, bound, A):
    """(forall x < t) A, read as (forall x <= t)(t <= x or A)."""
    return forall_le(name, bound, Disj(le(bound, Var(name)), A))


def exists_lt(name, bound, A):
    """(exists x < t) A, read as (exists x <= t)(x < t and A)."""
    return exists_le(name, bound, Conj(lt(Var(name), bound), A))


def _unguard_term(name, bound, t):
    if type(t) is App:
        if t.symbol == "min" and t.args[0] == Var(name) and t.args[1] == bound:
            return Var(name)
        return App(t.symbol, tuple(_unguard_term(name, bound, a) for a in t.args))
    return t


def unguard(name, bound, A):
    """Inverse of the guard encoding: replace min(name, bound) by name."""
    t = type(A)
    if t is Literal:
        return Literal(A.positive, A.rel, _unguard_term(name, bound, A.lhs), _unguard_term(name, bound, A.rhs))
    if t is Conj or t is Disj:
        return t(unguard(name, bound, A.left), unguard(name, bound, A.right))
    if A.var == name:
        return A
    return t(A.var, unguard(name, bound, A.body))


def check_formula(A):
    """Reject unbounded quantification and over-deep terms."""
    cap = get_config().term_depth_cap
    t = type(A)
    if t is Literal:
        for side in (A.lhs, A.rhs):
            if term_depth(side) > cap:
                raise WellFormednessError(f"term depth {term_depth(side)} exceeds cap {cap}")
    elif t is Conj or t is Disj:
        check_formula(A.left)
        check_formula(A.right)
    else:
        quantifier_bound(A.var, A.body)
        check_formula(A.body)


def rng_formula(A) -> int:
    """Number of informative immediate sub-formulas."""
    _require_closed(A)
    t = type(A)
    if t is Literal:
        return 0
    if t is Conj or t is Disj:
        return 2
    bound = quantifier_bound(A.var, A.body)
    # a vacuous quantifier has identical instances
    return 1 if bound is None else eval_term(bound) + 1


# --------------------------------------------------------------------------
# truth in the standard model

def truth(A) -> bool:
    """Truth of a closed bounded formula, deciding quantifiers by exhaustion."""
    _require_closed(A)
    budget = [get_config().truth_budget]
    return _truth(A, {}, budget)


def _truth(A, env, budget):
    t = type(A)
    if t is Literal:
        return literal_value(A, env)
    if t is Conj:
        return _truth(A.left, env, budget) and _truth(A.right, env, budget)
    if t is Disj:
        return _truth(A.left, env, budget) or _truth(A.right, env, budget)
    bound = quantifier_bound(A.var, A.body)
    top = 0 if bound is None else eval_term(bound, env)
    want = t is Exists
    inner = dict(env)
    for value in range(top + 1):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceCap("truth evaluation budget exhausted")
        inner[A.var] = value
        if _truth(A.body, inner, budget) == want:
            return want
    return not want


# --------------------------------------------------------------------------
# formula classes and ranks

def _is_sharp(bound):
    return bound is None or not term_vars(bound) or (type(bound) is App and bound.symbol == "len")


def _quantifier_free(A):
    t = type(A)
    if t is Literal:
        return True
    if t is Conj or t is Disj:
        return _quantifier_free(A.left) and _quantifier_free(A.right)
    return False


@lru_cache(maxsize=_CACHE)
def _in_strict_class(level, A):
    prefix = []
    while type(A) in QUANTIFIERS:
        try:
            bound = quantifier_bound(A.var, A.body)
        except UnboundedQuantifier:
            return False
        prefix.append((type(A) is Exists, bound))
        A = A.body
    if not _quantifier_free(A) or len(prefix) > level + 1:
        return False
    for idx, (is_exists, _) in enumerate(prefix):
        if is_exists != (idx % 2 == 0):
            return False
    # one trailing quantifier beyond the level is allowed if sharply bounded
    return len(prefix) <= level or _is_sharp(prefix[-1][1])


@dataclass(frozen=True)
class FormulaClass:
    """Strict bounded class at `level`, together with negations of its members."""
    level: int

    def contains(self, A) -> bool:
        return _in_strict_class(self.level, A) or _in_strict_class(self.level, negate(A))

    __contains__ = contains


@lru_cache(maxsize=_CACHE)
def rank(cls: FormulaClass, A) -> int:
    if cls.contains(A):
        return 0
    t = type(A)
    if t is Conj or t is Disj:
        return 1 + max(rank(cls, A.left), rank(cls, A.right))
    return 1 + rank(cls, A.body)


# --------------------------------------------------------------------------
# canonical text

def show_term(t) -> str:
    if type(t) is Var:
        return t.name
    if type(t) is Num:
        return f"(num {t.value})"
    return "(" + " ".join([t.symbol] + [show_term(a) for a in t.args]) + ")"


_LITERAL_HEADS = {(True, "eq"): "eq", (False, "eq"): "neq", (True, "le"): "le", (False, "le"): "nle"}


@lru_cache(maxsize=_CACHE)
def show_formula(A) -> str:
    t = type(A)
    if t is Literal:
        return f"({_LITERAL_HEADS[A.positive, A.rel]} {show_term(A.lhs)} {show_term(A.rhs)})"
    if t is Conj or t is Disj:
        head = "and" if t is Conj else "or"
        return f"({head} {show_formula(A.left)} {show_formula(A.right)})"
    head = "forall" if t is Forall else "exists"
    try:
        bound = quantifier_bound(A.var, A.body)
    except UnboundedQuantifier:
        bound = None
    if bound is None:
        return f"({head} {A.var} {show_formula(A.body)})"
    return f"({head}-le {A.var} {show_term(bound)} {show_formula(unguard(A.var, bound, A.body))})"


@lru_cache(maxsize=_CACHE)
def formula_key(A) -> str:
    """Canonical sort key: serialization of the normal form."""
    return show_formula(normalize(A))
