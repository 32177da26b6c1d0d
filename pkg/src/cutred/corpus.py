"""Builders for the shipped example scripts.

Every script derives a single bounded existential statement about the
parameter `x`.  The text files under `data/corpus` are generated from these
builders (``python3 -m cutred.corpus``) and a test keeps them in sync.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .bastar import AllI, ConjI, CutI, DisjI, ExI, IndT, axiom, mk
from .formula import (
    App,
    Conj,
    Disj,
    Num,
    Var,
    eq,
    exists_le,
    forall_le,
    le,
    negate,
    subst,
    suc,
)

X = Var("x")


def add(s, t):
    return App("add", (s, t))


def mul(s, t):
    return App("mul", (s, t))


def mn(s, t):
    return App("min", (s, t))


def length(t):
    return App("len", (t,))


def zhl(t):
    return App("zhl", (t,))


def nle(s, t):
    return negate(le(s, t))


def instance(G, t):
    """Premise of an ∃-introduction of `G` with witness term `t`."""
    return subst(G.body, G.var, t)


def exi_demo():
    two_two = add(Num(2), Num(2))
    G = exists_le("y", Num(4), eq(Var("y"), two_two))
    return mk(ExI(two_two, G), axiom(eq(two_two, two_two)))


def exi_param():
    xx = add(X, X)
    G = exists_le("y", xx, eq(Var("y"), xx))
    return mk(ExI(xx, G), axiom(instance(G, xx)))


def disj_intro():
    y = Var("y")
    G = exists_le("y", X, Disj(eq(y, X), eq(y, Num(0))))
    body = instance(G, X)
    return mk(ExI(X, G), mk(DisjI(0, body), axiom(body.left)))


def conj_intro():
    y = Var("y")
    G = exists_le("y", X, Conj(le(y, X), le(X, y)))
    body = instance(G, X)
    return mk(ExI(X, G), mk(ConjI(body), axiom(body.left), axiom(body.right)))


def _successor_goal():
    return exists_le("y", suc(X), nle(Var("y"), X))


def cut_literal():
    G = _successor_goal()
    C = eq(suc(X), suc(X))
    side = mk(ExI(suc(X), G), axiom(instance(G, suc(X)), negate(C)))
    return mk(CutI(C), axiom(C), side)


def cut_negated_literal():
    """The same cut stated on the false side; the premises appear swapped."""
    G = _successor_goal()
    C = eq(suc(X), suc(X))
    side = mk(ExI(suc(X), G), axiom(instance(G, suc(X)), negate(C)))
    return mk(CutI(negate(C)), side, axiom(C))


def _lemma_parts():
    """A cut on (∀z≤|x|)(∃w≤|x|) z≤w, whose negation is instantiated at 0."""
    z, w, u, v = Var("z"), Var("w"), Var("u"), Var("v")
    L = length(X)
    C = forall_le("z", L, exists_le("w", L, le(z, w)))
    goal = exists_le("y", X, eq(Var("y"), X))
    inner = instance(C, u)
    left = mk(AllI("u", C), mk(ExI(mn(u, L), inner), axiom(instance(inner, mn(u, L)))))
    notC = negate(C)
    D = instance(notC, Num(0))
    lit = instance(D, v)
    right = mk(ExI(Num(0), notC), mk(AllI("v", D), mk(ExI(X, goal), axiom(lit, instance(goal, X)))))
    return C, left, right


def cut_lemma():
    C, left, right = _lemma_parts()
    return mk(CutI(C), left, right)


def cut_deep():
    C, left, right = _lemma_parts()
    CC = Conj(C, C)
    notCC = negate(CC)
    return mk(CutI(CC), mk(ConjI(CC), left, left), mk(DisjI(0, notCC), right))


def _interval_search(t, F, Fsuc_ok):
    """Binary search for the last y <= zhl(t) with F(y), via induction up to zhl(t).

    `F` is a function building F(s) for a term s; `Fsuc_ok` the literal pair
    used for the two axioms of the step.
    """
    y = Var("y")
    Z = zhl(t)
    G = exists_le("y", Z, Conj(F(y), negate(F(suc(y)))))
    body = instance(G, y)
    left_ax, right_ax = Fsuc_ok(body)
    step = mk(ExI(y, G), mk(ConjI(body), left_ax, right_ax))
    ind = mk(IndT("y", t, F(y)), step)
    upper = mk(CutI(F(Z)), ind, axiom(negate(F(Z))))
    return mk(CutI(F(Num(0))), axiom(F(Num(0))), upper)


def _step_axioms(F):
    y = Var("y")

    def build(body):
        return (axiom(body.left, negate(F(y))), axiom(body.right, F(suc(y))))

    return build


def ind_binary_search():
    F = lambda s: le(s, X)  # noqa: E731
    return _interval_search(X, F, _step_axioms(F))


def ind_log():
    F = lambda s: le(s, length(X))  # noqa: E731
    return _interval_search(length(X), F, _step_axioms(F))


def ind_isqrt():
    F = lambda s: le(mul(s, s), X)  # noqa: E731
    return _interval_search(X, F, _step_axioms(F))


@dataclass(frozen=True)
class Run:
    kind: str
    i: int = 1
    j: int = 0


@dataclass(frozen=True)
class Entry:
    name: str
    build: object
    runs: tuple
    expected: object
    samples: tuple = (0, 1, 2, 5, 13, 100)
    note: str = ""
    tags: tuple = field(default=())


def _isqrt(a):
    return math.isqrt(a)


CORPUS = (
    Entry("exi-demo", exi_demo, (Run("S2_im1"),), lambda a: 4, note="closed ∃-introduction"),
    Entry("exi-param", exi_param, (Run("S2_im1"), Run("S2_i")), lambda a: 2 * a),
    Entry("disj-intro", disj_intro, (Run("S2_im1"),), lambda a: a),
    Entry("conj-intro", conj_intro, (Run("S2_im1"),), lambda a: a),
    Entry("cut-literal", cut_literal, (Run("S2_im1"), Run("S2_i")), lambda a: a + 1),
    Entry("cut-negated-literal", cut_negated_literal, (Run("S2_im1"), Run("S2_i")), lambda a: a + 1),
    Entry("cut-lemma", cut_lemma, (Run("S2_i"), Run("S2_ip1"), Run("dilind", 1, 0)), lambda a: a,
          tags=("elimination",)),
    Entry("cut-deep", cut_deep, (Run("S2_ip1"),), lambda a: a, samples=(0, 1, 2, 5, 13),
          tags=("elimination",)),
    Entry("ind-binary-search", ind_binary_search, (Run("S2_im1"), Run("S2_i")), lambda a: a,
          tags=("induction",)),
    Entry("ind-log", ind_log, (Run("S2_im1"), Run("S2_i")), lambda a: a.bit_length(),
          samples=(0, 1, 2, 5, 13, 100, 4096), tags=("induction",)),
    Entry("ind-isqrt", ind_isqrt, (Run("S2_im1"), Run("S2_i"), Run("dilind", 0, 1)), _isqrt,
          tags=("induction",)),
)


def by_name(name: str) -> Entry:
    for e in CORPUS:
        if e.name == name:
            return e
    raise KeyError(name)


def manifest() -> dict:
    return {
        e.name: {
            "file": f"{e.name}.bas",
            "runs": [{"recipe": r.kind, "i": r.i, "j": r.j} for r in e.runs],
            "samples": list(e.samples),
            "tags": list(e.tags),
        }
        for e in CORPUS
    }


def corpus_dir():
    return resources.files("cutred") / "data" / "corpus"


def write(target: Path | None = None):
    from .syntax import pretty_deriv

    target = Path(target) if target is not None else Path(str(corpus_dir()))
    target.mkdir(parents=True, exist_ok=True)
    for e in CORPUS:
        text = f"; {e.name}" + (f": {e.note}" if e.note else "") + "\n" + pretty_deriv(e.build()) + "\n"
        (target / f"{e.name}.bas").write_text(text, encoding="utf-8")
    (target / "manifest.json").write_text(json.dumps(manifest(), indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    write()
