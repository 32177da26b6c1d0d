"""S-expression text format for terms, formulas, proof scripts and notations.

Every parser error carries the line and column of the offending token.
Serialization is canonical, so parse(show(x)) == x for every node.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .bastar import AllI, AxSeq, ConjI, CutI, Deriv, DisjI, ExI, IndNI, IndT, star_arity
from .cutelim import Base, EOp, IOp, ROp
from .errors import ParseError, WellFormednessError
from .formula import (
    SIGNATURE,
    App,
    Conj,
    Disj,
    Exists,
    Forall,
    Literal,
    Num,
    Var,
    exists_le,
    exists_lt,
    forall_le,
    forall_lt,
    show_formula,
    show_term,
)

_TOKEN = re.compile(r"(?P<ws>\s+)|(?P<comment>;[^\n]*)|(?P<open>\()|(?P<close>\))|(?P<atom>[^\s();]+)")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    col: int


def read(text: str):
    """Parse `text` into a single s-expression of Atom/SList."""
    stack = [[]]
    opens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind, value = m.lastgroup, m.group()
        if kind == "open":
            opens.append((line, col))
            stack.append([])
        elif kind == "close":
            if not opens:
                raise ParseError("unbalanced ')'", line, col)
            l0, c0 = opens.pop()
            items = stack.pop()
            stack[-1].append(SList(tuple(items), l0, c0))
        elif kind == "atom":
            stack[-1].append(Atom(value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    if opens:
        raise ParseError("unclosed '('", *opens[-1])
    top = stack[0]
    if len(top) != 1:
        where = top[1] if len(top) > 1 else None
        raise ParseError(f"expected exactly one expression, found {len(top)}",
                         where.line if where else line, where.col if where else col)
    return top[0]


def _fail(node, message):
    raise ParseError(message, node.line, node.col)


def _head(node, what):
    if not isinstance(node, SList) or not node.items or not isinstance(node.items[0], Atom):
        _fail(node, f"expected a {what} of the form (head ...)")
    return node.items[0].text, node.items[1:]


def _expect(node, args, n, form):
    if len(args) != n:
        _fail(node, f"{form} takes {n} arguments, got {len(args)}")


def _name(node):
    if not isinstance(node, Atom) or not _NAME.match(node.text):
        _fail(node, "expected a variable name")
    return node.text


def _nat(node):
    if not isinstance(node, Atom) or not node.text.isdigit():
        _fail(node, "expected a natural number")
    return int(node.text)


def _guarded(node, fn):
    try:
        return fn()
    except WellFormednessError as exc:
        raise ParseError(str(exc), node.line, node.col) from exc


# --------------------------------------------------------------------------
# terms and formulas

def term_from(node):
    if isinstance(node, Atom):
        if node.text.isdigit():
            return Num(int(node.text))
        return Var(_name(node))
    head, args = _head(node, "term")
    if head == "num":
        _expect(node, args, 1, "num")
        return Num(_nat(args[0]))
    if head not in SIGNATURE:
        _fail(node, f"unknown function symbol {head!r}")
    _expect(node, args, SIGNATURE[head].arity, head)
    return App(head, tuple(term_from(a) for a in args))


_LITERALS = {"eq": (True, "eq"), "neq": (False, "eq"), "le": (True, "le"), "nle": (False, "le")}
_SUGAR = {"forall-le": forall_le, "exists-le": exists_le, "forall-lt": forall_lt, "exists-lt": exists_lt}


def formula_from(node):
    head, args = _head(node, "formula")
    if head in _LITERALS:
        _expect(node, args, 2, head)
        positive, rel = _LITERALS[head]
        return Literal(positive, rel, term_from(args[0]), term_from(args[1]))
    if head in ("and", "or"):
        _expect(node, args, 2, head)
        return (Conj if head == "and" else Disj)(formula_from(args[0]), formula_from(args[1]))
    if head in ("forall", "exists"):
        _expect(node, args, 2, head)
        return (Forall if head == "forall" else Exists)(_name(args[0]), formula_from(args[1]))
    if head in _SUGAR:
        _expect(node, args, 3, head)
        var, bound, body = _name(args[0]), term_from(args[1]), formula_from(args[2])
        return _guarded(node, lambda: _SUGAR[head](var, bound, body))
    _fail(node, f"unknown formula head {head!r}")


# --------------------------------------------------------------------------
# scripts and notations

def deriv_from(node):
    head, args = _head(node, "proof script")
    if head == "ax":
        return _guarded(node, lambda: Deriv(AxSeq(tuple(_literal(a) for a in args)), ()))
    if head == "and-i":
        _expect(node, args, 3, head)
        sym = ConjI(formula_from(args[0]))
        kids = args[1:]
    elif head == "or-i":
        _expect(node, args, 3, head)
        sym = _guarded(node, lambda: DisjI(_nat(args[0]), formula_from(args[1])))
        kids = args[2:]
    elif head == "all-i":
        _expect(node, args, 3, head)
        sym = AllI(_name(args[0]), formula_from(args[1]))
        kids = args[2:]
    elif head == "ex-i":
        _expect(node, args, 3, head)
        sym = ExI(term_from(args[0]), formula_from(args[1]))
        kids = args[2:]
    elif head == "ind-t":
        _expect(node, args, 4, head)
        sym = IndT(_name(args[0]), term_from(args[1]), formula_from(args[2]))
        kids = args[3:]
    elif head == "ind-n":
        _expect(node, args, 5, head)
        sym = IndNI(_name(args[0]), _nat(args[1]), _nat(args[2]), formula_from(args[3]))
        kids = args[4:]
    elif head == "cut":
        _expect(node, args, 3, head)
        sym = CutI(formula_from(args[0]))
        kids = args[1:]
    else:
        _fail(node, f"unknown inference {head!r}")
    if len(kids) != star_arity(sym):
        _fail(node, f"{head} takes {star_arity(sym)} premises")
    children = tuple(deriv_from(k) for k in kids)
    return _guarded(node, lambda: Deriv(sym, children))


def _literal(node):
    A = formula_from(node)
    if type(A) is not Literal:
        _fail(node, "axioms consist of literals")
    return A


def notation_from(node):
    head, args = _head(node, "notation")
    if head == "I":
        _expect(node, args, 3, head)
        k, C, body = _nat(args[0]), formula_from(args[1]), notation_from(args[2])
        return _guarded(node, lambda: IOp(k, C, body))
    if head == "R":
        _expect(node, args, 3, head)
        C, left, right = formula_from(args[0]), notation_from(args[1]), notation_from(args[2])
        return _guarded(node, lambda: ROp(C, left, right))
    if head == "E":
        _expect(node, args, 1, head)
        return EOp(notation_from(args[0]))
    return Base(deriv_from(node))


def parse_term(text):
    return term_from(read(text))


def parse_formula(text):
    return formula_from(read(text))


def parse_script(text):
    return deriv_from(read(text))


def parse_notation(text):
    return notation_from(read(text))


# --------------------------------------------------------------------------
# serialization

def _symbol_parts(sym) -> list:
    t = type(sym)
    if t is AxSeq:
        return ["ax", *map(show_formula, sym.literals)]
    if t is ConjI:
        return ["and-i", show_formula(sym.formula)]
    if t is DisjI:
        return ["or-i", str(sym.k), show_formula(sym.formula)]
    if t is AllI:
        return ["all-i", sym.eigen, show_formula(sym.formula)]
    if t is ExI:
        return ["ex-i", show_term(sym.term), show_formula(sym.formula)]
    if t is IndT:
        return ["ind-t", sym.eigen, show_term(sym.bound), show_formula(sym.formula)]
    if t is IndNI:
        return ["ind-n", sym.eigen, str(sym.start), str(sym.exponent), show_formula(sym.formula)]
    return ["cut", show_formula(sym.formula)]


def show_deriv(h) -> str:
    return "(" + " ".join(_symbol_parts(h.symbol) + [show_deriv(c) for c in h.children]) + ")"


def show_notation(h) -> str:
    t = type(h)
    if t is Base:
        return show_deriv(h.deriv)
    if t is IOp:
        return f"(I {h.k} {show_formula(h.formula)} {show_notation(h.body)})"
    if t is ROp:
        return f"(R {show_formula(h.formula)} {show_notation(h.left)} {show_notation(h.right)})"
    return f"(E {show_notation(h.body)})"


def pretty_deriv(h, indent: str = "  ") -> str:
    """Multi-line rendering with one inference per line; parses back to `h`."""
    lines = []

    def walk(d, level):
        lines.append(indent * level + "(" + " ".join(_symbol_parts(d.symbol)))
        for c in d.children:
            walk(c, level + 1)
        lines[-1] += ")"

    walk(h, 0)
    return "\n".join(lines)
