"""Command-line entry point: check, explore, witness, bench."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import re
import statistics
import sys
from pathlib import Path

from . import cutelim as ce
from . import hba
from .bastar import check_script, fv_deriv, substitute
from .config import Config, get_config, log_effective, use_config
from .corpus import by_name, corpus_dir
from .errors import CutredError, InvariantViolation, ParseError, WellFormednessError
from .formula import FormulaClass, Num, show_formula
from .oracle import denote, dump_json, dump_text
from .proofsys import show_symbol
from .search import RECIPE_KINDS, initial, recipe, run_search
from .syntax import parse_notation

log = logging.getLogger("cutred")


# --------------------------------------------------------------------------
# inputs

def read_source(name: str) -> str:
    """Text of a script file, or of a shipped corpus entry given by name."""
    path = Path(name)
    if path.exists():
        return path.read_text(encoding="utf-8")
    try:
        entry = by_name(name.removesuffix(".bas"))
    except KeyError:
        raise ParseError(f"no such file or corpus entry: {name}") from None
    return (corpus_dir() / f"{entry.name}.bas").read_text(encoding="utf-8")


def parse_bindings(items) -> dict:
    out = {}
    for item in items or ():
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_']*)=(\d+)", item)
        if not m:
            raise ParseError(f"expected NAME=VALUE, got {item!r}")
        out[m.group(1)] = int(m.group(2))
    return out


def close(h, bindings: dict):
    """Substitute numerals for the free variables of a plain script."""
    if not bindings:
        return h
    if type(h) is not ce.Base:
        raise WellFormednessError("--subst applies to plain proof scripts only")
    d = h.deriv
    for name, value in bindings.items():
        d = substitute(d, Num(value), name)
    return ce.Base(d)


def _power(text: str) -> int:
    m = re.fullmatch(r"(\d+)\^(\d+)", text)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    if not text.isdigit():
        raise ParseError(f"bad sweep value {text!r}")
    return int(text)


def parse_sweep(spec: str) -> list:
    """`a=16,32` lists values; `a=3..9` is every integer; `a=2^4..2^12` every power."""
    spec = spec.removeprefix("a=")
    values = []
    for part in spec.split(","):
        if ".." in part:
            lo, hi = part.split("..", 1)
            m_lo, m_hi = re.fullmatch(r"(\d+)\^(\d+)", lo), re.fullmatch(r"(\d+)\^(\d+)", hi)
            if m_lo and m_hi and m_lo.group(1) == m_hi.group(1):
                base = int(m_lo.group(1))
                values.extend(base ** e for e in range(int(m_lo.group(2)), int(m_hi.group(2)) + 1))
            else:
                values.extend(range(_power(lo), _power(hi) + 1))
        elif part:
            values.append(_power(part))
    if not values:
        raise ParseError(f"empty sweep {spec!r}")
    return values


def fmt_big(n: int) -> str:
    if n < 10**30:
        return str(n)
    return f"<{n.bit_length()}-bit number>"


# --------------------------------------------------------------------------
# commands

def cmd_check(args, out) -> int:
    h = parse_notation(read_source(args.file))
    h = close(h, parse_bindings(args.subst))
    if type(h) is not ce.Base:
        return _check_notation(h, args, out)
    d = h.deriv
    xs = tuple(v for v in args.vars.split(",") if v)
    problems = check_script(d, xs, assume_axioms=args.assume_axioms)
    rows = [("endsequent", "{" + ", ".join(map(show_formula, hba.gamma_h(d))) + "}"),
            ("size", str(hba.size_h(d)))]
    if not fv_deriv(d):
        rows += [("ord", fmt_big(hba.ord_h(d))), ("bd", fmt_big(hba.bd_h(d))), ("ibd", fmt_big(hba.ibd_h(d)))]
    else:
        rows.append(("ord/bd/ibd", "n/a for open scripts (use --subst)"))
    _table(rows, out)
    if problems:
        print(f"ill-formed: {len(problems)} violation(s)", file=out)
        for p in problems:
            print(f"  {p}", file=out)
        return WellFormednessError.exit_code
    print("well-formed", file=out)
    return 0


def _check_notation(h, args, out) -> int:
    cls = FormulaClass(args.level)
    rows = [("endsequent", "{" + ", ".join(map(show_formula, ce.gamma_ch(h))) + "}"),
            ("size", str(ce.size_ch(h))), ("ord", fmt_big(ce.ord_ch(h))),
            ("crk", str(ce.crk_ch(cls, h))), ("bd", fmt_big(ce.bd_ch(h))), ("ibd", fmt_big(ce.ibd_ch(h))),
            ("comp", str(ce.is_comp(h)))]
    _table(rows, out)
    print("well-formed", file=out)
    return 0


def _table(rows, out):
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k.ljust(width)}  {v}", file=out)


def cmd_explore(args, out) -> int:
    h = close(parse_notation(read_source(args.file)), parse_bindings(args.subst))
    h = ce.e_power(h, args.e)
    if args.path is not None:
        path = [int(p) for p in args.path.split(",") if p.strip()]
        ex = ce.explore(h, path)
        cur = h
        records = []
        for step, j in enumerate([None] + path):
            if j is not None:
                cur = ce.child_ch(cur, j)
            records.append({"index": j, "tp": show_symbol(ce.tp_ch(cur)), "size": ex.sizes[step]})
        if args.json:
            print(json.dumps(records, indent=2), file=out)
        else:
            for step, r in enumerate(records):
                where = "root" if r["index"] is None else f"[{r['index']}]"
                print(f"{step:3d} {where:>6} size={r['size']:<5d} {r['tp']}", file=out)
        if args.e:
            s = max(ce.base_sizes(h))
            for k, got in enumerate(ex.sizes):
                bound = ce.szf_k(h, s, k)
                if got > bound:
                    print(f"size bound violated after {k} steps: size {got} > {bound}", file=out)
                    return InvariantViolation.exit_code
        return 0
    depth = args.depth if args.depth is not None else 3
    tree = denote(h, get_config().oracle_width, depth)
    print(dump_json(tree) if args.json else dump_text(tree), file=out)
    return 0


def cmd_witness(args, out) -> int:
    h = parse_notation(read_source(args.file))
    if type(h) is not ce.Base:
        raise WellFormednessError("witness extraction starts from a plain proof script")
    p = recipe(args.recipe, h.deriv, args.i, args.j)
    w = run_search(p, args.a)
    print(f"witness     {w.value}", file=out)
    print(f"pathLength  {w.path_length}", file=out)
    print(f"ordInitial  {fmt_big(w.ord_initial)}", file=out)
    print(f"checks      {json.dumps(w.checks)}", file=out)
    if args.trace:
        Path(args.trace).write_text(w.dumps() + "\n", encoding="utf-8")
        log.info("trace written to %s", args.trace)
    bad = not w.checks["witnessTrue"] or not w.checks["pathWithinOrd"] or w.checks["batchesPerStep"] > 1
    return InvariantViolation.exit_code if bad else 0


BENCH_COLUMNS = ("a", "ordBase", "ord", "pathLength", "maxSize", "szf", "truthCalls", "witness")


def bench_rows(p, values):
    rows = []
    for a in values:
        w = run_search(p, a)
        h = initial(p, a)
        rows.append({
            "a": a,
            "ordBase": ce.ord_ch(ce.Base(_base_of(h))),
            "ord": w.ord_initial,
            "pathLength": w.path_length,
            "maxSize": w.max_size,
            "szf": ce.szf(h, p.s),
            "truthCalls": sum(st.batches for st in w.steps),
            "witness": w.value,
        })
    return rows


def _base_of(h):
    while type(h) is ce.EOp:
        h = h.body
    return h.deriv


def double_length(a: int) -> int:
    return a.bit_length().bit_length()


def fit_report(rows, e_count: int) -> list:
    """Human-readable fit lines: path against ||a||, ord against |a|, size and ord checks."""
    lines = []
    xs = [double_length(r["a"]) for r in rows]
    ys = [r["pathLength"] for r in rows]
    denom = sum(x * x for x in xs)
    if denom:
        c = sum(x * y for x, y in zip(xs, ys)) / denom
        resid = max(abs(y - c * x) for x, y in zip(xs, ys))
        lines.append(f"pathLength ~ c*||a||: c={c:.4f} max|residual|={resid:.4f}")
    pts = [(math.log(r["a"].bit_length()), math.log(r["ord"])) for r in rows
           if r["a"] > 1 and r["ord"] > 0 and r["ord"].bit_length() < 1000]
    if len({x for x, _ in pts}) >= 2:
        slope, _ = statistics.linear_regression([x for x, _ in pts], [y for _, y in pts])
        lines.append(f"ord ~ |a|^k: k={slope:.4f}")
    over = [r["a"] for r in rows if r["maxSize"] > r["szf"]]
    lines.append("sizes within szf: " + ("yes" if not over else f"no, at a={over}"))
    if e_count:
        exact = all(r["ord"] == _tower_minus(r["ordBase"], e_count) for r in rows)
        lines.append(f"ord = E^{e_count} of ordBase exactly: {'yes' if exact else 'no'}")
    return lines


def _tower_minus(o: int, k: int) -> int:
    for _ in range(k):
        o = ce.exp_minus_one(o)
    return o


def cmd_bench(args, out) -> int:
    h = parse_notation(read_source(args.suite))
    if type(h) is not ce.Base:
        raise WellFormednessError("bench runs on a plain proof script")
    p = recipe(args.recipe, h.deriv, args.i, args.j)
    rows = bench_rows(p, parse_sweep(args.sweep))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    print(buf.getvalue(), end="", file=out)
    print(f"# recipe {p.kind}, predicted cost {p.regime}", file=out)
    for line in fit_report(rows, p.e_count):
        print(f"# {line}", file=out)
    return 0


# --------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cutred", description="Lazy cut-reduction on proof notations.")
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int, help="override the configured seed")
    parser.add_argument("-q", "--quiet", action="store_true", help="only log warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="well-formedness and measures of a script or notation")
    p.add_argument("file")
    p.add_argument("--vars", default="x", help="comma-separated free variables allowed (default x)")
    p.add_argument("--subst", action="append", metavar="NAME=VALUE")
    p.add_argument("--assume-axioms", action="store_true", help="skip the validity check of open axioms")
    p.add_argument("--level", type=int, default=0, help="formula class level for crk")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("explore", help="follow sub-derivations lazily")
    p.add_argument("file")
    p.add_argument("--e", type=int, default=0, help="number of elimination prefixes")
    p.add_argument("--subst", action="append", metavar="NAME=VALUE")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--path", help="comma-separated child indices")
    g.add_argument("--depth", type=int, help="dump the denoted tree to this depth")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_explore)

    p = sub.add_parser("witness", help="extract a witness by local search")
    p.add_argument("file")
    p.add_argument("--recipe", choices=RECIPE_KINDS, default="S2_im1")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--trace", help="write the JSON trace here")
    p.set_defaults(run=cmd_witness)

    p = sub.add_parser("bench", help="sweep the parameter and report cost columns as CSV")
    p.add_argument("suite", help="script file or corpus entry name")
    p.add_argument("--recipe", choices=RECIPE_KINDS, default="S2_im1")
    p.add_argument("--sweep", default="a=2^4..2^12")
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--j", type=int, default=0)
    p.set_defaults(run=cmd_bench)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        config = Config.load(args.config) if args.config else Config()
        if args.seed is not None:
            config = Config.from_dict({**config.to_dict(), "seed": args.seed})
    except (OSError, ValueError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return ParseError.exit_code
    with use_config(config):
        log_effective(config)
        try:
            return args.run(args, out)
        except CutredError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
