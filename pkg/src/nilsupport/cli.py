"""Command-line front end: module-expression DSL and subcommands.

Grammar of the DSL (whitespace insignificant, naturals in decimal):

    expr := "triv" | "def(" n ")" | "ad(" n ")" | "dual(" expr ")"
          | "sum(" expr "," expr ")" | "ten(" expr "," expr ")"
          | "sym(" d "," expr ")" | "ext(" d "," expr ")" | "tw(" expr "," r ")"

Exit codes: 0 ok, 1 usage, 2 parse error, 3 budget exceeded, 4 internal
invariant breach.  Identical configurations (including --seed) produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .ffmat import FieldSpec, field_to_obj
from .liealg import (DEFAULT_BUDGET, BudgetExceededError, NilTuple,
                     enumerate_cr, sample_cr)
from .oneparam import exp_degree_bound
from .repcore import (Ad, Def, Dual, Ext, ModuleExpr, Sum, Sym, Tensor, Triv,
                      Twist, is_irreducible_exhaustive, weights)
from .support import (InvariantViolation, alpha_operator, enumerate_support,
                      jordan_type, sample_support, verify_properties)

TINY_GRID_MODULES = ("triv", "def(2)", "sym(2,def(2))", "sym(3,def(2))",
                     "ten(def(2),def(2))", "tw(def(2),1)", "ext(2,def(2))")
TINY_GRID_PS = (2, 3)
TINY_GRID_RS = (1, 2)
TINY_GRID_N = 2


class DslError(ValueError):
    """DSL syntax or validation error; offset is 1-based, 0 if not positional."""

    def __init__(self, message, offset=0):
        super().__init__(f"{message} at offset {offset}" if offset else message)
        self.offset = offset


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise DslError(f"syntax error: {message}", self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def natural(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected a natural number")
        return int(self.text[start:self.pos])

    def word(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        if self.pos == start:
            self.error("expected an expression")
        return self.text[start:self.pos], start

    def expr(self):
        name, start = self.word()
        try:
            if name == "triv":
                return Triv()
            if name == "def":
                self.expect("(")
                n = self.natural()
                self.expect(")")
                return Def(n)
            if name == "ad":
                self.expect("(")
                n = self.natural()
                self.expect(")")
                return Ad(n)
            if name == "dual":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Dual(inner)
            if name == "sum" or name == "ten":
                self.expect("(")
                left = self.expr()
                self.expect(",")
                right = self.expr()
                self.expect(")")
                return Sum(left, right) if name == "sum" else Tensor(left, right)
            if name == "sym" or name == "ext":
                self.expect("(")
                d = self.natural()
                self.expect(",")
                inner = self.expr()
                self.expect(")")
                return Sym(d, inner) if name == "sym" else Ext(d, inner)
            if name == "tw":
                self.expect("(")
                inner = self.expr()
                self.expect(",")
                r = self.natural()
                self.expect(")")
                return Twist(inner, r)
        except DslError:
            raise
        except ValueError as exc:
            raise DslError(str(exc), start + 1) from exc
        self.pos = start
        self.error(f"unknown constructor {name!r}")


def parse(text: str) -> ModuleExpr:
    """Parse the module DSL; round-trips with ModuleExpr.dsl()."""
    parser = _Parser(text)
    tree = parser.expr()
    parser.skip_ws()
    if parser.pos != len(text):
        parser.error("trailing input")
    try:
        tree.leaf_rank()
    except ValueError as exc:
        raise DslError(f"mixed n values: {exc}") from exc
    return tree


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _emit(obj, csv_rows, args):
    if args.format == "json":
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in csv_rows:
            writer.writerow(row)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _field_from_args(args):
    modulus = None
    if args.modulus:
        modulus = tuple(int(x) for x in args.modulus.split(","))
    return FieldSpec(args.p, args.m, modulus)


def _budget(args):
    if args.budget is not None:
        return args.budget
    env = os.environ.get("NILSUPPORT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_cr(args):
    field = _field_from_args(args)
    if args.action == "enumerate":
        points = list(enumerate_cr(args.n, args.r, field, budget=_budget(args)))
        obj = {"count": len(points), "field": field_to_obj(field),
               "n": args.n, "r": args.r,
               "tuples": [pt.to_obj() for pt in points]}
        rows = [["index", "n", "r", "p", "m", "mats"]]
        for i, pt in enumerate(points):
            mats = "|".join(" ".join(str(e) for e in b.entries) for b in pt.mats)
            rows.append([str(i), str(pt.n), str(pt.r), str(field.p), str(field.m), mats])
        _emit(obj, rows, args)
    else:
        pt = sample_cr(args.n, args.r, field, args.seed)
        obj = pt.to_obj()
        mats = "|".join(" ".join(str(e) for e in b.entries) for b in pt.mats)
        rows = [["n", "r", "p", "m", "mats"],
                [str(pt.n), str(pt.r), str(field.p), str(field.m), mats]]
        _emit(obj, rows, args)
    return 0


def _load_tuple(path) -> NilTuple:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        return NilTuple.from_obj(obj)
    except (OSError, json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        raise DslError(f"cannot read tuple file {path}: {exc}") from exc


def _cmd_jordan(args):
    expr = parse(args.module)
    pt = _load_tuple(args.tuple)
    jt = jordan_type(alpha_operator(expr, pt))
    flag = not jt.is_free(pt.field.p)
    obj = {"module": expr.dsl(), "tuple": pt.to_obj(),
           "jordan_type": list(jt.partition), "in_support": flag}
    rows = [["module", "jordan_type", "in_support"],
            [expr.dsl(), " ".join(str(x) for x in jt.partition), "1" if flag else "0"]]
    _emit(obj, rows, args)
    return 0


def _cmd_weights(args):
    expr = parse(args.module)
    table = weights(expr, args.p)
    obj = {"module": expr.dsl(), "p": args.p,
           "weights": [{"weight": list(w), "multiplicity": m}
                       for w, m in table.entries]}
    rows = [["weight", "multiplicity"]]
    for w, m in table.entries:
        rows.append([" ".join(str(c) for c in w), str(m)])
    _emit(obj, rows, args)
    return 0


def _cmd_expdeg(args):
    expr = parse(args.module)
    bound = exp_degree_bound(expr, args.p)
    obj = {"module": expr.dsl(), "p": args.p, "bound": bound}
    rows = [["module", "p", "bound"], [expr.dsl(), str(args.p), str(bound)]]
    _emit(obj, rows, args)
    return 0


def _cmd_irreducible(args):
    expr = parse(args.module)
    field = _field_from_args(args)
    verdict = is_irreducible_exhaustive(expr, field, budget=_budget(args))
    obj = {"module": expr.dsl(), "field": field_to_obj(field), "irreducible": verdict}
    rows = [["module", "irreducible"], [expr.dsl(), "1" if verdict else "0"]]
    _emit(obj, rows, args)
    return 0


def _cmd_support(args):
    expr = parse(args.module)
    field = _field_from_args(args)
    if args.action == "enumerate":
        report = enumerate_support(expr, args.n, args.r, field, budget=_budget(args))
    else:
        report = sample_support(expr, args.n, args.r, field, args.seed, args.count)
    _emit(report.to_obj(), report.csv_rows(), args)
    return 0


def _cmd_verify(args):
    items = sorted({int(x) for x in args.items.split(",") if x})
    budget = _budget(args)
    mods = [parse(text) for text in TINY_GRID_MODULES]
    cells = []
    ok = True
    for p in TINY_GRID_PS:
        field = FieldSpec(p)
        for r in TINY_GRID_RS:
            points = list(enumerate_cr(TINY_GRID_N, r, field, budget=budget))
            report = verify_properties(mods, points, items, seed=args.seed,
                                       conjugations=args.conjugations)
            ok = ok and report.all_passed
            cells.append({"p": p, "r": r, "n": TINY_GRID_N,
                          "tuples": len(points), "report": report.to_obj()})
    obj = {"grid": args.grid, "seed": args.seed, "items": items,
           "modules": list(TINY_GRID_MODULES), "cells": cells, "all_passed": ok}
    rows = [["p", "r", "item", "passed", "checked", "counterexample"]]
    for cell in cells:
        for it in cell["report"]["items"]:
            rows.append([str(cell["p"]), str(cell["r"]), str(it["item"]),
                         "1" if it["passed"] else "0", str(it["checked"]),
                         it["counterexample"] or ""])
    _emit(obj, rows, args)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_common(sub):
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--out", default=None)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--budget", type=int, default=None)


def _add_field(sub):
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--m", type=int, default=1)
    sub.add_argument("--modulus", default=None,
                     help="comma-separated coefficients, constant term first")


def build_parser():
    parser = _ArgumentParser(prog="nilsupport")
    subs = parser.add_subparsers(dest="command", required=True)

    cr = subs.add_parser("cr")
    cr.add_argument("action", choices=("enumerate", "sample"))
    cr.add_argument("--n", type=int, required=True)
    cr.add_argument("--r", type=int, required=True)
    _add_field(cr)
    _add_common(cr)
    cr.set_defaults(func=_cmd_cr)

    jordan = subs.add_parser("jordan")
    jordan.add_argument("--module", required=True)
    jordan.add_argument("--tuple", required=True, help="path to a tuple JSON file")
    _add_common(jordan)
    jordan.set_defaults(func=_cmd_jordan)

    wt = subs.add_parser("weights")
    wt.add_argument("--module", required=True)
    wt.add_argument("--p", type=int, required=True)
    _add_common(wt)
    wt.set_defaults(func=_cmd_weights)

    ed = subs.add_parser("expdeg")
    ed.add_argument("--module", required=True)
    ed.add_argument("--p", type=int, required=True)
    _add_common(ed)
    ed.set_defaults(func=_cmd_expdeg)

    irr = subs.add_parser("irreducible")
    irr.add_argument("--module", required=True)
    _add_field(irr)
    _add_common(irr)
    irr.set_defaults(func=_cmd_irreducible)

    sup = subs.add_parser("support")
    sup.add_argument("action", choices=("enumerate", "sample"))
    sup.add_argument("--module", required=True)
    sup.add_argument("--n", type=int, required=True)
    sup.add_argument("--r", type=int, required=True)
    sup.add_argument("--count", type=int, default=10)
    _add_field(sup)
    _add_common(sup)
    sup.set_defaults(func=_cmd_support)

    ver = subs.add_parser("verify")
    ver.add_argument("--items", default="1,3,4,5,6,7,8")
    ver.add_argument("--grid", choices=("tiny",), default="tiny")
    ver.add_argument("--conjugations", type=int, default=8)
    _add_common(ver)
    ver.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DslError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
