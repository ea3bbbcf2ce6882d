"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails (the report is
still printed), 2 for malformed input or violated preconditions.  Algebra
arguments (``-a``) take a file or a build spec such as ``matrix:2``.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from typing import Sequence

from . import io
from .algebra import Algebra, LinearOperator, PreconditionError, build_algebra, check_identities
from .catalog import catalog_entry, catalog_list, catalog_selftest
from .exact import as_rational, format_rational, gen_vandermonde
from .rb import (
    NotRotaBaxterError,
    RBOperator,
    Report,
    build_lemma9,
    build_left_mult,
    build_splitting,
    build_triangular,
    check_faulhaber,
    check_stirling,
    max_rb_mat,
    nilpotency_index,
    rb_witness,
    spectrum_profile,
    unital_report,
    verify_rb,
    grid_search_rb,
)
from .ybe import aybe_check, aybe_to_rb, cybe_check, cybe_to_rb, rb_to_aybe

OK, FAILED, INVALID = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(INVALID, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _split(text: str | None) -> list[str]:
    if not text:
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


def _kv(text: str | None) -> dict:
    out = {}
    for item in _split(text):
        key, sep, val = item.partition("=")
        if not sep:
            raise PreconditionError(f"parameter {item!r} is not key=value")
        out[key.strip()] = val.strip()
    return out


def _emit(args, text: str) -> None:
    out = getattr(args, "output", None)
    if out and out != "-":
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_out(args, rep: Report | list[Report]) -> int:
    reps = rep if isinstance(rep, list) else [rep]
    if args.json:
        sys.stdout.write(io.dumps(io.report_to_doc(rep)))
    else:
        for r in reps:
            print(r)
    return OK if all(r.ok for r in reps) else FAILED


def _algebra(args) -> Algebra | None:
    ref = getattr(args, "algebra", None)
    return io.resolve_algebra(ref) if ref else None


def _operator(args) -> RBOperator:
    R = io.load_operator(args.operator, _algebra(args))
    if getattr(args, "weight", None) is not None and args.weight != R.weight:
        R = RBOperator(R.op, args.weight, verify_rb(R.algebra, R.op, args.weight))
    return R


def _tensor(args):
    return io.load_tensor(args.tensor, _algebra(args))


# -- algebra -------------------------------------------------------------------

def cmd_algebra_build(args) -> int:
    A = io.resolve_algebra(args.spec) if "+" in args.spec else build_algebra(args.spec)
    _emit(args, io.dumps(io.algebra_to_doc(A)))
    return OK


def cmd_algebra_check(args) -> int:
    A = io.resolve_algebra(args.file)
    flags = check_identities(A)
    unit = A.unit
    if args.json:
        doc = {"schema": io.SCHEMA, "type": "algebra-check", "dim": A.dim, "flags": flags,
               "unit": None if unit is None else [format_rational(c) for c in unit.coords]}
        sys.stdout.write(io.dumps(doc))
    else:
        print(f"dim {A.dim}")
        for name, value in flags.items():
            print(f"  {name:24s} {'yes' if value else 'no'}")
        print(f"  {'unit':24s} {unit if unit is not None else 'none'}")
    return OK


# -- rb ----------------------------------------------------------------------------

def cmd_rb_verify(args) -> int:
    R = _operator(args)
    w = format_rational(R.weight)
    if R.verified:
        msg = f"pass: Rota-Baxter operator of weight {w}"
        code = OK
    else:
        wit = rb_witness(R.algebra, R.op, R.weight)
        msg = f"fail: not Rota-Baxter of weight {w}" + (f" (pair {wit[0]}, {wit[1]})" if wit else "")
        code = FAILED
    if args.json:
        sys.stdout.write(io.dumps({"schema": io.SCHEMA, "type": "verify", "weight": w, "ok": code == OK, "message": msg}))
    else:
        print(msg)
    return code


def _analysis(R: RBOperator) -> Report:
    rep = Report(f"operator of weight {format_rational(R.weight)} on {R.algebra.name}")
    if not R.verified:
        wit = rb_witness(R.algebra, R.op, R.weight)
        rep.add("verify_rb", "fail", f"{wit[0]}, {wit[1]}" if wit else None)
        return rep
    rep.add("verify_rb", "pass")
    nil, idx = nilpotency_index(R)
    rep.data["nilpotency_index"] = idx if nil else None
    if R.algebra.unit is not None:
        rep.checks.extend(unital_report(R).checks)
        if R.weight != 0:
            rep.checks.extend(spectrum_profile(R).checks)
    return rep


def cmd_rb_report(args) -> int:
    return _report_out(args, _analysis(_operator(args)))


def cmd_rb_index(args) -> int:
    R = _operator(args)
    nil, idx = nilpotency_index(R)
    if args.json:
        sys.stdout.write(io.dumps({"schema": io.SCHEMA, "type": "index", "nilpotent": nil, "index": idx}))
    else:
        print(idx if nil else "not nilpotent")
    return OK


def _require_algebra(args) -> Algebra:
    A = _algebra(args)
    if A is None:
        raise PreconditionError("this command needs -a/--algebra")
    return A


def cmd_rb_build(args) -> int:
    kind = args.kind
    if kind == "maxrb":
        if args.n is None:
            raise PreconditionError("maxrb needs --n")
        R = max_rb_mat(args.n)
    else:
        A = _require_algebra(args)
        w = args.weight if args.weight is not None else Fraction(0)
        if kind == "splitting":
            R = build_splitting(A, _split(args.b1), _split(args.b2), w)
        elif kind == "triangular":
            R0 = _split(args.r0) or None
            zero = _split(args.zero)
            if R0 is None:
                R0 = ["0"] * len(zero)
            R = build_triangular(A, _split(args.minus), zero, _split(args.plus), R0, w)
        elif kind == "leftmult":
            if not args.element:
                raise PreconditionError("leftmult needs -e/--element")
            R = build_left_mult(A, args.element, w)
        else:
            if not args.variant:
                raise PreconditionError("lemma9 needs --variant")
            parts = [_split(p) for p in args.part or []]
            if args.variant == "i":
                R = build_lemma9(A, "i", parts, ops=[_split(o) for o in args.ops or []])
            elif args.variant == "h":
                R = build_lemma9(A, "h", parts, _split(args.op))
            else:
                if not args.op:
                    raise PreconditionError(f"variant {args.variant} needs --op as name=image pairs")
                images = _kv(args.op)
                R = build_lemma9(A, args.variant, parts, LinearOperator.from_map(A, images))
    _emit(args, io.dumps(io.operator_to_doc(R)))
    return OK


def _mask(text: str | None, d: int):
    if not text:
        return None
    cells = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        try:
            r, c = (int(t) for t in item.split(","))
        except ValueError as exc:
            raise PreconditionError(f"bad mask cell {item!r}; use row,col;row,col") from exc
        if not (0 <= r < d and 0 <= c < d):
            raise PreconditionError(f"mask cell {item!r} out of range")
        cells.append((r, c))
    return cells


def cmd_rb_search(args) -> int:
    A = _require_algebra(args)
    w = args.weight if args.weight is not None else Fraction(0)
    grid = [as_rational(g) for g in _split(args.grid)]
    found = grid_search_rb(A, w, grid, support=_mask(args.mask, A.dim), budget=args.budget, limit=args.limit)
    if args.json:
        doc = {"schema": io.SCHEMA, "type": "search", "weight": format_rational(w), "count": len(found),
               "operators": [[[format_rational(v) for v in row] for row in R.matrix.tolist()] for R in found]}
        sys.stdout.write(io.dumps(doc))
    else:
        print(f"{len(found)} operator(s)")
        for R in found:
            desc = ", ".join(f"{k} -> {v}" for k, v in R.describe().items()) or "0"
            print(f"  {desc}")
    return OK


# -- ybe ---------------------------------------------------------------------------

def cmd_ybe_verify(args) -> int:
    r = _tensor(args)
    A = r.algebra
    if args.equation == "aybe":
        w = args.weight if args.weight is not None else Fraction(0)
        ok = aybe_check(A, r, w)
        label = "associative Yang-Baxter" + (f" (weight {format_rational(w)})" if w else "")
    else:
        ok = cybe_check(A, r)
        label = "classical Yang-Baxter"
    print(f"{'pass' if ok else 'fail'}: {label}")
    return OK if ok else FAILED


def cmd_ybe_convert(args) -> int:
    if args.direction == "to-rb":
        r = _tensor(args)
        A = r.algebra
        via = args.via
        if via == "auto":
            via = "aybe" if A.flag("associative") else "cybe"
        if via == "aybe":
            R = aybe_to_rb(A, r, args.weight if args.weight is not None else 0)
        else:
            R, _ = cybe_to_rb(A, r)
        _emit(args, io.dumps(io.operator_to_doc(R)))
    else:
        if not args.operator:
            raise PreconditionError("to-tensor needs -R/--operator")
        R = _operator(args)
        _emit(args, io.dumps(io.tensor_to_doc(rb_to_aybe(R), four_index=args.four_index)))
    return OK


# -- catalog -------------------------------------------------------------------------

def cmd_catalog_list(args) -> int:
    items = catalog_list()
    if args.json:
        sys.stdout.write(io.dumps({"schema": io.SCHEMA, "type": "catalog", "entries": items}))
    else:
        for e in items:
            params = f" ({', '.join(e['params'])})" if e["params"] else ""
            print(f"{e['id']:22s} {e['kind']:8s}{params}")
    return OK


def cmd_catalog_get(args) -> int:
    if not args.id:
        raise PreconditionError("catalog get needs an entry id")
    _emit(args, io.dumps(io.catalog_export(args.id, **_kv(args.params))))
    return OK


def cmd_catalog_selftest(args) -> int:
    ids = [args.id] if args.id else [e["id"] for e in catalog_list()]
    reports = []
    for entry_id in ids:
        entry = catalog_entry(entry_id)
        samples = [_kv(args.params)] if args.params else list(entry.samples)
        reports.extend(catalog_selftest(entry_id, s) for s in samples)
    if args.json:
        sys.stdout.write(io.dumps(io.report_to_doc(reports)))
    else:
        for r in reports:
            print(r if (args.verbose or not r.ok) else f"pass  {r.title}")
        print(f"{sum(r.ok for r in reports)}/{len(reports)} passed")
    return OK if all(r.ok for r in reports) else FAILED


# -- identities ------------------------------------------------------------------------

def cmd_identities(args) -> int:
    if args.kind == "vandermonde":
        instances = []
        if args.points:
            pts = []
            for item in _split(args.points):
                value, _, mult = item.partition(":")
                pts.append((as_rational(value), int(mult or 1)))
            instances.append(pts)
        rng = random.Random(args.seed)
        for _ in range(args.random):
            values = rng.sample(range(-9, 10), rng.randint(1, 3))
            pts = [(Fraction(v, rng.randint(1, 3)), rng.randint(1, 3)) for v in values]
            if len({p[0] for p in pts}) == len(pts) and sum(m for _, m in pts) <= 7:
                instances.append(pts)
        if not instances:
            raise PreconditionError("vandermonde needs --points or --random")
        ok = True
        for pts in instances:
            det, closed = gen_vandermonde(pts)
            good = det == closed
            ok &= good
            label = ", ".join(f"{format_rational(v)}:{m}" for v, m in pts)
            print(f"{'pass' if good else 'fail'}  [{label}] det={format_rational(det)} closed={format_rational(closed)}")
        return OK if ok else FAILED
    if not args.operator:
        raise PreconditionError(f"{args.kind} needs -R/--operator")
    R = _operator(args)
    if not R.verified:
        raise PreconditionError("operator file is not a Rota-Baxter operator at its weight")
    if args.kind == "stirling":
        ok = check_stirling(R, args.N, assume_power_associative=args.power_associative)
    else:
        ok = check_faulhaber(R)
    print(f"{'pass' if ok else 'fail'}: {args.kind}")
    return OK if ok else FAILED


# -- parser ------------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, *, algebra=True, operator=False, tensor=False, weight=False, out=False):
    if algebra:
        p.add_argument("-a", "--algebra", help="algebra file or build spec")
    if operator:
        p.add_argument("-R", "--operator", help="operator file")
    if tensor:
        p.add_argument("-r", "--tensor", required=True, help="tensor file")
    if weight:
        p.add_argument("-w", "--weight", type=_rational, help="weight as p/q")
    if out:
        p.add_argument("-o", "--output", help="output file (default stdout)")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rotabaxter", description="Rota-Baxter operators and Yang-Baxter tensors in exact arithmetic.")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    alg = top.add_parser("algebra").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = alg.add_parser("build", help="write an algebra file")
    p.add_argument("spec")
    _common(p, algebra=False, out=True)
    p.set_defaults(func=cmd_algebra_build)
    p = alg.add_parser("check", help="identity flags and unit")
    p.add_argument("file")
    _common(p, algebra=False)
    p.set_defaults(func=cmd_algebra_check)

    rb = top.add_parser("rb").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = rb.add_parser("verify")
    _common(p, operator=True, weight=True)
    p.set_defaults(func=cmd_rb_verify, need_operator=True)
    p = rb.add_parser("report")
    _common(p, operator=True, weight=True)
    p.set_defaults(func=cmd_rb_report, need_operator=True)
    p = rb.add_parser("index")
    _common(p, operator=True)
    p.set_defaults(func=cmd_rb_index, need_operator=True)
    p = rb.add_parser("build")
    p.add_argument("kind", choices=["splitting", "triangular", "lemma9", "leftmult", "maxrb"])
    _common(p, weight=True, out=True)
    p.add_argument("--n", type=int, help="matrix size for maxrb")
    p.add_argument("--b1", help="comma-separated basis of the summand where R = 0")
    p.add_argument("--b2", help="comma-separated basis of the summand where R = -weight")
    p.add_argument("--minus", help="basis of A-")
    p.add_argument("--zero", help="basis of A0")
    p.add_argument("--plus", help="basis of A+")
    p.add_argument("--r0", help="images of the A0 basis under the inner operator")
    p.add_argument("-e", "--element", help="left multiplier")
    p.add_argument("--variant", help="construction variant (a, a1, ..., i)")
    p.add_argument("--part", action="append", help="one subspace basis; repeat in order")
    p.add_argument("--op", help="name=image pairs, or images of B's basis for variant h")
    p.add_argument("--ops", action="append", help="images per summand for variant i; repeat")
    p.set_defaults(func=cmd_rb_build)
    p = rb.add_parser("search")
    _common(p, weight=True)
    p.add_argument("--grid", required=True, help="comma-separated rational values; write --grid=-1,0,1 when the first is negative")
    p.add_argument("--mask", help="free cells as row,col;row,col (0-based)")
    p.add_argument("--budget", type=int, help="candidate budget override")
    p.add_argument("--limit", type=int, help="stop after this many solutions")
    p.set_defaults(func=cmd_rb_search)

    ybe = top.add_parser("ybe").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = ybe.add_parser("verify")
    p.add_argument("equation", choices=["aybe", "cybe"])
    _common(p, tensor=True, weight=True)
    p.set_defaults(func=cmd_ybe_verify)
    p = ybe.add_parser("convert")
    p.add_argument("direction", choices=["to-rb", "to-tensor"])
    p.add_argument("-r", "--tensor", help="tensor file (to-rb)")
    _common(p, operator=True, weight=True, out=True)
    p.add_argument("--via", choices=["auto", "aybe", "cybe"], default="auto")
    p.add_argument("--four-index", action="store_true", help="write the four-index sparse form")
    p.set_defaults(func=cmd_ybe_convert)

    cat = top.add_parser("catalog").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = cat.add_parser("list")
    _common(p, algebra=False)
    p.set_defaults(func=cmd_catalog_list)
    for name, fn in (("get", cmd_catalog_get), ("selftest", cmd_catalog_selftest)):
        p = cat.add_parser(name)
        p.add_argument("id", nargs="?")
        p.add_argument("--params", help="key=value pairs, comma-separated")
        _common(p, algebra=False, out=name == "get")
        if name == "selftest":
            p.add_argument("-v", "--verbose", action="store_true")
        p.set_defaults(func=fn)

    p = top.add_parser("identities")
    p.add_argument("kind", choices=["stirling", "faulhaber", "vandermonde"])
    _common(p, operator=True, weight=True)
    p.add_argument("-N", type=int, default=6, help="largest power for stirling")
    p.add_argument("--power-associative", action="store_true", help="assert power associativity")
    p.add_argument("--points", help="value:multiplicity pairs, comma-separated")
    p.add_argument("--random", type=int, default=0, help="number of seeded random instances")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for --random")
    p.set_defaults(func=cmd_identities)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "need_operator", False) and not args.operator:
        print(f"error: {args.group} {args.action} needs -R/--operator", file=sys.stderr)
        return INVALID
    try:
        return args.func(args)
    except NotRotaBaxterError as exc:
        print(f"fail: {exc}", file=sys.stderr)
        return FAILED
    except (PreconditionError, ValueError, KeyError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {msg}", file=sys.stderr)
        return INVALID


def main() -> None:
    sys.exit(run())
