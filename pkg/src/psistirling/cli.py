"""Command-line front end: tables, Bell sequences, Dobinski sums, the identity ledger."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import bell, harness, stirling
from .exactnum import Poly, format_rational, newton_coefficients, parse_rational
from .psi import PsiSequence

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_ARGS = 2
EXIT_UNEXPECTED_FAILURE = 3

PSI_FAMILIES = ("tilde2", "tilde1", "cycle1")
Q_FAMILIES = ("carlitz2", "inv2", "cigl2")
BELL_FAMILIES = ("tilde", "tilde-barred", "carlitz", "carlitz-recurrence", "cigl", "classical")


class UsageError(Exception):
    """Bad arguments detected after parsing; reported with exit status 2."""


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_rational(text: str) -> Fraction:
    v = _rational(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return v


def _psi(text: str) -> PsiSequence:
    try:
        return PsiSequence.from_spec(text)
    except (ValueError, OSError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text}")
    return v


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return text == "on"


def _render(v: Fraction, digits: int | None) -> str:
    return format_rational(v) if digits is None else bell.to_decimal(v, digits)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


# -- commands ---------------------------------------------------------------------


def _triangle_text(tri: stirling.Triangle, fmt: str, digits: int | None) -> str:
    if digits is None:
        if fmt == "csv":
            return tri.to_csv()
        if fmt == "json":
            return tri.to_json() + "\n"
        return tri.to_pretty() + "\n"
    rows = [[_render(v, digits) for v in r] for r in tri.rows]
    if fmt == "json":
        return json.dumps({"family": tri.family, "params": tri.params, "rows": rows}) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "value"])
        for n, r in enumerate(rows):
            for k, v in enumerate(r):
                w.writerow([n, k, v])
        return buf.getvalue()
    return "\n".join(f"{n}: " + " ".join(r) for n, r in enumerate(rows)) + "\n"


def cmd_table(args) -> int:
    if args.family in PSI_FAMILIES:
        if args.q is not None:
            raise UsageError(f"{args.family} takes --psi, not --q")
        seq = args.psi or PsiSequence.classical()
        if args.family == "tilde2" and args.route != "recurrence":
            tri = stirling.TILDE2_ROUTES[args.route](seq, args.n)
        else:
            tri = stirling.build(args.family, args.n, seq=seq)
    else:
        if args.psi is not None:
            raise UsageError(f"{args.family} takes --q, not --psi")
        if args.route != "recurrence":
            raise UsageError("--route applies to tilde2 only")
        tri = stirling.build(args.family, args.n, q=args.q if args.q is not None else Fraction(1))
    _emit(_triangle_text(tri, args.format, args.digits), args.out)
    return EXIT_OK


def _bell_values(args) -> bell.BellSequence:
    fam = args.family
    if fam == "tilde":
        return bell.bell_tilde(args.psi or PsiSequence.classical(), args.n)
    if fam == "classical":
        return bell.bell_classical(args.n)
    if args.psi is not None:
        raise UsageError(f"{fam} takes --q, not --psi")
    q = args.q if args.q is not None else Fraction(1)
    return {
        "tilde-barred": bell.bell_tilde_barred,
        "carlitz": bell.bell_carlitz,
        "carlitz-recurrence": bell.bell_carlitz_by_recurrence,
        "cigl": bell.bell_cigl,
    }[fam](q, args.n)


def cmd_bell(args) -> int:
    if args.family in ("tilde", "classical") and args.q is not None:
        raise UsageError(f"{args.family} takes --psi, not --q")
    b = _bell_values(args)
    vals = [_render(v, args.digits) for v in b.values]
    if args.format == "json":
        text = json.dumps({"family": b.family, "params": b.params, "values": vals}) + "\n"
    elif args.format == "csv":
        text = "n,value\n" + "".join(f"{n},{v}\n" for n, v in enumerate(vals))
    else:
        text = "".join(f"{n}: {v}\n" for n, v in enumerate(vals))
    _emit(text, args.out)
    return EXIT_OK


def cmd_dobinski(args) -> int:
    seq = args.psi
    conv = bell.TIMES if args.convention == "times" else bell.DIVIDES
    if args.q17_factor and seq.q_parameter is None:
        raise UsageError("--q17-factor on needs a classical or q:<r> sequence")
    try:
        approx = bell.dobinski_sum(seq, args.n, conv, args.tol, args.rcap, args.q17_factor)
    except bell.ConvergenceError as exc:
        err = {"error": "non-convergence", "detail": str(exc), "psi": seq.spec, "n": args.n, "convention": conv}
        sys.stderr.write(json.dumps(err) + "\n")
        return EXIT_COMPUTE
    record = approx.to_dict(args.digits)
    exact = None
    if seq.limit is None or args.n <= seq.limit:
        try:
            exact = bell.bell_tilde(seq, args.n)[args.n]
        except ValueError:
            exact = None
    if exact is not None:
        record["exact"] = format_rational(exact)
        record["exact_decimal"] = bell.to_decimal(exact, args.digits)
        record["within_tail_bound"] = approx.contains(exact)
    _emit(json.dumps(record) + "\n", args.out)
    if not approx.within(args.tol):
        detail = "no usable tail bound" if approx.tail_bound is None else "tail bound above --tol at --rcap"
        sys.stderr.write(json.dumps({"error": "non-convergence", "detail": detail,
                                     "psi": seq.spec, "n": args.n, "convention": conv}) + "\n")
        return EXIT_COMPUTE
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.all == bool(args.suite):
        raise UsageError("give either --all or one or more --suite ids")
    suites = list(harness.SUITES) if args.all else args.suite
    unknown = [s for s in suites if s not in harness.SUITES]
    if unknown:
        raise UsageError(f"unknown suite {unknown[0]!r}; registered suites: {', '.join(harness.SUITES)}")
    if args.max_n < 1:
        raise UsageError("--max-n must be at least 1")
    qs = tuple(args.q) if args.q else harness.DEFAULT_Q_SAMPLES
    verdicts = []
    for s in suites:
        verdicts.extend(harness.run_suite(s, args.max_n, qs))
    _emit(harness.export_ledger(verdicts), args.out)
    if not args.quiet:
        sys.stderr.write(harness.summary_table(verdicts))
    unexpected = [v for v in verdicts if v.verdict == "FAILED" and harness.expected_verified(v)]
    for v in unexpected:
        sys.stderr.write(f"unexpected failure: {v.identity_id} {json.dumps(v.params, sort_keys=True)}\n")
    return EXIT_UNEXPECTED_FAILURE if unexpected else EXIT_OK


def cmd_expand(args) -> int:
    seq = args.psi or PsiSequence.classical()
    if args.poly is not None:
        try:
            coeffs = json.loads(args.poly)
            p = Poly(parse_rational(str(c)) for c in coeffs)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"--poly must be a JSON array of rationals: {exc}") from None
        if args.nodes is not None:
            try:
                nodes = [parse_rational(str(v)) for v in json.loads(args.nodes)]
            except (ValueError, TypeError) as exc:
                raise UsageError(f"--nodes must be a JSON array of rationals: {exc}") from None
        else:
            nodes = seq.nodes(max(p.degree, 0))
        result = {"poly": [format_rational(c) for c in p.coeffs],
                  "nodes": [format_rational(v) for v in nodes],
                  "coefficients": [format_rational(c) for c in newton_coefficients(p, nodes)]}
    else:
        if args.k is None:
            raise UsageError("expand needs --poly or --k")
        poly = seq.falling_poly(args.k) if args.kind == "falling" else seq.rising_poly(args.k)
        result = {"psi": seq.spec, "kind": args.kind, "k": args.k,
                  "coefficients": [format_rational(c) for c in poly.coeffs]}
    if args.format == "pretty":
        text = " ".join(result["coefficients"]) + "\n"
    else:
        text = json.dumps(result) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="psistirling", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("csv", "json", "pretty"), default="pretty"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", type=Path, help="write to this file instead of standard output")

    t = sub.add_parser("table", help="second- and first-kind triangles")
    t.add_argument("--family", choices=stirling.FAMILIES, required=True)
    t.add_argument("--psi", type=_psi, help="classical, q:<r>, custom:<path> or custom:[...]")
    t.add_argument("--q", type=_rational)
    t.add_argument("--n", type=_nonneg_int, required=True)
    t.add_argument("--route", choices=tuple(stirling.TILDE2_ROUTES), default="recurrence")
    t.add_argument("--digits", type=_nonneg_int, help="render decimals instead of exact rationals")
    common(t)
    t.set_defaults(func=cmd_table)

    b = sub.add_parser("bell", help="Bell-type row sums")
    b.add_argument("--family", choices=BELL_FAMILIES, default="tilde")
    b.add_argument("--psi", type=_psi)
    b.add_argument("--q", type=_rational)
    b.add_argument("--n", type=_nonneg_int, required=True)
    b.add_argument("--digits", type=_nonneg_int)
    common(b)
    b.set_defaults(func=cmd_bell)

    d = sub.add_parser("dobinski", help="truncated Dobinski-type sum with a rigorous tail bound")
    d.add_argument("--psi", type=_psi, required=True)
    d.add_argument("--n", type=_nonneg_int, required=True)
    d.add_argument("--convention", choices=("times", "divides"), default="times")
    d.add_argument("--q17-factor", type=_on_off, default=False, metavar="on|off")
    d.add_argument("--tol", type=_positive_rational, default=harness.DEFAULT_TOL)
    d.add_argument("--rcap", type=_nonneg_int, default=harness.DEFAULT_RCAP)
    d.add_argument("--digits", type=_nonneg_int, default=10)
    d.add_argument("--out", type=Path)
    d.set_defaults(func=cmd_dobinski)

    v = sub.add_parser("verify", help="run identity suites and write the JSON ledger")
    v.add_argument("--suite", action="append", default=[])
    v.add_argument("--all", action="store_true")
    v.add_argument("--max-n", type=_nonneg_int, default=8)
    v.add_argument("--q", type=_rational, action="append", help="q sample; repeat for several")
    v.add_argument("--quiet", action="store_true", help="omit the summary table on standard error")
    v.add_argument("--out", type=Path)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("expand", help="psi-falling/rising polynomials and Newton coefficients")
    e.add_argument("--psi", type=_psi)
    e.add_argument("--kind", choices=("falling", "rising"), default="falling")
    e.add_argument("--k", type=_nonneg_int)
    e.add_argument("--poly", help="JSON array of coefficients, constant term first")
    e.add_argument("--nodes", help="JSON array of Newton nodes; defaults to 0_psi, 1_psi, ...")
    common(e, ("json", "pretty"), "json")
    e.set_defaults(func=cmd_expand)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{parser.prog} {args.command}: error: {exc}\n")
        return EXIT_ARGS
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "detail": str(exc)}) + "\n")
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
