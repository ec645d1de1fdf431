"""``qbundle`` command line.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
errors (bad flags, unknown suite, malformed presentation file).
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .report import Report
from .suites import SUITES, SuiteError, SuiteOptions, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _grid(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        dims = ()
    if len(dims) != 3 or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"grid must look like 48x48x48, got {text!r}")
    return dims


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _pair(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected two integers like 3,3, got {text!r}")
    return vals


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--algebra", default="suq2", help="preset name or block name in --presentation (default suq2)")
    sp.add_argument("--presentation", metavar="FILE", help="load algebras from a DSL file")
    sp.add_argument("--q", type=_fraction, default=Fraction(1, 2), help="rational q value p/r for numeric suites")
    sp.add_argument("--max-degree", type=int, default=4)
    sp.add_argument("--grid", type=_grid, default=(48, 48, 48), metavar="NxNxN")
    sp.add_argument("--fiber-samples", type=int, default=32, metavar="K")
    sp.add_argument("--equator-samples", type=_int_list, default=(64, 256, 1024), metavar="M[,M...]")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.add_argument("--skip-confluence", action="store_true", help="do not check confluence when loading a file")
    sp.add_argument("--output", "-o", metavar="FILE", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qbundle", description="Verify quantum principal bundle constructions.")
    sub = ap.add_subparsers(dest="command", required=True)

    rs = sub.add_parser("run-suite", help="run a named verification suite")
    rs.add_argument("suite", help=f"one of {', '.join(SUITES)}, all")
    _common(rs)

    ob = sub.add_parser("obstruction", help="symbolic forcing chain plus winding of the clutching map")
    _common(ob)

    nf = sub.add_parser("normal-form", help="print the normal form of an expression")
    nf.add_argument("expression")
    nf.add_argument("--strategy", choices=("leftmost", "rightmost"), default="leftmost")
    _common(nf)

    cb = sub.add_parser("cotensor-basis", help="dump the weight-matched basis of P (box) H as JSON")
    cb.add_argument("--bidegree", type=_pair, default=(3, 3), metavar="D1,D2")
    _common(cb)

    df = sub.add_parser("dump-function", help="write a sampled function as CSV (eta, xi1, xi2, re, im)")
    df.add_argument("function", choices=("a", "c", "omega", "cleave", "trivialized-a"))
    df.add_argument("--n", type=int, default=1, help="exponent for cleave")
    df.add_argument("--mask", choices=("A", "C"), default="A")
    _common(df)

    sh = sub.add_parser("show", help="print a presentation in canonical DSL form")
    _common(sh)
    return ap


def _options(args) -> SuiteOptions:
    return SuiteOptions(
        algebra=args.algebra,
        presentation=args.presentation,
        q=args.q,
        max_degree=args.max_degree,
        grid=args.grid,
        fiber_samples=args.fiber_samples,
        equator_samples=args.equator_samples,
        tol=args.tol,
        skip_confluence=args.skip_confluence,
    )


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _emit_report(report: Report, args) -> int:
    _emit(report.to_json() if args.format == "json" else report.to_text(), args.output)
    return EXIT_PASS if report.passed else EXIT_FAIL


def _run(args) -> int:
    opts = _options(args)
    if args.command == "run-suite":
        return _emit_report(run_suite(args.suite, opts), args)
    if args.command == "obstruction":
        return _emit_report(run_suite("obstruction", opts), args)

    opts.validate()
    if args.command == "normal-form":
        from .ncpoly import normal_form

        p = opts.presentation_obj()
        _emit(str(normal_form(p.parse(args.expression), strategy=args.strategy)), args.output)
        return EXIT_PASS
    if args.command == "cotensor-basis":
        from .comodule import dump_cotensor_basis

        p = opts.presentation_obj()
        _emit(dump_cotensor_basis(p, p, args.bidegree), args.output)
        return EXIT_PASS
    if args.command == "show":
        from .dsl import dumps

        _emit(dumps(opts.presentation_obj()), args.output)
        return EXIT_PASS
    if args.command == "dump-function":
        return _dump_function(args, opts)
    raise UsageError(f"unknown command {args.command!r}")


def _dump_function(args, opts: SuiteOptions) -> int:
    from .pwnum import cleave, coordinate, mask_of, omega, trivialization_iso

    g = opts.s3grid()
    m = mask_of(args.mask)
    if args.function in ("a", "c"):
        f = coordinate(g, args.function)
    elif args.function == "omega":
        f = omega(g)
    elif args.function == "cleave":
        f = cleave(args.n, m, g)
    else:
        f, _ = trivialization_iso(coordinate(g, "a"), m)
    if not args.output:
        raise UsageError("dump-function needs --output FILE")
    f.to_csv(args.output)
    return EXIT_PASS


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    from .dsl import DSLError
    from .parser import ParseError

    try:
        return _run(args)
    except (UsageError, SuiteError, DSLError, ParseError, FileNotFoundError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"qbundle: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
