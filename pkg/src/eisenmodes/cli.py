"""Command-line interface.

Subcommands: solve (one mode or a whole Fourier-mode assembly), table
(compare against the embedded worked-solution tables), sums (divisor
convolutions), combine (integrated-correlator style combinations), verify
(numeric residual check of a solution document).

Exit codes (part of the public contract):
    0   solved / all comparisons equal
    1   verification or comparison mismatch
    2   lambda is not of the form r(r+1) (no solution in the ansatz class)
    3   alpha or beta is not a half-integer
    4   no solution within the widened degree windows
    5   mode is obstructed (log-bearing leading term at y^{-r})
    6   no fixture table for the requested parameters
    64  usage error
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .bessel import expr_latex
from .divisors import (
    convolution_partial_sum,
    log_convolution_partial_sum,
    ramanujan_convolution,
    ramanujan_log_convolution,
)
from .fixtures import (
    FixtureError,
    compare_expressions,
    fixture_modes,
    fixture_particular,
    load_tables,
)
from .homogeneous import (
    T_MINUS_2_WEIGHTS,
    assemble_mode,
    combine,
    mode_solution_from_json_obj,
    solve_mode,
    zero_mode_alpha_sum,
)
from .numerics import DEFAULT_ENV, residual
from .solver import DEFAULT_WIDEN_CAP, NoSolutionInWindow
from .sources import Normalization, Params, classify_params

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_NOT_TRIANGULAR = 2
EXIT_NOT_HALF_INTEGER = 3
EXIT_NO_SOLUTION = 4
EXIT_OBSTRUCTED = 5
EXIT_NO_FIXTURE = 6
EXIT_USAGE = 64


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_half(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse half-integer {text!r}") from exc


def _emit(doc, args) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _build_params(args) -> Params:
    lam = args.lam
    if lam is None:
        if args.r is None:
            raise SystemExit(EXIT_USAGE)
        lam = args.r * (args.r + 1)
    return Params(args.alpha, args.beta, lam, Normalization(args.normalization))


def cmd_solve(args) -> int:
    if args.lam is None and args.r is None:
        print(json.dumps({"error": "give --lambda or --r"}), file=sys.stderr)
        return EXIT_USAGE
    cls = classify_params(args.alpha, args.beta,
                          args.lam if args.lam is not None else args.r * (args.r + 1))
    if cls.kind == "not_half_integer":
        print(json.dumps({"classification": cls.kind}))
        return EXIT_NOT_HALF_INTEGER
    if args.n is None and (args.n1 is None or args.n2 is None):
        print(json.dumps({"error": "give either --n1 and --n2, or --n with --cutoff"}),
              file=sys.stderr)
        return EXIT_USAGE
    params = _build_params(args)
    workers = args.workers or int(os.environ.get("EISENMODES_WORKERS", "1"))

    if args.n is not None:
        cutoff = args.cutoff or abs(args.n) + 4
        asm = assemble_mode(params, args.n, cutoff, workers=workers, decay=not args.no_decay)
        doc = asm.to_json_obj()
        doc["classification"] = cls.kind
        _emit(doc, args)
        if cls.kind == "lambda_not_triangular":
            return EXIT_NOT_TRIANGULAR
        return EXIT_OBSTRUCTED if asm.obstructed else EXIT_OK

    window_override = None
    if args.window:
        from .solver import DegreeWindow

        try:
            m_txt, M_txt = args.window.split(":")
            w = DegreeWindow(int(m_txt), int(M_txt))
        except ValueError:
            print(json.dumps({"error": f"cannot parse window {args.window!r}; use m:M"}))
            return EXIT_USAGE
        cells = [(0, 0), (0, 1), (1, 0), (1, 1)] if args.n1 and args.n2 else [0, 1]
        window_override = {c: w for c in cells}

    try:
        mode = solve_mode(params, args.n1, args.n2, window_override=window_override,
                          widen_cap=args.widen_cap)
    except NoSolutionInWindow as exc:
        doc = {
            "classification": cls.kind,
            "error": "no_solution_in_window",
            "retries": exc.retries,
            "windows": None if exc.windows is None else {
                str(c): [w.m, w.M] for c, w in exc.windows.items()
            },
            "inconsistent_rows": [str(r) for r in exc.inconsistent_rows[:8]],
        }
        _emit(doc, args)
        return EXIT_NOT_TRIANGULAR if cls.kind == "lambda_not_triangular" else EXIT_NO_SOLUTION
    doc = mode.to_json_obj()
    doc["classification"] = cls.kind
    if args.format == "latex":
        doc["latex"] = {
            "particular": expr_latex(mode.particular),
            "alpha": None if mode.alpha is None else mode.alpha.latex(),
        }
    _emit(doc, args)
    return EXIT_OBSTRUCTED if mode.obstruction is not None else EXIT_OK


def cmd_table(args) -> int:
    try:
        cases = fixture_modes(args.alpha, args.beta, args.lam)
    except FixtureError:
        print(json.dumps({"error": "no_fixture",
                          "params": f"({args.alpha},{args.beta},{args.lam})"}))
        return EXIT_NO_FIXTURE
    params = Params(args.alpha, args.beta, args.lam, Normalization.PUBLISHED)
    verdicts = []
    any_mismatch = False
    for case, pairs in cases.items():
        if args.cases and case not in args.cases:
            continue
        for (n1, n2) in pairs:
            used = []
            printed = fixture_particular(args.alpha, args.beta, args.lam, n1, n2,
                                         errata_used=used)
            mode = solve_mode(params, n1, n2)
            diffs = compare_expressions(mode.particular, printed)
            verdict = "equal" if not diffs else "mismatch"
            if verdict == "equal" and used:
                verdict = "equal_with_erratum"
            any_mismatch = any_mismatch or bool(diffs)
            verdicts.append(
                {
                    "case": case,
                    "n1": n1,
                    "n2": n2,
                    "verdict": verdict,
                    "errata": [f"{c}/{cell}: {reason}" for c, cell, reason in used],
                    "differences": diffs[:6],
                }
            )
    _emit({"schema": "eisenmodes/table-comparison/1", "entries": verdicts}, args)
    return EXIT_MISMATCH if any_mismatch else EXIT_OK


def cmd_sums(args) -> int:
    fn = ramanujan_log_convolution if args.log else ramanujan_convolution
    result = fn(args.a, args.b, args.s)
    doc = {
        "a": args.a,
        "b": args.b,
        "s": args.s,
        "log_weighted": bool(args.log),
        "status": result.status,
        "closed_form": None if result.closed_form is None else result.closed_form.to_json_obj(),
        "latex": None if result.closed_form is None else result.closed_form.latex(),
        "numeric": _fmt(result.numeric),
    }
    if args.limit:
        partial = (log_convolution_partial_sum if args.log else convolution_partial_sum)(
            args.a, args.b, args.s, args.limit
        )
        doc["partial_sum"] = {"limit": args.limit, "value": _fmt(partial)}
    _emit(doc, args)
    return EXIT_OK


def cmd_combine(args) -> int:
    if args.preset != "T-2":
        print(json.dumps({"error": f"unknown preset {args.preset!r}"}))
        return EXIT_USAGE
    comb = combine(T_MINUS_2_WEIGHTS, args.n1, args.n2, free_constants=["C1"])
    doc = comb.to_json_obj()
    ys = [float(v) for v in args.y.split(",")] if args.y else [0.5, 1.0]
    from .numerics import eval_expr

    spot = []
    sec = load_tables()["combination_T-2"]
    from .fixtures import _as_constant, _as_ylaurent, _mode_names, eval_table_expr
    from .bessel import DoubleBessel

    names = _mode_names(n1=args.n1, n2=args.n2)
    pref = _as_constant(eval_table_expr(sec["prefactor"], names))
    fixture = DoubleBessel(args.n1, args.n2, {
        (int(c[0]), int(c[1])): _as_ylaurent(eval_table_expr(e, names)).scale(pref)
        for c, e in sec["cells"].items()
    })
    ok = True
    for y in ys:
        ours = eval_expr(comb.table, y)
        ref = eval_expr(fixture, y)
        rel = abs(ours - ref) / max(abs(ref), 1e-300)
        ok = ok and rel <= 1e-8
        spot.append({"y": y, "value": _fmt(ours), "reference": _fmt(ref),
                     "relative_error": _fmt(rel)})
    doc["spot_check"] = {"points": spot, "verdict": "equal" if ok else "mismatch"}
    _emit(doc, args)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_verify(args) -> int:
    from .numerics import series_crosscheck

    with open(args.input) as fh:
        doc = json.load(fh)
    mode = mode_solution_from_json_obj(doc)
    ys = [float(v) for v in args.y.split(",")]
    residuals = []
    ok = True
    for y in ys:
        r = residual(mode, y, DEFAULT_ENV)
        residuals.append({"y": y, "relative_residual": _fmt(r)})
        ok = ok and r <= args.tolerance
    series = series_crosscheck(mode.particular, order=3)
    if series.get("status") == "ok":
        series = {k: (_fmt(v) if isinstance(v, float) else v) for k, v in series.items()}
        ok = ok and float(series["relative_error"]) <= 1e-5
    _emit(
        {
            "schema": "eisenmodes/verification/1",
            "input": args.input,
            "y_points": ys,
            "residuals": residuals,
            "series_checks": series,
            "tolerance": _fmt(args.tolerance),
            "pass": ok,
        },
        args,
    )
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_alpha_sum(args) -> int:
    params = Params(args.alpha, args.beta, args.lam, Normalization.PUBLISHED)
    res = zero_mode_alpha_sum(params, args.method)
    _emit(res.to_json_obj(), args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="eisenmodes",
        description="Exact Fourier-mode solver for products of non-holomorphic Eisenstein series",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="write the JSON document to a file")

    def params_args(p):
        p.add_argument("--alpha", type=_parse_half, required=True, help='e.g. "3/2"')
        p.add_argument("--beta", type=_parse_half, required=True)
        p.add_argument("--lambda", dest="lam", type=int, default=None)
        p.add_argument("--r", type=int, default=None, help="alternative to --lambda: lambda = r(r+1)")

    p = sub.add_parser("solve", help="solve one (n1, n2) mode or a full mode assembly")
    params_args(p)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--n", type=int, help="assemble the full Fourier mode n (with --cutoff)")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--no-decay", action="store_true", help="skip the decay-exponent scan")
    p.add_argument("--normalization", choices=[n.value for n in Normalization],
                   default=Normalization.PUBLISHED.value)
    p.add_argument("--window", help="degree-window override for all cells, as m:M")
    p.add_argument("--widen-cap", type=int, default=DEFAULT_WIDEN_CAP)
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers for assemblies (or EISENMODES_WORKERS)")
    p.add_argument("--format", choices=["json", "latex"], default="json")
    common(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("table", help="compare solver output against the embedded tables")
    params_args(p)
    p.add_argument("--cases", nargs="*", help="restrict to cases (generic, anti_diagonal, ...)")
    common(p)
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("sums", help="divisor convolution sums in closed form")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--log", action="store_true", help="log-weighted variant")
    p.add_argument("--limit", type=int, help="also print a partial sum up to this bound")
    common(p)
    p.set_defaults(fn=cmd_sums)

    p = sub.add_parser("combine", help="weighted combinations of mode solutions")
    p.add_argument("--preset", default="T-2")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--y", help="comma-separated spot-check points (default 0.5,1)")
    common(p)
    p.set_defaults(fn=cmd_combine)

    p = sub.add_parser("verify", help="numeric residual check of a solution document")
    p.add_argument("--input", required=True)
    p.add_argument("--y", default="0.5,1,2", help="comma-separated evaluation points")
    p.add_argument("--tolerance", type=float, default=1e-9)
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("alpha-sum", help="zero-mode homogeneous coefficient total")
    params_args(p)
    p.add_argument("--method", choices=["RamanujanExact", "FormalRamanujan", "NumericPartial"],
                   default="RamanujanExact")
    common(p)
    p.set_defaults(fn=cmd_alpha_sum)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, FixtureError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
