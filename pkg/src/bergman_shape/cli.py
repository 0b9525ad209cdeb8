#!/usr/bin/env python3
"""
Command-line front door: ``bergman-shape {moments,reconstruct,validate,spectra}``.

Exit codes: 0 ok, 1 validation failure, 2 usage or input error, 3 numerical
failure, 4 precision policy violation.
"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

from mpmath import mp
from pydantic import ValidationError

from bergman_shape.arnoldi import polynomials_from_hessenberg
from bergman_shape.config import RunConfig, load_config
from bergman_shape.errors import ShapeRecoveryError
from bergman_shape.faber import faber_second_kind, toeplitz_matrix
from bergman_shape.moments import domain_moments, real_to_complex
from bergman_shape.persistence import (
    CheckRecord,
    OutputWorkspace,
    RateRowRecord,
    ReportRecord,
    ValidationRecord,
    dump_laurent_json,
    format_decimal,
    load_domain_spec,
    load_laurent_json,
    read_hessenberg_csv,
    read_moments_csv,
    read_real_moments_csv,
    write_curve_csv,
    write_hessenberg_csv,
    write_moments_csv,
    write_rate_table_csv,
    write_spectrum_csv,
)
from bergman_shape.reconstruction import DEFAULT_CURVE_SAMPLES, CurveSample, curve_points, run_reconstruction
from bergman_shape.spectra import hessenberg_eigenvalues, match_spectra, polynomial_zeros_oracle
from bergman_shape.validation import VALIDATION_DOMAINS, run_validation

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2

SPECTRUM_MATCH_TOLERANCE = 1e-8

Handler = Callable[[argparse.Namespace, RunConfig], int]


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _svg(samples: Sequence[CurveSample], reference: Sequence[CurveSample] | None, title: str) -> str:
    from bergman_shape.visualization import render_curves_svg

    return render_curves_svg(samples, reference, title=title)


# === SUBCOMMANDS ===

def cmd_moments(args: argparse.Namespace, config: RunConfig) -> int:
    """Write the moment table of a domain (or of real moments) to CSV.

    Args:
        args: Parsed flags: --domain or --real-moments, --degree, --nodes, --output
        config: Run settings; digits default to the working precision

    Returns:
        EXIT_OK; failures surface as ShapeRecoveryError

    Examples:
        bergman-shape moments --domain triangle.json --degree 31
    """
    ctx = config.precision_for("moments")
    with ctx.activate():
        digits = config.digits_for(ctx.mantissa_bits)
        if args.domain:
            spec = load_domain_spec(_read(args.domain))
            M = domain_moments(spec, args.degree, nodes=args.nodes or config.quad_nodes)
            source = args.domain
        else:
            M = real_to_complex(read_real_moments_csv(_read(args.real_moments)), args.degree)
            source = args.real_moments

        workspace = OutputWorkspace(
            "moments",
            ctx.mantissa_bits,
            config.output_dir,
            {"source": source, "degree": args.degree},
        )
        target = Path(args.output).resolve() if args.output else "moments.csv"
        workspace.write_text("moments", target, write_moments_csv(M, digits))
        workspace.save_manifest()
        print(f"mu_00 = {format_decimal(M.area, digits)}")
    return EXIT_OK


def cmd_reconstruct(args: argparse.Namespace, config: RunConfig) -> int:
    """Moments file to Laurent map, curve, Hessenberg matrix and report.

    Args:
        args: Parsed flags: --moments, --n, --m, --samples, --reference, --svg
        config: Run settings; precision defaults to 53 bits for n <= 30

    Returns:
        EXIT_OK; failures surface as ShapeRecoveryError
    """
    ctx = config.precision_for("reconstruct", args.n)
    with ctx.activate():
        digits = config.digits_for(ctx.mantissa_bits)
        M = read_moments_csv(_read(args.moments))
        reference = None
        if args.reference:
            reference = load_domain_spec(_read(args.reference)).reference_map(args.n)
        report, H = run_reconstruction(
            M, args.n, args.m, args.samples, reference, strict=config.strict_precision
        )

        workspace = OutputWorkspace(
            "reconstruct",
            ctx.mantissa_bits,
            config.output_dir,
            {"moments": args.moments, "n": report.n, "m": report.m, "samples": args.samples},
        )
        workspace.write_text("laurent", "laurent.json", dump_laurent_json(report.laurent, digits))
        workspace.write_text("curve", "curve.csv", write_curve_csv(report.curve, digits))
        workspace.write_text("hessenberg", "hessenberg.csv", write_hessenberg_csv(H, ctx.mantissa_bits, digits))
        record = ReportRecord.from_report(report, ctx.mantissa_bits, M.hermitian_deviation, digits)
        workspace.write_json("report", "report.json", record)
        if args.svg:
            ref_curve = curve_points(reference, args.samples) if reference is not None else None
            workspace.write_text("svg", Path(args.svg).resolve(), _svg(report.curve, ref_curve, f"n={report.n}, m={report.m}"))
        workspace.save_manifest()

        print(f"b = {mp.nstr(report.laurent.b, 12)}")
        if report.sup_error is not None:
            print(f"sup_error = {mp.nstr(report.sup_error, 6)}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, config: RunConfig) -> int:
    """Acceptance checks on a reference domain; exit 1 on any failure.

    Args:
        args: Parsed flags: domain, --n, --step, --rows, --k, --m, --svg
        config: Run settings; workers size the rate-table pool

    Returns:
        EXIT_OK when every check passes, else EXIT_VALIDATION_FAILED

    Examples:
        bergman-shape validate triangle --n 100 --rows 11 --workers 4
    """
    ctx = config.precision_for("validate")
    with ctx.activate():
        digits = config.digits_for(ctx.mantissa_bits)
        outcome = run_validation(
            args.domain,
            n=args.n,
            step=args.step,
            rows=args.rows,
            k=args.k,
            m=args.m,
            workers=config.workers,
            strict=config.strict_precision,
            with_map=bool(args.svg),
        )

        workspace = OutputWorkspace(
            "validate",
            ctx.mantissa_bits,
            config.output_dir,
            {"domain": args.domain, "n": args.n, "step": args.step, "rows": args.rows, "k": args.k, "m": args.m},
        )
        if outcome.rows:
            workspace.write_text("rate_table", "rate_table.csv", write_rate_table_csv(outcome.rows))
        record = ValidationRecord(
            domain=outcome.domain,
            passed=outcome.passed,
            checks=[CheckRecord(name=c.name, passed=c.passed, detail=c.detail) for c in outcome.checks],
            rate_rows=[RateRowRecord.from_row(r, digits) for r in outcome.rows],
        )
        workspace.write_json("validation", "validation.json", record)
        if args.svg and outcome.laurent is not None:
            samples = curve_points(outcome.laurent)
            ref_curve = curve_points(outcome.reference) if outcome.reference is not None else None
            workspace.write_text("svg", Path(args.svg).resolve(), _svg(samples, ref_curve, outcome.domain))
        workspace.save_manifest()

    for check in outcome.checks:
        print(f"{'PASS' if check.passed else 'FAIL'} {check.name}: {check.detail}")
    print("PASS" if outcome.passed else "FAIL")
    return EXIT_OK if outcome.passed else EXIT_VALIDATION_FAILED


def cmd_spectra(args: argparse.Namespace, config: RunConfig) -> int:
    """Eigenvalues of the n x n leading block of a Hessenberg or Toeplitz matrix.

    Args:
        args: Parsed flags: --hessenberg or --laurent, --n, --compare
        config: Run settings

    Returns:
        EXIT_OK, or EXIT_VALIDATION_FAILED when --compare finds a zero farther
        than SPECTRUM_MATCH_TOLERANCE from its eigenvalue
    """
    ctx = config.precision_for("spectra", args.n)
    with ctx.activate():
        digits = config.digits_for(ctx.mantissa_bits)
        if args.hessenberg:
            H = read_hessenberg_csv(_read(args.hessenberg))
            source = args.hessenberg
        else:
            L = load_laurent_json(_read(args.laurent))
            H = toeplitz_matrix(L, args.n)
            source = args.laurent
        spectrum = hessenberg_eigenvalues(H, args.n)

        workspace = OutputWorkspace(
            "spectra", ctx.mantissa_bits, config.output_dir, {"source": source, "n": args.n, "compare": args.compare}
        )
        workspace.write_text("spectrum", "spectrum.csv", write_spectrum_csv(spectrum, digits))

        status = EXIT_OK
        if args.compare:
            if args.hessenberg:
                poly = polynomials_from_hessenberg(H, args.n)[args.n]
            else:
                poly = faber_second_kind(L, args.n).polys[args.n]
            distance = match_spectra(spectrum, polynomial_zeros_oracle(poly))
            passed = bool(distance <= SPECTRUM_MATCH_TOLERANCE)
            detail = f"max pairing distance {mp.nstr(distance, 6)} <= {SPECTRUM_MATCH_TOLERANCE}"
            workspace.write_json("comparison", "comparison.json", CheckRecord(name="zeros", passed=passed, detail=detail))
            print(f"{'PASS' if passed else 'FAIL'} {detail}")
            status = EXIT_OK if passed else EXIT_VALIDATION_FAILED
        workspace.save_manifest()

        for value in spectrum.sorted():
            print(mp.nstr(value, 15))
    return status


# === ARGUMENT PARSING ===

def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="Working precision in bits (>= 53)")
    common.add_argument("--workers", type=int, default=None, help="Process-pool size for rate tables")
    common.add_argument("--strict-precision", action="store_true", default=None, help="Refuse to run below the precision policy")
    common.add_argument("--log-level", default=None, help="Logging level (DEBUG, INFO, WARNING, ...)")
    common.add_argument("--digits", type=int, default=None, help="Significant digits in output files")
    common.add_argument("--output-dir", default=None, help="Directory for written artifacts")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bergman-shape",
        description="Recover a planar domain from its complex area moments via Bergman polynomials.",
    )
    common = _common_options()
    sub = parser.add_subparsers(dest="command", required=True)

    moments = sub.add_parser("moments", parents=[common], help="Compute complex moments of a domain")
    source = moments.add_mutually_exclusive_group(required=True)
    source.add_argument("--domain", help="Domain spec JSON file")
    source.add_argument("--real-moments", help="Real moments CSV (m,n,value)")
    moments.add_argument("--degree", type=int, default=10, help="Moment degree N")
    moments.add_argument("--nodes", type=int, default=None, help="Trapezoid nodes for parametric boundaries")
    moments.add_argument("--output", default=None, help="Moment CSV path (default: <output-dir>/moments.csv)")
    moments.set_defaults(handler=cmd_moments)

    reconstruct = sub.add_parser("reconstruct", parents=[common], help="Reconstruct the boundary from moments")
    reconstruct.add_argument("--moments", required=True, help="Moment CSV file")
    reconstruct.add_argument("--n", type=int, required=True, help="Hessenberg column n (moments must reach n+1)")
    reconstruct.add_argument("--m", type=int, default=None, help="Truncation order, 1 < m < n (default n/2)")
    reconstruct.add_argument("--samples", type=int, default=DEFAULT_CURVE_SAMPLES, help="Curve samples K")
    reconstruct.add_argument("--reference", default=None, help="Domain spec JSON with a known exterior map")
    reconstruct.add_argument("--svg", default=None, help="Write an SVG plot to this path")
    reconstruct.set_defaults(handler=cmd_reconstruct)

    validate = sub.add_parser("validate", parents=[common], help="Run acceptance checks on a reference domain")
    validate.add_argument("domain", choices=sorted(VALIDATION_DOMAINS), help="Reference domain")
    validate.add_argument("--n", type=int, default=None, help="First n of the grid")
    validate.add_argument("--step", type=int, default=10, help="Grid step")
    validate.add_argument("--rows", type=int, default=1, help="Number of grid rows")
    validate.add_argument("--k", type=int, default=2, help="Tracked coefficient index for the triangle table")
    validate.add_argument("--m", type=int, default=None, help="Truncation order (default n/2)")
    validate.add_argument("--svg", default=None, help="Write an SVG plot to this path")
    validate.set_defaults(handler=cmd_validate)

    spectra = sub.add_parser("spectra", parents=[common], help="Eigenvalues of Hessenberg or Toeplitz blocks")
    matrix = spectra.add_mutually_exclusive_group(required=True)
    matrix.add_argument("--hessenberg", help="Hessenberg CSV file")
    matrix.add_argument("--laurent", help="Laurent map JSON file (uses its Toeplitz matrix)")
    spectra.add_argument("--n", type=int, required=True, help="Order of the leading block")
    spectra.add_argument("--compare", action="store_true", help="Compare with companion-matrix zeros")
    spectra.set_defaults(handler=cmd_spectra)

    return parser


def _flags(args: argparse.Namespace) -> dict[str, Any]:
    return {
        "precision_bits": args.precision,
        "workers": args.workers,
        "strict_precision": args.strict_precision,
        "log_level": args.log_level,
        "digits": args.digits,
        "output_dir": args.output_dir,
    }


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point for the ``bergman-shape`` console script."""
    args = build_parser().parse_args(argv)
    handler: Handler = args.handler
    try:
        config = load_config(_flags(args))
        logging.basicConfig(level=config.log_level.upper(), format="%(levelname)s %(message)s", force=True)
        return handler(args, config)
    except ShapeRecoveryError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"ValidationError: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
