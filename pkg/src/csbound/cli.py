"""Command-line front end.

Subcommands:

* ``bound``  -- compute, verify, and optionally save a lower bound for one
  (sigma, d, l)
* ``verify`` -- re-check a saved certificate
* ``table``  -- recompute the published bound table and show deltas
* ``steele`` -- compare a computed sigma=2 bound against U**(d-1)
* ``mc``     -- Monte Carlo (or exhaustive) estimate of the normalized LCS
* ``lcs``    -- exact LCS length of the given digit strings

Exit codes: 0 success/pass, 1 verification failure, 2 usage error,
3 resource guard.  Progress lines go to stderr; results go to stdout.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .certificate import (
    LUEKER_UPPER_2_2,
    Certificate,
    floor_str,
    from_triplet,
    read_certificate,
    simple_bound,
    steele_check,
    verify,
    write_certificate,
)
from .errors import CertificateError, ResourceGuardError
from .oracles import LcsInstance, lcs, mc_estimate, mc_exact
from .reference import LOWER_BOUNDS, TWO_SEQUENCE_COMPARISON
from .solver import DEFAULT_MEMORY_BUDGET, SolverConfig, feasible_triplet, required_bytes

THREADS_ENV = "CSBOUND_THREADS"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _parse_bytes(text: str) -> int:
    """Parse a byte count: plain integer or KiB/MiB/GiB suffix (e.g. "4GiB")."""
    units = {"kib": 1024, "mib": 1024**2, "gib": 1024**3}
    lowered = text.strip().lower()
    for suffix, factor in units.items():
        if lowered.endswith(suffix):
            return int(float(lowered[: -len(suffix)]) * factor)
    return int(lowered)


def _default_workers() -> int:
    value = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def _solve(args: argparse.Namespace, sigma: int, d: int, l: int):
    config = SolverConfig(
        sigma=sigma,
        d=d,
        l=l,
        max_iterations=args.max_iters,
        memory_budget=args.budget,
    )
    progress = None if args.quiet else sys.stderr
    return feasible_triplet(config, progress=progress)


def _print_bound(cert: Certificate, report) -> None:
    print(f"bound={floor_str(report.bound)} (full precision {report.bound:.17g})")
    print(f"r={cert.r:.17g} epsilon={cert.epsilon:.17g}")
    if report.passed:
        print(f"verified: max residual {report.max_violation:.6e} <= slack {report.slack:g}")
    else:
        print(
            f"VERIFICATION FAILED: residual {report.max_violation:.6e} "
            f"at coordinate {report.worst_coordinate}"
        )


def cmd_bound(args: argparse.Namespace) -> int:
    result = _solve(args, args.sigma, args.d, args.l)
    cert = from_triplet(
        result, provenance=f"csbound {__version__} iterations={result.iterations_run}"
    )
    if args.out:
        write_certificate(cert, args.out)
        print(f"certificate written to {args.out}")
    print(
        f"sigma={args.sigma} d={args.d} l={args.l} "
        f"states={cert.sigma ** (cert.l * cert.d)} iterations={result.iterations_run}"
    )
    report = verify(cert, slack=0.0)
    _print_bound(cert, report)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_verify(args: argparse.Namespace) -> int:
    cert = read_certificate(args.certificate)
    report = verify(cert, slack=args.slack)
    print(
        f"certificate: sigma={cert.sigma} d={cert.d} l={cert.l} "
        f"entries={cert.u.size}"
    )
    _print_bound(cert, report)
    if args.slack > 0:
        print(f"note: slack {args.slack:g} > 0, result is NON-CERTIFIED")
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_table(args: argparse.Namespace) -> int:
    rows = [row for row in LOWER_BOUNDS if row.sigma <= args.sigma_max]
    failures = 0
    if args.format == "csv":
        print("sigma,d,l,computed,reference,delta,status,baeza_et_al,dancik_deken")
    else:
        print(
            f"{'sigma':>5} {'d':>3} {'l':>3} {'computed':>10} {'reference':>10} "
            f"{'delta':>10}  {'prior/status'}"
        )
    for row in rows:
        needed = required_bytes(row.sigma, row.d, row.l)
        comparison = TWO_SEQUENCE_COMPARISON.get(row.sigma) if row.d == 2 else None
        baeza = "" if comparison is None or comparison[0] is None else f"{comparison[0]:.5f}"
        dancik = "" if comparison is None else f"{comparison[1]:.5f}"
        if needed > args.budget:
            status = f"skipped (needs {needed} bytes > budget {args.budget})"
            computed_text, delta_text = "", ""
        else:
            try:
                result = _solve(args, row.sigma, row.d, row.l)
                cert = from_triplet(result)
                report = verify(cert, slack=0.0)
                if not report.passed:
                    failures += 1
                    status = "VERIFY FAILED"
                    computed_text, delta_text = "", ""
                else:
                    computed_text = floor_str(report.bound)
                    delta_text = f"{report.bound - row.bound:+.6f}"
                    status = "ok"
            except ResourceGuardError as exc:
                status = f"skipped ({exc})"
                computed_text, delta_text = "", ""
            except Exception as exc:  # keep going; report the row
                failures += 1
                status = f"error: {exc}"
                computed_text, delta_text = "", ""
        if args.format == "csv":
            print(
                f"{row.sigma},{row.d},{row.l},{computed_text},{row.bound:.6f},"
                f"{delta_text},{status.replace(',', ';')},{baeza},{dancik}"
            )
        else:
            prior = f"baeza={baeza or '-'} dancik-deken={dancik or '-'} " if comparison else ""
            print(
                f"{row.sigma:>5} {row.d:>3} {row.l:>3} {computed_text:>10} "
                f"{row.bound:>10.6f} {delta_text:>10}  {prior}{status}"
            )
    return EXIT_VERIFY_FAILED if failures else EXIT_OK


def cmd_steele(args: argparse.Namespace) -> int:
    result = _solve(args, 2, args.d, args.l)
    cert = from_triplet(
        result, provenance=f"csbound {__version__} iterations={result.iterations_run}"
    )
    report = steele_check(cert)
    relation = ">" if report.strictly_greater else "<="
    print(
        f"bound={floor_str(report.bound)} "
        f"threshold=U^{args.d - 1}={report.threshold:.9f} (U={LUEKER_UPPER_2_2})"
    )
    print(f"{floor_str(report.bound)} {relation} {floor_str(report.threshold)}")
    if report.strictly_greater:
        print(f"speculation disproved for d={args.d}")
    else:
        print(f"not conclusive for d={args.d} at l={args.l}")
    if report.threshold < simple_bound(2):
        print(
            f"note: threshold {report.threshold:.9f} < 1/2, the uniform bound "
            f"already settles d={args.d}"
        )
    return EXIT_OK if report.strictly_greater else EXIT_VERIFY_FAILED


def cmd_mc(args: argparse.Namespace) -> int:
    if args.samples == "exhaustive":
        mean = mc_exact(args.sigma, args.d, args.n)
        print(f"mean={mean:.6f} (exact, all {args.sigma ** (args.d * args.n)} tuples)")
        return EXIT_OK
    try:
        samples = int(args.samples)
    except ValueError:
        raise ValueError(f"--samples must be an integer or 'exhaustive', got {args.samples!r}")
    estimate = mc_estimate(
        args.sigma, args.d, args.n, samples, seed=args.seed, workers=args.workers
    )
    print(
        f"mean={estimate.mean:.6f} stderr={estimate.stderr:.6f} "
        f"samples={estimate.samples} n={estimate.n} sigma={estimate.sigma} "
        f"d={estimate.d} seed={args.seed}"
    )
    return EXIT_OK


def cmd_lcs(args: argparse.Namespace) -> int:
    instance = LcsInstance.from_text(*args.strings)
    print(lcs(instance))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csbound",
        description="Certified lower bounds for the normalized expected LCS "
        "length of d random sigma-ary sequences.",
    )
    parser.add_argument("--version", action="version", version=f"csbound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_solver_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--max-iters", type=int, default=None,
                       help="iteration budget (default: adaptive, capped at 5000)")
        p.add_argument("--budget", type=_parse_bytes, default=DEFAULT_MEMORY_BUDGET,
                       help="memory budget in bytes (suffixes KiB/MiB/GiB allowed; "
                            "default 4GiB)")
        p.add_argument("--quiet", action="store_true",
                       help="suppress per-iteration progress on stderr")

    p_bound = sub.add_parser("bound", help="compute and verify one lower bound")
    p_bound.add_argument("--sigma", type=int, required=True)
    p_bound.add_argument("--d", type=int, required=True)
    p_bound.add_argument("--l", type=int, required=True)
    p_bound.add_argument("--out", default=None, help="write a cs-cert v1 file here")
    add_solver_flags(p_bound)
    p_bound.set_defaults(func=cmd_bound)

    p_verify = sub.add_parser("verify", help="re-check a certificate file")
    p_verify.add_argument("certificate")
    p_verify.add_argument("--slack", type=float, default=0.0,
                          help="tolerated residual (> 0 taints the result)")
    p_verify.set_defaults(func=cmd_verify)

    p_table = sub.add_parser("table", help="recompute the published bound table")
    p_table.add_argument("--sigma-max", type=int, default=10)
    p_table.add_argument("--format", choices=("human", "csv"), default="human")
    add_solver_flags(p_table)
    p_table.set_defaults(func=cmd_table)

    p_steele = sub.add_parser(
        "steele", help="compare a computed sigma=2 bound against U**(d-1)"
    )
    p_steele.add_argument("--d", type=int, required=True)
    p_steele.add_argument("--l", type=int, required=True)
    add_solver_flags(p_steele)
    p_steele.set_defaults(func=cmd_steele)

    p_mc = sub.add_parser("mc", help="estimate the normalized LCS length")
    p_mc.add_argument("--sigma", type=int, required=True)
    p_mc.add_argument("--d", type=int, required=True)
    p_mc.add_argument("--n", type=int, required=True)
    p_mc.add_argument("--samples", default="100",
                      help="sample count, or 'exhaustive' for exact enumeration")
    p_mc.add_argument("--seed", type=int, default=0)
    p_mc.add_argument("--workers", type=int, default=_default_workers(),
                      help=f"parallel samples (default ${THREADS_ENV} or 1)")
    p_mc.set_defaults(func=cmd_mc)

    p_lcs = sub.add_parser("lcs", help="exact LCS length of digit strings")
    p_lcs.add_argument("strings", nargs="+", metavar="STRING")
    p_lcs.set_defaults(func=cmd_lcs)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CertificateError as exc:
        print(f"certificate error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
