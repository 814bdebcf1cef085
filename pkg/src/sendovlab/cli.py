"""Command line entry point: ``sendovlab <suite> [options]``."""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import ConfigError, SendovLabError
from .harness import (
    EXIT_NUMERICAL,
    EXIT_USAGE,
    GENERATORS,
    LAMBDA_POLICIES,
    SUITES,
    GeneratorSpec,
    run_suite,
)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sendovlab",
        description="Numerical and exact checks of a lower bound on the real part of a critical point.",
    )
    ap.add_argument("suite", choices=SUITES)
    ap.add_argument("--count", type=int, default=None, help="instances (default 1000; sweep uses its grid)")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--deg-min", type=int, default=3)
    ap.add_argument("--deg-max", type=int, default=15)
    grp = ap.add_mutually_exclusive_group()
    grp.add_argument("--a", type=float, default=None, help="fix a for every instance")
    grp.add_argument("--a-range", type=float, nargs=2, metavar=("LO", "HI"), default=None)
    lam = ap.add_mutually_exclusive_group()
    lam.add_argument("--lambda", dest="lam", type=float, default=None, help="fixed lambda")
    lam.add_argument("--lambda-policy", choices=LAMBDA_POLICIES, default=None)
    ap.add_argument("--generator", choices=GENERATORS, default="uniform-disk")
    ap.add_argument("--input", default=None, help="JSON instances for --generator explicit")
    ap.add_argument("--perturbation", type=float, default=0.02, help="near-extremal jitter")
    ap.add_argument("--out", default=None, help="JSON report path")
    ap.add_argument("--csv", action="store_true", help="also write a CSV view next to --out")
    ap.add_argument("--plot", action="append", default=[], metavar="SERIES",
                    help="plot-data series, e.g. 'G-curve a=0.8 r=0.3' (repeatable)")
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.a is not None:
        a_lo = a_hi = args.a
    elif args.a_range is not None:
        a_lo, a_hi = args.a_range
    else:
        a_lo, a_hi = 0.05, 0.95
    policy = args.lambda_policy or ("fixed" if args.lam is not None else "theorem-window")
    try:
        spec = GeneratorSpec(
            kind=args.generator,
            deg_min=args.deg_min,
            deg_max=args.deg_max,
            a_lo=a_lo,
            a_hi=a_hi,
            perturbation=args.perturbation,
            seed=args.seed,
            input_path=args.input,
        )
        report = run_suite(
            args.suite,
            spec,
            count=args.count,
            lam_policy=policy,
            lam=args.lam,
            out=args.out,
            csv_out=args.csv,
            tol=args.tol,
            workers=args.workers,
            plots=args.plot,
        )
    except ConfigError as exc:
        print(f"sendovlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SendovLabError as exc:
        print(f"sendovlab: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    c = report.counters
    print(f"{report.suite}: {report.config['count']} instances  "
          + "  ".join(f"{k}={v}" for k, v in c.items()))
    for k, v in report.summary.items():
        print(f"  {k}: {v}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
