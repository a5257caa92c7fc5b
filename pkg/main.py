#!/usr/bin/env python3
"""
Main entry point for the entropy workbench
Solves the Einstein, soliton and quasi-Einstein ansatz on CP^1-bundles,
computes their nu-entropy and compares against the embedded table rows.

Usage:
    python main.py                                   # all 29 rows, table output
    python main.py --manifold cp1_over_cp1           # one bundle's rows
    python main.py --manifold cp1_over_cp1 --family krs --sample 41 --format csv
    python main.py --manifold cp1_over_cp1xcp2 --eps 1,-1 --sweep-m 2:5
    python main.py --manifold my_bundle.json --family qe --m 3

Exit codes: 0 pass, 1 validation error, 2 solver failure, 3 table mismatch
"""

import os
import sys
import argparse
import logging
from contextlib import nullcontext
from typing import List, Optional

from dotenv import load_dotenv

load_dotenv()

from ansatz_solvers import Family, solve
from bundle_config import catalog_names, parse_eps, resolve_bundle
from errors import EXIT_OK, ConfigError, WorkbenchError
from numerics import NumericsConfig
from reporting import (
    CSV_FIELDS,
    DEFAULT_RTOL_SIG,
    render_table,
    run_catalog,
    run_single,
    sample_profile,
    sweep_m,
    parse_m_range,
    write_csv,
    write_jsonl,
)

logger = logging.getLogger("entropy")

DEFAULT_WORKERS = 1


def _workers(flag: Optional[int]) -> int:
    """--workers, else ENTROPY_WORKERS, else 1"""
    raw = flag if flag is not None else os.getenv("ENTROPY_WORKERS") or DEFAULT_WORKERS
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"ENTROPY_WORKERS must be an integer, got {raw!r}")
    if workers < 1:
        raise ConfigError(f"workers must be at least 1, got {workers}")
    return workers


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="nu-entropy of Einstein, Kahler-Ricci soliton and quasi-Einstein metrics on CP^1-bundles",
    )
    parser.add_argument("--manifold", help=f"catalog name ({', '.join(catalog_names())}) or bundle JSON file")
    parser.add_argument("--family", choices=[f.value for f in Family])
    parser.add_argument("--m", type=float, help="quasi-Einstein parameter (m > 1)")
    parser.add_argument("--eps", help="comma list of +1/-1, one per base factor")
    parser.add_argument("--steps", type=int, help="Simpson 3/8 steps (default ENTROPY_STEPS or 1500)")
    parser.add_argument("--rtol", type=float, default=DEFAULT_RTOL_SIG, help="relative tolerance on the significand")
    parser.add_argument("--format", choices=["table", "csv", "jsonl"], default="table")
    parser.add_argument("--compare", action=argparse.BooleanOptionalAction, default=True,
                        help="compare against the embedded table rows")
    parser.add_argument("--sample", type=int, metavar="N", help="emit N profile samples instead of entropy rows")
    parser.add_argument("--sweep-m", metavar="A:B", help="quasi-Einstein sweep over m, with the soliton row appended")
    parser.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    parser.add_argument("--workers", type=int, help="threads for catalog rows (default ENTROPY_WORKERS or 1)")
    return parser


def _banner(title: str, enabled: bool):
    if enabled:
        print("\n" + "=" * 70)
        print(title)
        print("=" * 70)


def _emit(rows, fmt: str, stream, fields=CSV_FIELDS):
    if fmt == "csv":
        write_csv(rows, stream, fields)
    elif fmt == "jsonl":
        write_jsonl(rows, stream, fields)
    else:
        stream.write(render_table(rows, fields) + "\n")


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run, write output; returns the exit code"""
    args = build_parser().parse_args(argv)
    human = args.format == "table" and args.out is None

    cfg = NumericsConfig.from_env(steps=args.steps)
    workers = _workers(args.workers)

    if args.manifold is None:
        if args.family or args.sample or args.sweep_m:
            raise ConfigError("--family, --sample and --sweep-m need --manifold")
        names = list(catalog_names())
    elif args.manifold in catalog_names() and not (args.family or args.sample or args.sweep_m):
        names = [args.manifold]
    else:
        names = None

    try:
        out = open(args.out, "w", encoding="utf-8", newline="") if args.out else nullcontext(sys.stdout)
    except OSError as e:
        raise ConfigError(f"cannot write --out {args.out!r}: {e}")
    with out as stream:
        if names is not None:
            _banner(f"📊 TABLE REGRESSION: {', '.join(names)} (steps={cfg.steps})", human)
            report = run_catalog(names, cfg, rtol_sig=args.rtol, workers=workers)
            _emit(report.rows, args.format, stream)
            _banner(f"{'✅' if report.exit_code == EXIT_OK else '❌'} {report.passed}/{len(report.rows)} rows pass "
                    f"in {report.elapsed:.2f}s (exit {report.exit_code})", human)
            return report.exit_code

        bundle = resolve_bundle(args.manifold)
        eps = parse_eps(args.eps, bundle.r) if args.eps else None

        if args.sweep_m:
            m_list = parse_m_range(args.sweep_m)
            _banner(f"📈 m-SWEEP on {bundle.name}: m = {args.sweep_m}", human)
            sweep = sweep_m(bundle, eps, m_list, cfg, compare=args.compare)
            _emit(sweep.rows, args.format, stream)
            _banner(f"nu is {sweep.monotonic} in m", human)
            return sweep.exit_code

        if args.family is None:
            raise ConfigError("--family is required for a bundle file or with --sample")
        family = Family(args.family)

        if args.sample:
            if family in (Family.EINSTEIN_WW, Family.QUASI_EINSTEIN) and eps is None:
                eps = parse_eps(None, bundle.r)
            profile = solve(family, bundle, cfg, eps=eps, m=args.m)
            samples = sample_profile(profile, args.sample)
            _banner(f"🔍 {bundle.name} {profile.label}: {profile.constant_name} = {profile.constant_value:.12g}", human)
            _emit(samples, args.format, stream, fields=list(samples[0]))
            return EXIT_OK

        row = run_single(bundle, family, cfg, eps=eps, m=args.m, compare=args.compare, rtol_sig=args.rtol)
        _emit([row], args.format, stream)
        return row["exit_code"]


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=os.getenv("LOG_LEVEL", "INFO").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return run(argv)
    except WorkbenchError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
