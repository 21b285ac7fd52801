"""Command line front end: batch generation, validation, benchmarks, galleries.

Exit codes are 0 for success, 1 when any plan fails to generate or validate,
and 2 for usage or configuration problems.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import statistics
import sys
import time
from pathlib import Path

from .openings import validate
from .plan import (
    GenerationError,
    PlanParseError,
    from_json,
    gallery_svg,
    generate,
    to_json,
    to_svg,
)
from .sampling import ConfigError, GenConfig


def _seed_range(text: str) -> list[int]:
    """Parse "7" or "1..100" (inclusive) into a seed list."""
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            return [int(lo)]
        first, last = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed range {text!r}, expected N or A..B")
    if last < first:
        raise argparse.ArgumentTypeError(f"empty seed range {text!r}")
    return list(range(first, last + 1))


def _load_config(path: str | None) -> GenConfig:
    path = path or os.environ.get("PLANWRIGHT_CONFIG")
    if not path:
        return GenConfig()
    return GenConfig.load(path)


def _percentile(samples: list[float], q: float) -> float:
    idx = max(0, math.ceil(q * len(samples)) - 1)
    return sorted(samples)[idx]


def generate_cmd(args: argparse.Namespace, cfg: GenConfig) -> int:
    seeds = args.seeds
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    written = 0
    failures = 0
    for seed in seeds:
        try:
            plan = generate(seed, cfg)
        except GenerationError as exc:
            print(exc, file=sys.stderr)
            failures += 1
            continue
        stem = out / f"plan-{seed:06d}"
        if args.format in ("json", "both"):
            stem.with_suffix(".json").write_text(to_json(plan))
        if args.format in ("svg", "both"):
            stem.with_suffix(".svg").write_text(to_svg(plan))
        if args.trace:
            doc = {"seed": seed, "attempts": plan.attempts, "corridor": plan.trace}
            stem.with_suffix(".trace.json").write_text(json.dumps(doc, indent=2) + "\n")
        written += 1
    elapsed = time.perf_counter() - t0
    print(f"{written} plan(s) written to {out}, {failures} failure(s), {elapsed:.2f} s")
    return 1 if failures else 0


def validate_cmd(args: argparse.Namespace, cfg: GenConfig) -> int:
    if not args.files:
        print("no input files given", file=sys.stderr)
        return 0
    failures = 0
    for name in args.files:
        try:
            plan = from_json(Path(name).read_text())
        except (OSError, PlanParseError) as exc:
            print(f"{name}: FAIL ({exc})")
            failures += 1
            continue
        report = validate(plan, cfg)
        if report.ok:
            print(f"{name}: PASS")
        else:
            print(f"{name}: FAIL ({report.failures[0]})")
            failures += 1
    return 1 if failures else 0


def bench_cmd(args: argparse.Namespace, cfg: GenConfig) -> int:
    times_ms: list[float] = []
    failures = 0
    corridor = 0
    candidate_counts: list[int] = []
    for seed in range(args.n):
        t0 = time.perf_counter()
        try:
            plan = generate(seed, cfg)
        except GenerationError:
            failures += 1
            continue
        times_ms.append((time.perf_counter() - t0) * 1000.0)
        if plan.corridor is not None:
            corridor += 1
        candidate_counts.append(plan.corridor_candidates)
    report = {
        "plans": len(times_ms),
        "failures": failures,
        "median_ms": round(statistics.median(times_ms), 3) if times_ms else None,
        "p95_ms": round(_percentile(times_ms, 0.95), 3) if times_ms else None,
    }
    if args.trace:
        report["corridor_plans"] = corridor
        report["mean_candidates"] = (
            round(statistics.mean(candidate_counts), 2) if candidate_counts else None
        )
        report["max_candidates"] = max(candidate_counts, default=None)
    print(json.dumps(report))
    return 0


def gallery_cmd(args: argparse.Namespace, cfg: GenConfig) -> int:
    plans = []
    for seed in args.seeds:
        try:
            plans.append(generate(seed, cfg))
        except GenerationError as exc:
            print(exc, file=sys.stderr)
    if not plans:
        print("no plans to draw", file=sys.stderr)
        return 1
    out = Path(args.out)
    out.write_text(gallery_svg(plans, columns=args.columns))
    print(f"{len(plans)} plan(s) on {out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="planwright")
    parser.add_argument("--config", help="config JSON path (or set PLANWRIGHT_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write plan files for a seed range")
    pick = gen.add_mutually_exclusive_group(required=True)
    pick.add_argument("--seed", type=int, help="single seed")
    pick.add_argument("--seeds", type=_seed_range, help="inclusive range A..B")
    gen.add_argument("--out", default=".", help="output directory")
    gen.add_argument("--format", choices=("json", "svg", "both"), default="both")
    gen.add_argument("--trace", action="store_true", help="also write corridor traces")
    gen.set_defaults(func=generate_cmd)

    val = sub.add_parser("validate", help="re-check invariants of plan JSON files")
    val.add_argument("files", nargs="*", help="plan JSON files")
    val.set_defaults(func=validate_cmd)

    ben = sub.add_parser("bench", help="time plan generation")
    ben.add_argument("-n", type=int, default=100, help="number of seeds, from 0")
    ben.add_argument("--trace", action="store_true", help="add corridor candidate stats")
    ben.set_defaults(func=bench_cmd)

    gal = sub.add_parser("gallery", help="draw a contact sheet of many seeds")
    gal.add_argument("--seeds", type=_seed_range, default=list(range(1, 16)))
    gal.add_argument("--columns", type=int, default=5)
    gal.add_argument("--out", default="gallery.svg")
    gal.set_defaults(func=gallery_cmd)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if getattr(args, "seed", None) is not None:
        args.seeds = [args.seed]
    try:
        cfg = _load_config(args.config)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return args.func(args, cfg)


if __name__ == "__main__":
    raise SystemExit(main())
