"""Sweep one generation knob and chart the give-up rate.

Generation rejects a sampled layout whenever a constraint fails and retries
up to max_attempts times, so tightening a knob does not break anything
outright; it just burns more attempts until seeds start failing.  This
script walks a knob through a value list and prints the failure rate and
attempt cost at each stop, which is how the default values were chosen.

    python3 scripts/failure_sweep.py --knob min_room_width 1.8 2.2 2.6 3.0
"""

from __future__ import annotations

import argparse
import dataclasses
import statistics

from planwright.plan import GenerationError, generate
from planwright.sampling import GenConfig

SWEEPABLE = ("corridor_width", "door_width", "min_room_width", "max_room_aspect")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--knob", choices=SWEEPABLE, default="min_room_width")
    parser.add_argument("values", type=float, nargs="*", default=[1.8, 2.2, 2.6, 3.0])
    parser.add_argument("-n", type=int, default=300, help="seeds per value (default 300)")
    args = parser.parse_args()

    print(f"{args.knob:>16}  {'ok':>5}  {'failed':>6}  {'rate':>6}  mean attempts")
    for value in args.values:
        cfg = dataclasses.replace(GenConfig(), **{args.knob: value})
        ok, failed, attempts = 0, 0, []
        for seed in range(args.n):
            try:
                plan = generate(seed, cfg)
            except GenerationError:
                failed += 1
                continue
            ok += 1
            attempts.append(plan.attempts)
        mean_attempts = statistics.mean(attempts) if attempts else float("nan")
        print(
            f"{value:>16.2f}  {ok:>5}  {failed:>6}  {failed / args.n:>6.1%}  {mean_attempts:.2f}"
        )


if __name__ == "__main__":
    main()
