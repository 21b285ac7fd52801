"""Render a contact sheet of plans and print what landed in each cell.

Thin wrapper over the library's gallery renderer that also tabulates the
room mix per seed, so a change to sampling or layout can be eyeballed in
one artifact.  Seeds that fail their attempt budget are skipped and listed.

    python3 scripts/make_gallery.py --seeds 1..24 --out gallery.svg
"""

from __future__ import annotations

import argparse
from collections import Counter
from pathlib import Path

from planwright.plan import GenerationError, gallery_svg, generate


def seed_range(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(spec)]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", default="1..15", help="N or LO..HI (default 1..15)")
    parser.add_argument("--columns", type=int, default=5)
    parser.add_argument("--out", type=Path, default=Path("gallery.svg"))
    args = parser.parse_args()

    plans, skipped = [], []
    for seed in seed_range(args.seeds):
        try:
            plans.append(generate(seed))
        except GenerationError:
            skipped.append(seed)

    for plan in plans:
        mix = Counter(room.kind.value for room in plan.rooms)
        rooms = ", ".join(f"{kind} x{n}" if n > 1 else kind for kind, n in sorted(mix.items()))
        corridor = "corridor" if plan.corridor is not None else "open"
        print(f"seed {plan.seed:>6}  {plan.footprint.width:.1f}x{plan.footprint.height:.1f} m  {corridor:<8}  {rooms}")
    if skipped:
        print(f"skipped (no plan within budget): {skipped}")
    if not plans:
        raise SystemExit("nothing to draw")

    args.out.write_text(gallery_svg(plans, columns=args.columns))
    print(f"wrote {args.out} ({len(plans)} plans)")


if __name__ == "__main__":
    main()
