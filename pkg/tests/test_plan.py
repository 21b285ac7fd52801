"""End-to-end generation, the JSON document format, and SVG rendering.

Seed 1's plan is frozen under tests/data/ as the golden document: any change
to sampling order, placement, serialization or rounding shows up as a byte
diff there.  The parser tests feed corrupted documents and pin the error
paths, since the CLI surfaces those messages verbatim.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from planwright.openings import validate
from planwright.plan import (
    SCHEMA_VERSION,
    FloorPlan,
    GenerationError,
    PlanParseError,
    SvgStyle,
    from_json,
    gallery_svg,
    generate,
    to_json,
    to_svg,
)
from planwright.sampling import GenConfig

DATA = Path(__file__).parent / "data"

# Scanned once: seed 2 needs no corridor, seed 3 does, seed 5 exhausts its
# attempt budget under the default config.
PLAIN_SEED = 2
CORRIDOR_SEED = 3
HOPELESS_SEED = 5


@pytest.fixture(scope="module")
def plain_plan() -> FloorPlan:
    return generate(PLAIN_SEED)


@pytest.fixture(scope="module")
def corridor_plan() -> FloorPlan:
    return generate(CORRIDOR_SEED)


# --------------------------------------------------------------- generation


def test_generate_deterministic(plain_plan):
    again = generate(PLAIN_SEED)
    assert again == plain_plan
    assert to_json(again) == to_json(plain_plan)


def test_generate_matches_golden_document():
    golden = (DATA / "plan-seed1.json").read_text()
    assert to_json(generate(1)) == golden


def test_generated_plans_self_validate(plain_plan, corridor_plan):
    assert validate(plain_plan, GenConfig()).ok
    assert validate(corridor_plan, GenConfig()).ok
    assert plain_plan.corridor is None
    assert corridor_plan.corridor is not None
    assert corridor_plan.corridor_candidates > 0


def test_generate_counts_attempts(plain_plan):
    assert plain_plan.attempts >= 1
    assert plain_plan.seed == PLAIN_SEED
    assert plain_plan.config_fingerprint == GenConfig().fingerprint()


def test_generate_raises_after_budget():
    with pytest.raises(GenerationError) as err:
        generate(HOPELESS_SEED)
    assert f"seed {HOPELESS_SEED}" in str(err.value)
    assert str(GenConfig().max_attempts) in str(err.value)


def test_impossible_config_always_exhausts():
    # A 4 m minimum room width is unsatisfiable for 3-11 m^2 rooms.
    cfg = GenConfig(min_room_width=4.0)
    with pytest.raises(GenerationError):
        generate(0, cfg)


def test_generate_is_hash_seed_independent(plain_plan):
    script = (
        "from planwright.plan import generate, to_json;"
        f"import hashlib; print(hashlib.sha256(to_json(generate({PLAIN_SEED}))"
        ".encode()).hexdigest())"
    )
    digests = set()
    for hash_seed in ("0", "4242"):
        out = subprocess.run(
            [sys.executable, "-c", script],
            capture_output=True,
            text=True,
            env={"PYTHONHASHSEED": hash_seed, "PATH": "/usr/bin:/bin"},
            check=True,
        )
        digests.add(out.stdout.strip())
    assert len(digests) == 1
    import hashlib

    assert digests == {hashlib.sha256(to_json(plain_plan).encode()).hexdigest()}


# --------------------------------------------------------------------- JSON


def test_json_round_trip(plain_plan, corridor_plan):
    for plan in (plain_plan, corridor_plan):
        text = to_json(plan)
        back = from_json(text)
        assert back == plan
        assert to_json(back) == text


def test_json_numbers_sit_on_the_grid(corridor_plan):
    doc = json.loads(to_json(corridor_plan))

    def coords(node):
        if isinstance(node, list):
            for item in node:
                yield from coords(item)
        elif isinstance(node, (int, float)):
            yield node

    for room in doc["rooms"]:
        for v in coords(room["polygon"]):
            assert round(v * 1000) == pytest.approx(v * 1000, abs=1e-6)
        assert room["target_area"] == round(room["target_area"], 6)
    for opening in doc["openings"]:
        for v in coords(opening["wall"]):
            assert round(v * 1000) == pytest.approx(v * 1000, abs=1e-6)
        assert round(opening["offset"] * 1000) == pytest.approx(
            opening["offset"] * 1000, abs=1e-6
        )
    fp = doc["footprint"]
    for v in (fp["x"], fp["y"], fp["x1"], fp["y1"]):
        assert round(v * 1000) == pytest.approx(v * 1000, abs=1e-6)


def corrupted(plan: FloorPlan, mutate) -> str:
    doc = json.loads(to_json(plan))
    mutate(doc)
    return json.dumps(doc)


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.update(bogus=1), "$.bogus"),
        (lambda d: d.pop("rooms"), "$.rooms"),
        (lambda d: d.update(schema_version=99), "$.schema_version"),
        (lambda d: d["rooms"][0].update(kind="ballroom"), "$.rooms[0].kind"),
        (lambda d: d["rooms"][0].update(polygon=[[0, 0], [1, 0]]), "$.rooms[0].polygon"),
        (lambda d: d["rooms"][0].pop("target_area"), "$.rooms[0]"),
        (lambda d: d["footprint"].pop("x1"), "$.footprint"),
        (lambda d: d["openings"][0].pop("offset"), "$.openings[0]"),
        (lambda d: d.update(connection_graph={"nodes": []}), "$.connection_graph"),
    ],
)
def test_parse_errors_name_their_path(plain_plan, mutate, path):
    text = corrupted(plain_plan, mutate)
    with pytest.raises(PlanParseError) as err:
        from_json(text)
    assert str(err.value).startswith(path)


def test_parse_error_on_unparseable_text():
    with pytest.raises(PlanParseError) as err:
        from_json("{not json")
    assert str(err.value).startswith("$:")
    with pytest.raises(PlanParseError):
        from_json("[1, 2, 3]")


def test_schema_version_is_one():
    assert SCHEMA_VERSION == 1


# ---------------------------------------------------------------------- SVG


def test_svg_structure(corridor_plan):
    svg = to_svg(corridor_plan)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert 'xmlns="http://www.w3.org/2000/svg"' in svg
    # One fill and one wall outline per room.
    assert svg.count("<path") >= 2 * len(corridor_plan.rooms)
    for room in corridor_plan.rooms:
        if room.kind.value == "living_room":
            assert "Living room" in svg
    assert "entry" not in svg  # colors carry the meaning, not class names


def test_svg_deterministic(corridor_plan):
    assert to_svg(corridor_plan) == to_svg(corridor_plan)


def test_svg_style_knobs(plain_plan):
    bare = to_svg(plain_plan, SvgStyle(labels=False, background="#ffffff"))
    assert "<text" not in bare
    assert "#ffffff" in bare


def test_gallery_combines_plans(plain_plan, corridor_plan):
    svg = gallery_svg([plain_plan, corridor_plan], columns=2)
    assert svg.startswith("<svg")
    assert svg == gallery_svg([plain_plan, corridor_plan], columns=2)
    single = gallery_svg([plain_plan], columns=2)
    assert len(svg) > len(single)


def test_gallery_rejects_nothing():
    with pytest.raises(ValueError):
        gallery_svg([])
