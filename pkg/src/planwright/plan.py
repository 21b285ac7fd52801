"""Floor-plan assembly: the generate pipeline, JSON contract and SVG render.

``generate`` runs sampling, hierarchy, placement, corridor and openings under
one seeded stream.  Recoverable stage failures (an unroutable corridor, a
room squeezed too thin, a door that cannot fit) restart the whole house on
the next substream, bounded by the config's attempt budget, so the result is
a pure function of (seed, config).

Serialized coordinates all sit on the millimetre grid, so JSON round-trips
reproduce the in-memory plan exactly; room target areas live on the
micro-square-metre grid (a product of two millimetre lengths) and survive
round-tripping for the same reason.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .corridor import CorridorError, plan_corridor
from .geometry import Point, Rect, RectilinearPolygon, Region, _m, _mm, aspect_ratio, snap
from .hierarchy import OUTSIDE_ID, build_hierarchy
from .openings import (
    ENTRY_DOOR,
    WINDOW,
    ConnectionGraph,
    Opening,
    OpeningError,
    ValidationReport,
    build_connection_graph,
    place_doors,
    place_windows,
    validate,
)
from .sampling import (
    GenConfig,
    RandomStream,
    RoomKind,
    SamplingError,
    assign_functions,
    derive_footprint,
    sample_areas,
    sample_counts,
)
from .treemap import LayoutError, PlacedRoom, layout_rooms

SCHEMA_VERSION = 1


class GenerationError(RuntimeError):
    """The attempt budget ran out without a valid plan."""


class PlanParseError(ValueError):
    """A plan document that does not match the schema; message names the path."""


@dataclass(frozen=True)
class Room:
    id: int
    kind: RoomKind
    polygon: RectilinearPolygon
    target_area: float

    @property
    def area(self) -> float:
        return self.polygon.area


@dataclass(frozen=True)
class FloorPlan:
    seed: int
    config_fingerprint: str
    footprint: Rect
    rooms: tuple[Room, ...]
    corridor: RectilinearPolygon | None
    openings: tuple[Opening, ...]
    graph: ConnectionGraph
    attempts: int
    corridor_candidates: int
    trace: dict | None = field(default=None, compare=False, repr=False)

    @property
    def living_id(self) -> int:
        return next(r.id for r in self.rooms if r.kind is RoomKind.LIVING_ROOM)

    def room(self, room_id: int) -> Room:
        return next(r for r in self.rooms if r.id == room_id)


def generate(seed: int, cfg: GenConfig | None = None) -> FloorPlan:
    """Deterministically generate one house for (seed, config)."""
    cfg = cfg if cfg is not None else GenConfig()
    root = RandomStream(seed)
    last: Exception | None = None
    for attempt in range(cfg.max_attempts):
        rng = root.substream(attempt)
        try:
            return _attempt(seed, rng, cfg, attempt + 1)
        except (SamplingError, LayoutError, CorridorError, OpeningError) as exc:
            last = exc
    raise GenerationError(
        f"seed {seed}: no valid plan in {cfg.max_attempts} attempts (last: {last})"
    ) from last


def _attempt(seed: int, rng: RandomStream, cfg: GenConfig, attempt: int) -> FloorPlan:
    bedrooms, n_rooms = sample_counts(rng, cfg.joint_table)
    program = assign_functions(bedrooms, n_rooms, cfg.priority)
    program = sample_areas(program, rng, cfg)
    footprint, program = derive_footprint(program, rng, cfg)
    via_dining = rng.random() < cfg.kitchen_via_dining_prob
    tree = build_hierarchy(program, kitchen_via_dining=via_dining)

    placed = [
        PlacedRoom(r.id, r.kind, r.rect.snapped()) for r in layout_rooms(footprint, tree)
    ]
    min_mm = _mm(cfg.min_room_width)
    for room in placed:
        rect = room.rect
        if min(_mm(rect.width), _mm(rect.height)) < min_mm:
            raise LayoutError(f"room {room.id} narrower than {cfg.min_room_width} m")
        if aspect_ratio(rect) > cfg.max_room_aspect:
            raise LayoutError(f"room {room.id} too elongated")

    parent_of: dict[int, int] = {}
    for node in tree.walk():
        for child in node.children:
            if node.room_id != OUTSIDE_ID:
                parent_of[child.room_id] = node.room_id
    living_id = tree.children[0].room_id

    corridor = plan_corridor(footprint, placed, parent_of, living_id, cfg)
    for t in corridor.reparented:
        parent_of[t] = living_id

    graph = build_connection_graph(corridor.rooms, parent_of, living_id, rng, cfg)
    doors, ledger = place_doors(corridor.rooms, graph, footprint, rng, cfg)
    windows = place_windows(corridor.rooms, footprint, ledger, rng, cfg)

    targets = {e.id: round(e.target_area, 6) for e in program.entries}
    rooms = tuple(
        Room(rid, kind, poly, targets[rid]) for rid, kind, poly in corridor.rooms
    )
    plan = FloorPlan(
        seed=seed,
        config_fingerprint=cfg.fingerprint(),
        footprint=footprint,
        rooms=rooms,
        corridor=corridor.corridor,
        openings=tuple(doors + windows),
        graph=graph,
        attempts=attempt,
        corridor_candidates=len(corridor.trace.get("candidates", [])),
        trace=corridor.trace,
    )
    report = validate(plan, cfg)
    if not report.ok:
        raise OpeningError(f"self-check failed: {report.failures[0]}")
    return plan


def _poly_json(poly: RectilinearPolygon) -> list[list[float]]:
    return [[p.x, p.y] for p in poly.vertices]


def _poly_from_json(doc, path: str) -> RectilinearPolygon:
    if not isinstance(doc, list) or len(doc) < 4:
        raise PlanParseError(f"{path}: expected a vertex list")
    try:
        return RectilinearPolygon(tuple(Point(x, y) for x, y in doc))
    except (TypeError, ValueError) as exc:
        raise PlanParseError(f"{path}: {exc}") from exc


def to_json(plan: FloorPlan) -> str:
    """Serialize with stable field order; every number sits on its grid."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "seed": plan.seed,
        "config_fingerprint": plan.config_fingerprint,
        "attempts": plan.attempts,
        "corridor_candidates": plan.corridor_candidates,
        "footprint": {
            "x": plan.footprint.x,
            "y": plan.footprint.y,
            "x1": snap(plan.footprint.x1),
            "y1": snap(plan.footprint.y1),
        },
        "rooms": [
            {
                "id": room.id,
                "kind": room.kind.value,
                "target_area": room.target_area,
                "polygon": _poly_json(room.polygon),
            }
            for room in plan.rooms
        ],
        "corridor": _poly_json(plan.corridor) if plan.corridor is not None else None,
        "openings": [o.to_json() for o in plan.openings],
        "connection_graph": plan.graph.to_json(),
    }
    return json.dumps(doc, indent=2) + "\n"


_TOP_FIELDS = {
    "schema_version",
    "seed",
    "config_fingerprint",
    "attempts",
    "corridor_candidates",
    "footprint",
    "rooms",
    "corridor",
    "openings",
    "connection_graph",
}
_ROOM_FIELDS = {"id", "kind", "target_area", "polygon"}
_OPENING_FIELDS = {"kind", "wall", "offset", "width", "rooms"}


def from_json(text: str) -> FloorPlan:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlanParseError(f"$: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise PlanParseError("$: expected an object")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise PlanParseError(f"$.{sorted(unknown)[0]}: unknown field")
    missing = _TOP_FIELDS - set(doc)
    if missing:
        raise PlanParseError(f"$.{sorted(missing)[0]}: missing field")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise PlanParseError(f"$.schema_version: unsupported {doc['schema_version']!r}")

    fp = doc["footprint"]
    if not isinstance(fp, dict) or set(fp) != {"x", "y", "x1", "y1"}:
        raise PlanParseError("$.footprint: expected x, y, x1, y1")
    footprint = Rect(fp["x"], fp["y"], fp["x1"] - fp["x"], fp["y1"] - fp["y"])

    rooms = []
    for i, rdoc in enumerate(doc["rooms"]):
        if not isinstance(rdoc, dict) or set(rdoc) != _ROOM_FIELDS:
            raise PlanParseError(f"$.rooms[{i}]: expected fields {sorted(_ROOM_FIELDS)}")
        try:
            kind = RoomKind(rdoc["kind"])
        except ValueError as exc:
            raise PlanParseError(f"$.rooms[{i}].kind: {rdoc['kind']!r}") from exc
        rooms.append(
            Room(
                id=rdoc["id"],
                kind=kind,
                polygon=_poly_from_json(rdoc["polygon"], f"$.rooms[{i}].polygon"),
                target_area=rdoc["target_area"],
            )
        )

    corridor = None
    if doc["corridor"] is not None:
        corridor = _poly_from_json(doc["corridor"], "$.corridor")

    openings = []
    for i, odoc in enumerate(doc["openings"]):
        if not isinstance(odoc, dict) or set(odoc) != _OPENING_FIELDS:
            raise PlanParseError(f"$.openings[{i}]: expected fields {sorted(_OPENING_FIELDS)}")
        try:
            openings.append(Opening.from_json(odoc))
        except (TypeError, ValueError, KeyError) as exc:
            raise PlanParseError(f"$.openings[{i}]: {exc}") from exc

    gdoc = doc["connection_graph"]
    if not isinstance(gdoc, dict) or set(gdoc) != {"nodes", "edges"}:
        raise PlanParseError("$.connection_graph: expected nodes and edges")
    graph = ConnectionGraph.from_json(gdoc)

    return FloorPlan(
        seed=doc["seed"],
        config_fingerprint=doc["config_fingerprint"],
        footprint=footprint,
        rooms=tuple(rooms),
        corridor=corridor,
        openings=tuple(openings),
        graph=graph,
        attempts=doc["attempts"],
        corridor_candidates=doc["corridor_candidates"],
    )


@dataclass(frozen=True)
class SvgStyle:
    scale: float = 60.0
    margin: float = 24.0
    background: str = "#faf9f6"
    wall: str = "#2b2b2b"
    wall_width: float = 2.5
    outline_width: float = 4.0
    door_color: str = "#8a6d3b"
    entry_color: str = "#b3541e"
    window_color: str = "#3a6ea5"
    label_color: str = "#3c3c3c"
    font_size: float = 11.0
    labels: bool = True
    fills: tuple[tuple[str, str], ...] = (
        ("social", "#f7e9c6"),
        ("service", "#dcebe4"),
        ("private", "#e6e1f2"),
    )


_KIND_LABELS = {
    RoomKind.LIVING_ROOM: "Living room",
    RoomKind.KITCHEN: "Kitchen",
    RoomKind.DINING_ROOM: "Dining room",
    RoomKind.MASTER_BEDROOM: "Master bedroom",
    RoomKind.BEDROOM: "Bedroom",
    RoomKind.BATHROOM: "Bathroom",
    RoomKind.LAUNDRY: "Laundry",
    RoomKind.PANTRY: "Pantry",
    RoomKind.STORAGE: "Storage",
}


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _label_point(poly: RectilinearPolygon) -> Point:
    """A point inside the polygon: the centre of its largest axis cell."""
    region = Region.from_polygon(poly)
    best = None
    for i, j in sorted(region.cells):
        w = region.xs[i + 1] - region.xs[i]
        h = region.ys[j + 1] - region.ys[j]
        key = (w * h, -region.xs[i], -region.ys[j])
        if best is None or key > best[0]:
            best = (key, (region.xs[i] + w / 2, region.ys[j] + h / 2))
    assert best is not None
    return Point(_m(round(best[1][0])), _m(round(best[1][1])))


def _render_plan(plan: FloorPlan, style: SvgStyle, ox: float, oy: float) -> list[str]:
    """SVG fragments for one plan with its footprint origin at (ox, oy) px."""
    s = style.scale
    fp = plan.footprint

    def px(p: Point | tuple[float, float]) -> tuple[float, float]:
        x, y = (p.x, p.y) if isinstance(p, Point) else p
        return (ox + (x - fp.x) * s, oy + (fp.y + fp.height - y) * s)

    def path_of(poly: RectilinearPolygon) -> str:
        parts = []
        for i, p in enumerate(poly.vertices):
            x, y = px(p)
            parts.append(f"{'M' if i == 0 else 'L'} {_fmt(x)} {_fmt(y)}")
        return " ".join(parts) + " Z"

    fills = dict(style.fills)
    out: list[str] = []
    for room in plan.rooms:
        fill = fills.get(room.kind.category, "#eeeeee")
        out.append(f'<path d="{path_of(room.polygon)}" fill="{fill}" stroke="none"/>')
    if plan.corridor is not None:
        out.append(
            f'<path d="{path_of(plan.corridor)}" fill="#f3dfae" stroke="none" opacity="0.85"/>'
        )
    for room in plan.rooms:
        out.append(
            f'<path d="{path_of(room.polygon)}" fill="none" stroke="{style.wall}" '
            f'stroke-width="{_fmt(style.wall_width)}" stroke-linejoin="miter"/>'
        )
    x0, y0 = px((fp.x, fp.y + fp.height))
    out.append(
        f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(fp.width * s)}" '
        f'height="{_fmt(fp.height * s)}" fill="none" stroke="{style.wall}" '
        f'stroke-width="{_fmt(style.outline_width)}"/>'
    )

    for opening in plan.openings:
        wall = opening.wall
        lo_mm, hi_mm = opening.interval()
        if wall.horizontal:
            a = Point(_m(lo_mm), wall.a.y)
            b = Point(_m(hi_mm), wall.a.y)
        else:
            a = Point(wall.a.x, _m(lo_mm))
            b = Point(wall.a.x, _m(hi_mm))
        (ax, ay), (bx, by) = px(a), px(b)
        gap = max(style.wall_width, style.outline_width) + 2
        out.append(
            f'<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" y2="{_fmt(by)}" '
            f'stroke="{style.background}" stroke-width="{_fmt(gap)}"/>'
        )
        if opening.kind == WINDOW:
            dx, dy = (0.0, 2.0) if wall.horizontal else (2.0, 0.0)
            for sign in (-1, 1):
                out.append(
                    f'<line x1="{_fmt(ax + sign * dx)}" y1="{_fmt(ay + sign * dy)}" '
                    f'x2="{_fmt(bx + sign * dx)}" y2="{_fmt(by + sign * dy)}" '
                    f'stroke="{style.window_color}" stroke-width="1.5"/>'
                )
            continue
        color = style.entry_color if opening.kind == ENTRY_DOOR else style.door_color
        r = opening.width * s
        if wall.horizontal:
            leaf = (ax, ay - r)
            arc_end = (bx, by)
        else:
            leaf = (ax + r, ay)
            arc_end = (bx, by)
        out.append(
            f'<path d="M {_fmt(ax)} {_fmt(ay)} L {_fmt(leaf[0])} {_fmt(leaf[1])} '
            f'A {_fmt(r)} {_fmt(r)} 0 0 1 {_fmt(arc_end[0])} {_fmt(arc_end[1])}" '
            f'fill="none" stroke="{color}" stroke-width="1.5"/>'
        )

    if style.labels:
        for room in plan.rooms:
            cx, cy = px(_label_point(room.polygon))
            name = _KIND_LABELS.get(room.kind, room.kind.value)
            out.append(
                f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" text-anchor="middle" '
                f'font-family="Helvetica, Arial, sans-serif" font-size="{_fmt(style.font_size)}" '
                f'fill="{style.label_color}">{name}'
                f'<tspan x="{_fmt(cx)}" dy="{_fmt(style.font_size + 1)}">'
                f"{room.area:.1f} m²</tspan></text>"
            )
    return out


def to_svg(plan: FloorPlan, style: SvgStyle | None = None) -> str:
    """Deterministic standalone SVG drawing of one plan."""
    style = style if style is not None else SvgStyle()
    width = plan.footprint.width * style.scale + 2 * style.margin
    height = plan.footprint.height * style.scale + 2 * style.margin
    body = _render_plan(plan, style, style.margin, style.margin)
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
    )
    bg = f'<rect width="{_fmt(width)}" height="{_fmt(height)}" fill="{style.background}"/>'
    return "\n".join([head, bg, *body, "</svg>"]) + "\n"


def gallery_svg(plans: list[FloorPlan], columns: int = 5, cell: float = 320.0) -> str:
    """Contact sheet of several plans, one labelled cell each."""
    if not plans:
        raise ValueError("gallery of zero plans")
    if columns < 1:
        raise ValueError("gallery needs at least one column")
    style = SvgStyle(labels=False)
    caption = 18.0
    pad = 16.0
    rows = (len(plans) + columns - 1) // columns
    width = columns * cell
    height = rows * (cell + caption)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect width="{_fmt(width)}" height="{_fmt(height)}" fill="{style.background}"/>',
    ]
    for i, plan in enumerate(plans):
        col, row = i % columns, i // columns
        avail = cell - 2 * pad
        scale = min(avail / plan.footprint.width, avail / plan.footprint.height)
        pw = plan.footprint.width * scale
        ph = plan.footprint.height * scale
        ox = col * cell + (cell - pw) / 2
        oy = row * (cell + caption) + (cell - ph) / 2
        cell_style = SvgStyle(scale=scale, labels=False, wall_width=1.5, outline_width=2.5)
        parts.extend(_render_plan(plan, cell_style, ox, oy))
        cx = col * cell + cell / 2
        cy = row * (cell + caption) + cell + caption - 6
        parts.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" text-anchor="middle" '
            f'font-family="Helvetica, Arial, sans-serif" font-size="12" '
            f'fill="{style.label_color}">seed {plan.seed}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
