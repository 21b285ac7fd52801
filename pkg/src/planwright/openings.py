"""Connection graph, door and window placement, and plan validation.

The hierarchy tree (with corridor-served rooms re-hung off the living room)
dictates the mandatory door set; configured optional pairs are added by coin
flip when the rooms actually share enough wall.  Every edge then gets one
door at a uniformly random feasible position, the house gets an entry door
on the living room's longest exterior wall, and eligible exterior rooms get
a window.  ``validate`` re-checks the finished plan from scratch; it is what
the CLI's validate subcommand and the batch audits run.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import (
    Point,
    Rect,
    RectilinearPolygon,
    Region,
    Segment,
    _m,
    _mm,
    shared_segments,
)
from .hierarchy import OUTSIDE_ID
from .sampling import BEDROOM_KINDS, GenConfig, RandomStream, RoomKind

DOOR = "door"
ENTRY_DOOR = "entry_door"
WINDOW = "window"


class OpeningError(RuntimeError):
    """Doors cannot be realized for this placement; resample."""


@dataclass(frozen=True)
class Opening:
    kind: str
    wall: Segment
    offset: float
    width: float
    rooms: tuple[int, int]

    def interval(self) -> tuple[int, int]:
        """Occupied span along the wall's line, in mm."""
        lo = _mm(self.wall.span[0]) + _mm(self.offset)
        return (lo, lo + _mm(self.width))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "wall": [[self.wall.a.x, self.wall.a.y], [self.wall.b.x, self.wall.b.y]],
            "offset": self.offset,
            "width": self.width,
            "rooms": list(self.rooms),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Opening":
        (ax, ay), (bx, by) = doc["wall"]
        return cls(
            kind=doc["kind"],
            wall=Segment(Point(ax, ay), Point(bx, by)),
            offset=doc["offset"],
            width=doc["width"],
            rooms=(doc["rooms"][0], doc["rooms"][1]),
        )


@dataclass(frozen=True)
class ConnectionGraph:
    nodes: frozenset[int]
    edges: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {"nodes": sorted(self.nodes), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, doc: dict) -> "ConnectionGraph":
        return cls(
            nodes=frozenset(doc["nodes"]),
            edges=tuple((a, b) for a, b in doc["edges"]),
        )


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


def _max_shared_mm(a: RectilinearPolygon, b: RectilinearPolygon) -> int:
    try:
        segs = shared_segments(a, b)
    except ValueError:
        return 0
    return max((_mm(s.length) for s in segs), default=0)


def _exterior_walls(poly: RectilinearPolygon, footprint: Rect) -> list[Segment]:
    """Polygon edges lying on the footprint boundary."""
    fx0, fx1 = _mm(footprint.x), _mm(footprint.x1)
    fy0, fy1 = _mm(footprint.y), _mm(footprint.y1)
    walls = []
    for edge in poly.edges():
        if edge.horizontal and _mm(edge.a.y) in (fy0, fy1):
            walls.append(edge)
        elif not edge.horizontal and _mm(edge.a.x) in (fx0, fx1):
            walls.append(edge)
    return walls


def _prohibited(kind_a: RoomKind, kind_b: RoomKind) -> bool:
    bed_a, bed_b = kind_a in BEDROOM_KINDS, kind_b in BEDROOM_KINDS
    if bed_a and bed_b:
        return True
    if (bed_a and kind_b is RoomKind.KITCHEN) or (bed_b and kind_a is RoomKind.KITCHEN):
        return True
    return False


def build_connection_graph(
    rooms: tuple[tuple[int, RoomKind, RectilinearPolygon], ...],
    parent_of: dict[int, int],
    living_id: int,
    rng: RandomStream,
    cfg: GenConfig,
) -> ConnectionGraph:
    """Mandatory tree edges plus random adjacency-feasible optional edges.

    Raises when a mandatory edge has no door-width shared wall left; the
    corridor stage is supposed to have guaranteed them all.
    """
    polys = {rid: poly for rid, _, poly in rooms}
    kinds = {rid: kind for rid, kind, _ in rooms}
    door_mm = _mm(cfg.door_width)

    edges: list[tuple[int, int]] = [(OUTSIDE_ID, living_id)]
    for child, parent in sorted(parent_of.items()):
        if _max_shared_mm(polys[child], polys[parent]) < door_mm:
            raise OpeningError(f"rooms {child} and {parent} share no door-width wall")
        edges.append(_pair(child, parent))

    have = set(edges)
    bath_bedroom: dict[int, int] = {}
    for a, b in edges:
        if a == OUTSIDE_ID:
            continue
        for bath, other in ((a, b), (b, a)):
            if kinds[bath] is RoomKind.BATHROOM and kinds[other] in BEDROOM_KINDS:
                bath_bedroom[bath] = bath_bedroom.get(bath, 0) + 1

    ids = sorted(polys)
    for i in ids:
        for j in ids:
            if j <= i:
                continue
            for kind_a, kind_b, prob in cfg.optional_doors:
                if {kinds[i], kinds[j]} != {kind_a, kind_b}:
                    continue
                if _pair(i, j) in have or _prohibited(kinds[i], kinds[j]):
                    continue
                crosses_bath = (
                    kinds[i] is RoomKind.BATHROOM
                    and kinds[j] in BEDROOM_KINDS
                    and bath_bedroom.get(i, 0) > 0
                ) or (
                    kinds[j] is RoomKind.BATHROOM
                    and kinds[i] in BEDROOM_KINDS
                    and bath_bedroom.get(j, 0) > 0
                )
                if crosses_bath:
                    continue
                if _max_shared_mm(polys[i], polys[j]) < door_mm:
                    continue
                if rng.random() < prob:
                    have.add(_pair(i, j))
                    edges.append(_pair(i, j))
                break

    nodes = frozenset(polys) | {OUTSIDE_ID}
    return ConnectionGraph(nodes, tuple(sorted(edges)))


class _WallLedger:
    """Occupied intervals per wall line, so openings never collide."""

    def __init__(self) -> None:
        self._taken: dict[tuple[str, int], list[tuple[int, int]]] = {}

    @staticmethod
    def _line(seg: Segment) -> tuple[str, int]:
        if seg.horizontal:
            return ("h", _mm(seg.a.y))
        return ("v", _mm(seg.a.x))

    def free_spans(self, seg: Segment) -> list[tuple[int, int]]:
        lo, hi = _mm(seg.span[0]), _mm(seg.span[1])
        spans = [(lo, hi)]
        for tlo, thi in self._taken.get(self._line(seg), []):
            spans = [
                piece
                for a, b in spans
                for piece in ((a, min(b, tlo)), (max(a, thi), b))
                if piece[0] < piece[1]
            ]
        return sorted(spans)

    def occupy(self, seg: Segment, lo: int, hi: int) -> None:
        self._taken.setdefault(self._line(seg), []).append((lo, hi))


def _choose_position(
    spans: list[tuple[int, int]], width_mm: int, rng: RandomStream
) -> tuple[int, int, int] | None:
    """Uniform position for a width_mm opening across the free spans.

    Returns (span index, start, end) in mm, or None when nothing fits.  The
    chosen span's identity matters to the caller because spans from several
    wall lines are pooled.
    """
    fits = [(i, lo, hi) for i, (lo, hi) in enumerate(spans) if hi - lo >= width_mm]
    if not fits:
        return None
    slacks = [hi - lo - width_mm for _, lo, hi in fits]
    total = sum(slacks)
    r = rng.random()
    if total == 0:
        i, lo, _ = fits[0]
        return (i, lo, lo + width_mm)
    target = r * total
    for (i, lo, hi), slack in zip(fits[:-1], slacks[:-1]):
        if target <= slack:
            start = lo + min(slack, round(target))
            return (i, start, start + width_mm)
        target -= slack
    i, lo, hi = fits[-1]
    start = lo + min(hi - lo - width_mm, round(target))
    return (i, start, start + width_mm)


def place_doors(
    rooms: tuple[tuple[int, RoomKind, RectilinearPolygon], ...],
    graph: ConnectionGraph,
    footprint: Rect,
    rng: RandomStream,
    cfg: GenConfig,
) -> tuple[list[Opening], _WallLedger]:
    """One door per graph edge, entry door first, uniform over feasible spots."""
    polys = {rid: poly for rid, _, poly in rooms}
    door_mm = _mm(cfg.door_width)
    ledger = _WallLedger()
    openings: list[Opening] = []

    living_id = next(rid for rid, kind, _ in rooms if kind is RoomKind.LIVING_ROOM)
    exterior = _exterior_walls(polys[living_id], footprint)
    exterior = [w for w in exterior if _mm(w.length) >= door_mm]
    if not exterior:
        raise OpeningError("living room has no exterior wall wide enough for the entry")
    exterior.sort(key=lambda w: (-_mm(w.length), _seg_sort(w)))
    host = exterior[0]
    choice = _choose_position(ledger.free_spans(host), door_mm, rng)
    if choice is None:
        raise OpeningError("entry door does not fit")
    _, lo, hi = choice
    openings.append(
        _make_opening(ENTRY_DOOR, host, (lo, hi), cfg.door_width, (OUTSIDE_ID, living_id))
    )
    ledger.occupy(host, lo, hi)

    for a, b in graph.edges:
        if a == OUTSIDE_ID or b == OUTSIDE_ID:
            continue
        try:
            segs = shared_segments(polys[a], polys[b])
        except ValueError as exc:
            raise OpeningError(f"rooms {a} and {b} overlap") from exc
        spans: list[tuple[Segment, tuple[int, int]]] = []
        for seg in segs:
            for span in ledger.free_spans(seg):
                spans.append((seg, span))
        spans.sort(key=lambda pair: (pair[1][0], _seg_sort(pair[0])))
        choice = _choose_position([span for _, span in spans], door_mm, rng)
        if choice is None:
            raise OpeningError(f"no room left for a door between {a} and {b}")
        idx, lo, hi = choice
        openings.append(_make_opening(DOOR, spans[idx][0], (lo, hi), cfg.door_width, (a, b)))
        ledger.occupy(spans[idx][0], lo, hi)

    return openings, ledger


def _seg_sort(seg: Segment) -> tuple:
    return (seg.a.x, seg.a.y, seg.b.x, seg.b.y)


def _make_opening(
    kind: str, host: Segment, pos: tuple[int, int], width: float, rooms: tuple[int, int]
) -> Opening:
    offset = _m(pos[0] - _mm(host.span[0]))
    return Opening(kind, host, offset, width, rooms)


def place_windows(
    rooms: tuple[tuple[int, RoomKind, RectilinearPolygon], ...],
    footprint: Rect,
    ledger: _WallLedger,
    rng: RandomStream,
    cfg: GenConfig,
) -> list[Opening]:
    """One window per exterior room of an allowed kind, on a free exterior span."""
    window_mm = _mm(cfg.window_width)
    openings: list[Opening] = []
    for rid, kind, poly in sorted(rooms, key=lambda r: r[0]):
        if kind in cfg.window_banned:
            continue
        walls = _exterior_walls(poly, footprint)
        spans: list[tuple[Segment, tuple[int, int]]] = []
        for wall in sorted(walls, key=_seg_sort):
            for span in ledger.free_spans(wall):
                spans.append((wall, span))
        spans.sort(key=lambda pair: (pair[1][0], _seg_sort(pair[0])))
        choice = _choose_position([span for _, span in spans], window_mm, rng)
        if choice is None:
            continue
        idx, lo, hi = choice
        openings.append(
            _make_opening(WINDOW, spans[idx][0], (lo, hi), cfg.window_width, (rid, OUTSIDE_ID))
        )
        ledger.occupy(spans[idx][0], lo, hi)
    return openings


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures)}


def validate(plan, cfg: GenConfig | None = None) -> ValidationReport:
    """Re-check a finished plan from scratch.

    Verifies the area partition, pairwise disjointness, containment, opening
    geometry, one-door-per-edge correspondence, door-graph connectivity
    (Outside included), the entry door, and the connection prohibitions.
    Passing the config adds its window-ban check; everything else is
    self-contained in the plan document.
    """
    failures: list[str] = []
    rooms = [(room.id, room.kind, room.polygon) for room in plan.rooms]
    regions = {rid: Region.from_polygon(poly) for rid, _, poly in rooms}
    kinds = {rid: kind for rid, kind, _ in rooms}
    fp_region = Region.from_rect(plan.footprint)

    total = sum(poly.area for _, _, poly in rooms)
    fp_area = fp_region.area
    if abs(total - fp_area) > 1e-6 * fp_area:
        failures.append(f"partition: room areas sum to {total}, footprint is {fp_area}")
    for rid, region in sorted(regions.items()):
        if not region.subtract(fp_region).is_empty:
            failures.append(f"containment: room {rid} leaves the footprint")
    ids = sorted(regions)
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            if regions[a].intersect(regions[b]).area > 1e-9:
                failures.append(f"overlap: rooms {a} and {b}")

    door_edges: set[tuple[int, int]] = set()
    entry_count = 0
    by_line: dict[tuple[str, int], list[tuple[int, int, str]]] = {}
    for opening in plan.openings:
        lo, hi = opening.interval()
        slo, shi = _mm(opening.wall.span[0]), _mm(opening.wall.span[1])
        if lo < slo or hi > shi:
            failures.append(f"opening outside its wall: {opening.kind} {opening.rooms}")
        line = _WallLedger._line(opening.wall)
        by_line.setdefault(line, []).append((lo, hi, opening.kind))
        a, b = opening.rooms
        if opening.kind == WINDOW:
            if b != OUTSIDE_ID or not _on_footprint_boundary(opening.wall, plan.footprint):
                failures.append(f"window not on the footprint boundary: room {a}")
            continue
        if opening.kind == ENTRY_DOOR:
            entry_count += 1
            if not _on_footprint_boundary(opening.wall, plan.footprint):
                failures.append("entry door not on the footprint boundary")
            door_edges.add(_pair(a, b))
            continue
        door_edges.add(_pair(a, b))
        if not _wall_is_shared(opening.wall, regions.get(a), regions.get(b)):
            failures.append(f"door between {a} and {b} is not on their shared wall")

    for line, intervals in sorted(by_line.items()):
        intervals.sort()
        for (alo, ahi, akind), (blo, bhi, bkind) in zip(intervals, intervals[1:]):
            if blo < ahi:
                failures.append(f"openings overlap on a wall: {akind} and {bkind}")

    if entry_count == 0:
        failures.append("no entry door")

    graph_edges = {(_pair(a, b)) for a, b in plan.graph.edges}
    if door_edges != graph_edges:
        failures.append("realized doors do not match the connection graph")

    nodes = set(regions) | {OUTSIDE_ID}
    adjacency: dict[int, set[int]] = {n: set() for n in nodes}
    for a, b in door_edges:
        if a in adjacency and b in adjacency:
            adjacency[a].add(b)
            adjacency[b].add(a)
    seen = {OUTSIDE_ID}
    frontier = [OUTSIDE_ID]
    while frontier:
        for nbr in adjacency[frontier.pop()]:
            if nbr not in seen:
                seen.add(nbr)
                frontier.append(nbr)
    if seen != nodes:
        failures.append(f"door graph disconnected: unreachable rooms {sorted(nodes - seen)}")

    for a, b in sorted(door_edges):
        if a == OUTSIDE_ID:
            continue
        if _prohibited(kinds[a], kinds[b]):
            failures.append(f"prohibited door between {a} ({kinds[a]}) and {b} ({kinds[b]})")
    for rid, kind in sorted(kinds.items()):
        if kind is not RoomKind.BATHROOM:
            continue
        bed_neighbours = [
            other
            for a, b in door_edges
            for bath, other in ((a, b), (b, a))
            if bath == rid and other != OUTSIDE_ID and kinds[other] in BEDROOM_KINDS
        ]
        if len(bed_neighbours) > 1:
            failures.append(f"bathroom {rid} bridges bedrooms {sorted(bed_neighbours)}")

    if cfg is not None:
        for opening in plan.openings:
            if opening.kind == WINDOW and kinds[opening.rooms[0]] in cfg.window_banned:
                failures.append(f"window in banned kind: room {opening.rooms[0]}")

    return ValidationReport(tuple(failures))


def _on_footprint_boundary(wall: Segment, footprint: Rect) -> bool:
    fx0, fx1 = _mm(footprint.x), _mm(footprint.x1)
    fy0, fy1 = _mm(footprint.y), _mm(footprint.y1)
    if wall.horizontal:
        return _mm(wall.a.y) in (fy0, fy1)
    return _mm(wall.a.x) in (fx0, fx1)


def _wall_is_shared(wall: Segment, region_a: Region | None, region_b: Region | None) -> bool:
    """The wall lies on the common boundary of both rooms."""
    if region_a is None or region_b is None:
        return False
    try:
        segs = shared_segments(region_a.to_polygon(), region_b.to_polygon())
    except ValueError:
        return False
    wlo, whi = _mm(wall.span[0]), _mm(wall.span[1])
    for seg in segs:
        if seg.horizontal != wall.horizontal:
            continue
        same_line = (
            _mm(seg.a.y) == _mm(wall.a.y) if wall.horizontal else _mm(seg.a.x) == _mm(wall.a.x)
        )
        if same_line and _mm(seg.span[0]) <= wlo and whi <= _mm(seg.span[1]):
            return True
    return False
