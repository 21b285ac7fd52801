"""Axis-aligned geometry primitives on a 1 mm grid.

All public types carry coordinates in metres.  Point, Segment and polygon
constructors snap their inputs to the grid, so coordinate equality is exact
``==`` everywhere downstream: adjacency, vertex coincidence and boolean ops
never need an epsilon.  Rect is the one exception: the treemap subdivides a
rect at full float precision and the pipeline snaps afterwards.  Boolean
operations run on an integer-millimetre cell decomposition internally, which
keeps area bookkeeping exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

GRID = 0.001


def snap(value: float) -> float:
    """Round a coordinate to the 1 mm grid."""
    return round(value, 3)


def _mm(value: float) -> int:
    return round(value * 1000)


def _m(value: int) -> float:
    return value / 1000


@dataclass(frozen=True, order=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", snap(self.x))
        object.__setattr__(self, "y", snap(self.y))


@dataclass(frozen=True)
class Segment:
    """Axis-aligned segment with nonzero length, endpoints in sorted order."""

    a: Point
    b: Point

    def __post_init__(self) -> None:
        if self.a.x != self.b.x and self.a.y != self.b.y:
            raise ValueError(f"segment not axis-aligned: {self.a} -> {self.b}")
        if self.a == self.b:
            raise ValueError(f"zero-length segment at {self.a}")
        if self.b < self.a:
            a, b = self.a, self.b
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)

    @property
    def horizontal(self) -> bool:
        return self.a.y == self.b.y

    @property
    def length(self) -> float:
        if self.horizontal:
            return _m(_mm(self.b.x) - _mm(self.a.x))
        return _m(_mm(self.b.y) - _mm(self.a.y))

    @property
    def line(self) -> float:
        """The fixed coordinate (y for horizontal segments, x for vertical)."""
        return self.a.y if self.horizontal else self.a.x

    @property
    def span(self) -> tuple[float, float]:
        """(lo, hi) of the varying coordinate."""
        if self.horizontal:
            return self.a.x, self.b.x
        return self.a.y, self.b.y

    def point_at(self, offset: float) -> Point:
        lo, _ = self.span
        if self.horizontal:
            return Point(snap(lo + offset), self.a.y)
        return Point(self.a.x, snap(lo + offset))


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle.

    Unlike Point, a Rect keeps its floats unsnapped: the treemap subdivides at
    full precision and the pipeline snaps in one pass afterwards (room
    polygons snap their vertices on construction).
    """

    x: float
    y: float
    width: float
    height: float

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"rect sides must be positive: {self.width} x {self.height}")

    @property
    def x1(self) -> float:
        return self.x + self.width

    @property
    def y1(self) -> float:
        return self.y + self.height

    @property
    def area(self) -> float:
        return self.width * self.height

    def snapped(self) -> "Rect":
        x0, y0 = snap(self.x), snap(self.y)
        return Rect(x0, y0, snap(self.x1) - x0, snap(self.y1) - y0)

    def to_polygon(self) -> "RectilinearPolygon":
        return RectilinearPolygon(
            (
                Point(self.x, self.y),
                Point(self.x1, self.y),
                Point(self.x1, self.y1),
                Point(self.x, self.y1),
            )
        )

    def contains_point(self, p: Point) -> bool:
        return self.x <= p.x <= self.x1 and self.y <= p.y <= self.y1


def aspect_ratio(rect: Rect) -> float:
    """Longer side over shorter side; always >= 1."""
    return max(rect.width / rect.height, rect.height / rect.width)


class RectilinearPolygon:
    """Simple axis-aligned polygon, stored counter-clockwise.

    The vertex list is normalised on construction: collinear runs are merged,
    orientation is forced counter-clockwise and the cycle is rotated to start
    at the lexicographically smallest vertex, so equal polygons compare equal
    and serialise identically.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[Point]) -> None:
        verts = [Point(p.x, p.y) for p in vertices]
        if len(verts) < 4:
            raise ValueError("rectilinear polygon needs at least 4 vertices")
        verts = _merge_collinear(verts)
        if len(verts) < 4:
            raise ValueError("degenerate polygon after merging collinear vertices")
        for p, q in _cycle_pairs(verts):
            if p.x != q.x and p.y != q.y:
                raise ValueError(f"edge not axis-aligned: {p} -> {q}")
            if p == q:
                raise ValueError(f"repeated vertex {p}")
        if _signed_area_mm2(verts) < 0:
            verts.reverse()
        if _signed_area_mm2(verts) <= 0:
            raise ValueError("polygon area must be positive")
        _check_simple(verts)
        start = min(range(len(verts)), key=lambda i: verts[i])
        self.vertices: tuple[Point, ...] = tuple(verts[start:] + verts[:start])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RectilinearPolygon) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"RectilinearPolygon({list(self.vertices)!r})"

    @property
    def area(self) -> float:
        return _signed_area_mm2(list(self.vertices)) / 1e6

    @property
    def bounds(self) -> Rect:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return Rect(min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))

    @property
    def is_rectangle(self) -> bool:
        return len(self.vertices) == 4

    def edges(self) -> list[Segment]:
        return [Segment(p, q) for p, q in _cycle_pairs(list(self.vertices))]

    def contains_point(self, p: Point) -> bool:
        """True for interior or boundary points."""
        if _on_boundary(self.vertices, p):
            return True
        # Parity of crossings along a ray to the left, in mm integers.
        px, py2 = _mm(p.x), 2 * _mm(p.y)
        inside = False
        for a, b in _cycle_pairs(list(self.vertices)):
            if a.x != b.x:
                continue
            ya, yb = 2 * _mm(a.y), 2 * _mm(b.y)
            if min(ya, yb) < py2 < max(ya, yb) and _mm(a.x) < px:
                inside = not inside
        return inside


def polygon_area(polygon: RectilinearPolygon) -> float:
    return polygon.area


def _cycle_pairs(verts: list[Point]) -> Iterable[tuple[Point, Point]]:
    for i, p in enumerate(verts):
        yield p, verts[(i + 1) % len(verts)]


def _merge_collinear(verts: list[Point]) -> list[Point]:
    out: list[Point] = []
    n = len(verts)
    for i, p in enumerate(verts):
        prev = verts[(i - 1) % n]
        nxt = verts[(i + 1) % n]
        if (prev.x == p.x == nxt.x) or (prev.y == p.y == nxt.y):
            continue
        out.append(p)
    return out


def _signed_area_mm2(verts: list[Point]) -> float:
    total = 0
    for p, q in _cycle_pairs(verts):
        total += _mm(p.x) * _mm(q.y) - _mm(q.x) * _mm(p.y)
    return total / 2


def _check_simple(verts: list[Point]) -> None:
    if len(set(verts)) != len(verts):
        raise ValueError("polygon repeats a vertex")
    edges = list(_cycle_pairs(verts))
    n = len(edges)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_touch(edges[i], edges[j]):
                raise ValueError("polygon boundary self-intersects")


def _segments_touch(e1: tuple[Point, Point], e2: tuple[Point, Point]) -> bool:
    (a, b), (c, d) = e1, e2
    ax0, ax1 = sorted((_mm(a.x), _mm(b.x)))
    ay0, ay1 = sorted((_mm(a.y), _mm(b.y)))
    cx0, cx1 = sorted((_mm(c.x), _mm(d.x)))
    cy0, cy1 = sorted((_mm(c.y), _mm(d.y)))
    return ax0 <= cx1 and cx0 <= ax1 and ay0 <= cy1 and cy0 <= ay1


def _on_boundary(verts: tuple[Point, ...], p: Point) -> bool:
    px, py = _mm(p.x), _mm(p.y)
    for a, b in _cycle_pairs(list(verts)):
        ax, ay, bx, by = _mm(a.x), _mm(a.y), _mm(b.x), _mm(b.y)
        if ax == bx == px and min(ay, by) <= py <= max(ay, by):
            return True
        if ay == by == py and min(ax, bx) <= px <= max(ax, bx):
            return True
    return False


class Region:
    """Set of axis-aligned cells over an integer-millimetre breakpoint grid.

    Backs the boolean operations: every op realigns both operands onto the
    union of their breakpoints and manipulates plain cell sets, so areas,
    unions and differences are exact.
    """

    __slots__ = ("xs", "ys", "cells")

    def __init__(self, xs: tuple[int, ...], ys: tuple[int, ...], cells: frozenset[tuple[int, int]]):
        self.xs = xs
        self.ys = ys
        self.cells = cells

    @classmethod
    def empty(cls) -> "Region":
        return cls((), (), frozenset())

    @classmethod
    def from_rect(cls, rect: Rect) -> "Region":
        xs = (_mm(rect.x), _mm(rect.x1))
        ys = (_mm(rect.y), _mm(rect.y1))
        return cls(xs, ys, frozenset({(0, 0)}))

    @classmethod
    def from_boxes(cls, boxes: "list[tuple[int, int, int, int]]") -> "Region":
        """Union of (x0, y0, x1, y1) millimetre boxes, built in one pass."""
        boxes = [b for b in boxes if b[0] < b[2] and b[1] < b[3]]
        if not boxes:
            return cls.empty()
        xs = tuple(sorted({v for b in boxes for v in (b[0], b[2])}))
        ys = tuple(sorted({v for b in boxes for v in (b[1], b[3])}))
        xi = {x: i for i, x in enumerate(xs)}
        yi = {y: j for j, y in enumerate(ys)}
        cells = set()
        for x0, y0, x1, y1 in boxes:
            for i in range(xi[x0], xi[x1]):
                for j in range(yi[y0], yi[y1]):
                    cells.add((i, j))
        return cls(xs, ys, frozenset(cells))

    @classmethod
    def from_polygon(cls, polygon: RectilinearPolygon) -> "Region":
        xs = tuple(sorted({_mm(p.x) for p in polygon.vertices}))
        ys = tuple(sorted({_mm(p.y) for p in polygon.vertices}))
        # Vertical polygon edges, for midline crossing parity per row slab.
        vedges = []
        for a, b in _cycle_pairs(list(polygon.vertices)):
            if a.x == b.x:
                vedges.append((_mm(a.x), min(_mm(a.y), _mm(b.y)), max(_mm(a.y), _mm(b.y))))
        cells = set()
        for j in range(len(ys) - 1):
            ymid2 = ys[j] + ys[j + 1]  # 2 * midpoint, keeps everything integral
            crossings = sorted(x for x, ylo, yhi in vedges if 2 * ylo < ymid2 < 2 * yhi)
            for k in range(0, len(crossings) - 1, 2):
                lo, hi = crossings[k], crossings[k + 1]
                for i in range(len(xs) - 1):
                    if lo <= xs[i] and xs[i + 1] <= hi:
                        cells.add((i, j))
        return cls(xs, ys, frozenset(cells))

    @property
    def is_empty(self) -> bool:
        return not self.cells

    @property
    def area(self) -> float:
        total = 0
        for i, j in self.cells:
            total += (self.xs[i + 1] - self.xs[i]) * (self.ys[j + 1] - self.ys[j])
        return total / 1e6

    def _realign(self, xs: tuple[int, ...], ys: tuple[int, ...]) -> frozenset[tuple[int, int]]:
        """Re-express this region's cells on a finer breakpoint grid."""
        if not self.cells:
            return frozenset()
        xi = {x: i for i, x in enumerate(xs)}
        yi = {y: j for j, y in enumerate(ys)}
        out = set()
        for i, j in self.cells:
            for ii in range(xi[self.xs[i]], xi[self.xs[i + 1]]):
                for jj in range(yi[self.ys[j]], yi[self.ys[j + 1]]):
                    out.add((ii, jj))
        return frozenset(out)

    def _common(self, other: "Region") -> tuple[tuple[int, ...], tuple[int, ...], frozenset, frozenset]:
        xs = tuple(sorted(set(self.xs) | set(other.xs)))
        ys = tuple(sorted(set(self.ys) | set(other.ys)))
        return xs, ys, self._realign(xs, ys), other._realign(xs, ys)

    def union(self, other: "Region") -> "Region":
        xs, ys, a, b = self._common(other)
        return Region(xs, ys, a | b)

    def subtract(self, other: "Region") -> "Region":
        xs, ys, a, b = self._common(other)
        return Region(xs, ys, a - b)

    def intersect(self, other: "Region") -> "Region":
        xs, ys, a, b = self._common(other)
        return Region(xs, ys, a & b)

    def connected(self) -> bool:
        """True when nonempty and all cells are reachable via shared edges."""
        if not self.cells:
            return False
        if len(self.cells) == 1:
            return True
        seen = set()
        stack = [next(iter(self.cells))]
        while stack:
            i, j = stack.pop()
            if (i, j) in seen:
                continue
            seen.add((i, j))
            for nb in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
                if nb in self.cells and nb not in seen:
                    stack.append(nb)
        return len(seen) == len(self.cells)

    def full_rect_mm(self) -> tuple[int, int] | None:
        """(width, height) in mm when the cells tile one solid rectangle."""
        if not self.cells:
            return None
        imin = imax = next(iter(self.cells))[0]
        jmin = jmax = next(iter(self.cells))[1]
        for i, j in self.cells:
            imin, imax = min(imin, i), max(imax, i)
            jmin, jmax = min(jmin, j), max(jmax, j)
        if len(self.cells) != (imax - imin + 1) * (jmax - jmin + 1):
            return None
        return (self.xs[imax + 1] - self.xs[imin], self.ys[jmax + 1] - self.ys[jmin])

    def has_pinch(self) -> bool:
        """True when two cells meet only at a corner (a checkerboard vertex)."""
        cells = self.cells
        for i, j in cells:
            if (i + 1, j + 1) in cells and (i + 1, j) not in cells and (i, j + 1) not in cells:
                return True
            if (i + 1, j - 1) in cells and (i + 1, j) not in cells and (i, j - 1) not in cells:
                return True
        return False

    def has_hole(self) -> bool:
        """True when part of the complement is walled off inside the region."""
        if len(self.cells) < 8:
            # A hole needs a full ring of cells around a missing one.
            return False
        imin = min(i for i, _ in self.cells) - 1
        imax = max(i for i, _ in self.cells) + 1
        jmin = min(j for _, j in self.cells) - 1
        jmax = max(j for _, j in self.cells) + 1
        seen = {(imin, jmin)}
        stack = [(imin, jmin)]
        while stack:
            i, j = stack.pop()
            for nb in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
                if (
                    imin <= nb[0] <= imax
                    and jmin <= nb[1] <= jmax
                    and nb not in self.cells
                    and nb not in seen
                ):
                    seen.add(nb)
                    stack.append(nb)
        box = (imax - imin + 1) * (jmax - jmin + 1)
        return len(seen) + len(self.cells) != box

    def is_simple(self) -> bool:
        """True when the region traces to a single simple polygon."""
        return self.connected() and not self.has_pinch() and not self.has_hole()

    def _facing_borders(self) -> dict[tuple[str, int, int], list[tuple[int, int]]]:
        """Merged boundary runs keyed by (axis, line mm, facing sign)."""
        raw: dict[tuple[str, int, int], list[tuple[int, int]]] = {}
        for i, j in self.cells:
            x0, x1 = self.xs[i], self.xs[i + 1]
            y0, y1 = self.ys[j], self.ys[j + 1]
            if (i + 1, j) not in self.cells:
                raw.setdefault(("v", x1, 1), []).append((y0, y1))
            if (i - 1, j) not in self.cells:
                raw.setdefault(("v", x0, -1), []).append((y0, y1))
            if (i, j + 1) not in self.cells:
                raw.setdefault(("h", y1, 1), []).append((x0, x1))
            if (i, j - 1) not in self.cells:
                raw.setdefault(("h", y0, -1), []).append((x0, x1))
        for runs in raw.values():
            runs.sort()
            merged = [list(runs[0])]
            for lo, hi in runs[1:]:
                if lo <= merged[-1][1]:
                    merged[-1][1] = max(merged[-1][1], hi)
                else:
                    merged.append([lo, hi])
            runs[:] = [(lo, hi) for lo, hi in merged]
        return raw

    def shared_border_mm(self, other: "Region") -> int:
        """Longest straight wall run shared with a disjoint neighbour, in mm."""
        mine = self._facing_borders()
        theirs = other._facing_borders()
        best = 0
        for (axis, line, face), runs in mine.items():
            opposite = theirs.get((axis, line, -face))
            if not opposite:
                continue
            k = 0
            for lo, hi in runs:
                while k < len(opposite) and opposite[k][1] <= lo:
                    k += 1
                m = k
                while m < len(opposite) and opposite[m][0] < hi:
                    best = max(best, min(hi, opposite[m][1]) - max(lo, opposite[m][0]))
                    m += 1
        return best

    def _boundary_edges(self) -> dict[tuple[int, int], list[tuple[int, int]]]:
        """Directed boundary edges (interior on the left), keyed by start vertex.

        Vertices are in millimetres.
        """
        out: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for i, j in self.cells:
            x0, x1 = self.xs[i], self.xs[i + 1]
            y0, y1 = self.ys[j], self.ys[j + 1]
            if (i, j - 1) not in self.cells:
                out.setdefault((x0, y0), []).append((x1, y0))
            if (i + 1, j) not in self.cells:
                out.setdefault((x1, y0), []).append((x1, y1))
            if (i, j + 1) not in self.cells:
                out.setdefault((x1, y1), []).append((x0, y1))
            if (i - 1, j) not in self.cells:
                out.setdefault((x0, y1), []).append((x0, y0))
        return out

    def to_polygon(self) -> RectilinearPolygon:
        """Trace the boundary into a single simple polygon.

        Raises ValueError when the region is empty, disconnected, has a hole,
        or pinches down to a corner contact.
        """
        if not self.cells:
            raise ValueError("empty region has no boundary")
        if not self.connected():
            raise ValueError("region is disconnected")
        edges = self._boundary_edges()
        start = min(edges)
        loop = [start]
        cur = start
        total = sum(len(v) for v in edges.values())
        for _ in range(total):
            nxts = edges.get(cur)
            if not nxts:
                raise ValueError("region boundary is not a closed loop")
            if len(nxts) > 1:
                raise ValueError("region pinches to a corner contact")
            cur = nxts.pop()
            if cur == start:
                break
            loop.append(cur)
        else:
            raise ValueError("region boundary does not close")
        if any(edges.values()):
            raise ValueError("region has a hole or multiple boundary loops")
        return RectilinearPolygon(tuple(Point(_m(x), _m(y)) for x, y in loop))

    def thickness(self) -> float:
        """Width of the narrowest limb.

        Every maximal contiguous run of cells in a row contributes its width
        and every column run its height; the minimum over both passes is the
        narrowest limb.  For a plain rectangle this is min(width, height).
        """
        if not self.cells:
            return 0.0
        best: int | None = None
        for transpose in (False, True):
            axis = self.ys if transpose else self.xs
            rows: dict[int, set[int]] = {}
            for i, j in self.cells:
                if transpose:
                    i, j = j, i
                rows.setdefault(j, set()).add(i)
            for filled in rows.values():
                runs: list[list[int]] = []
                for i in sorted(filled):
                    if runs and runs[-1][1] == i:
                        runs[-1][1] = i + 1
                    else:
                        runs.append([i, i + 1])
                for a, b in runs:
                    width = axis[b] - axis[a]
                    if best is None or width < best:
                        best = width
        return _m(best if best is not None else 0)


def shared_segments(a: RectilinearPolygon, b: RectilinearPolygon) -> list[Segment]:
    """Maximal collinear overlaps of two polygon boundaries.

    The polygons must not overlap in the interior.  Segments come back sorted
    for deterministic downstream iteration.
    """
    inter = Region.from_polygon(a).intersect(Region.from_polygon(b))
    if inter.area > 0:
        raise ValueError("polygons have overlapping interiors")
    by_line: dict[tuple[bool, float], list[tuple[int, int]]] = {}
    for ea in a.edges():
        for eb in b.edges():
            if ea.horizontal != eb.horizontal or ea.line != eb.line:
                continue
            lo = max(_mm(ea.span[0]), _mm(eb.span[0]))
            hi = min(_mm(ea.span[1]), _mm(eb.span[1]))
            if lo < hi:
                by_line.setdefault((ea.horizontal, ea.line), []).append((lo, hi))
    out = []
    for (horizontal, line), spans in by_line.items():
        spans.sort()
        merged = [spans[0]]
        for lo, hi in spans[1:]:
            if lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        for lo, hi in merged:
            if horizontal:
                out.append(Segment(Point(_m(lo), line), Point(_m(hi), line)))
            else:
                out.append(Segment(Point(line, _m(lo)), Point(line, _m(hi))))
    return sorted(out, key=lambda s: (s.a, s.b))


def shared_edge(a: RectilinearPolygon, b: RectilinearPolygon) -> tuple[Segment | None, bool]:
    """Longest shared boundary segment of two polygons.

    Returns ``(segment, vertex_only)``: the longest maximal overlap (ties
    broken by position) or None, plus a flag that is True when the boundaries
    touch only at isolated points.
    """
    segs = shared_segments(a, b)
    if segs:
        best = max(segs, key=lambda s: (s.length, (-s.a.x, -s.a.y)))
        return best, False
    touch = any(_on_boundary(b.vertices, p) for p in a.vertices) or any(
        _on_boundary(a.vertices, p) for p in b.vertices
    )
    return None, touch


def subtract(a: RectilinearPolygon, b: RectilinearPolygon) -> RectilinearPolygon:
    """Remove ``b`` from ``a``, requiring a single simple polygon remainder.

    Raises ValueError when the cut consumes ``a`` entirely or splits it into
    pieces (callers treat both as "this cut is not allowed").
    """
    result = Region.from_polygon(a).subtract(Region.from_polygon(b))
    if result.is_empty:
        raise ValueError("subtraction removed the whole polygon")
    return result.to_polygon()
