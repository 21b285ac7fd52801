"""Squarified-treemap subdivision and two-phase room placement.

``squarify`` partitions a rectangle into one rect per requested area with no
gaps or overlaps, greedily keeping each rect as square as the row rule
allows.  ``layout_rooms`` applies it level by level to the hierarchy tree:
the footprint is split among the living room and its child subtrees by
aggregate area, then each subtree's allotment is split among the parent room
itself and its children, recursively.

All arithmetic here stays at full float precision; the pipeline snaps the
resulting rects onto the millimetre grid in one pass afterwards.  Every cut
coordinate is computed once and shared by the rects on both sides, so the
partition is exact by construction (the last rect of each row is pinned to
the container edge rather than accumulated).
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Rect
from .hierarchy import HierarchyNode
from .sampling import RoomKind

AREA_TOLERANCE = 1e-6


class LayoutError(RuntimeError):
    """A layout request that cannot be satisfied."""


@dataclass(frozen=True)
class LayoutRequest:
    container: Rect
    items: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise LayoutError("layout request with no items")
        for item_id, area in self.items:
            if area <= 0:
                raise LayoutError(f"item {item_id} has non-positive area {area!r}")
        total = sum(area for _, area in self.items)
        if abs(total - self.container.area) > AREA_TOLERANCE * self.container.area:
            raise LayoutError(
                f"item areas sum to {total!r}, container holds {self.container.area!r}"
            )


@dataclass(frozen=True)
class PlacedRoom:
    id: int
    kind: RoomKind
    rect: Rect


def squarify(req: LayoutRequest, *, keep_order: bool = False) -> list[Rect]:
    """Partition the container; result is parallel to ``req.items``.

    Areas are laid out largest first in greedy rows along the shorter side of
    the remaining container; a row closes when appending the next area would
    worsen the row's worst aspect ratio.  With ``keep_order`` the items are
    taken in the order given instead of sorted (the room layout uses this to
    pin a parent room at its allotment's origin corner).
    """
    order = list(range(len(req.items)))
    if not keep_order:
        order.sort(key=lambda i: (-req.items[i][1], i))
    areas = [req.items[i][1] for i in order]
    cells = _fill(req.container, areas)
    out: list[Rect | None] = [None] * len(order)
    for pos, idx in enumerate(order):
        out[idx] = cells[pos]
    return out  # type: ignore[return-value]


def _worst(areas: list[float], start: int, end: int, side: float) -> float:
    """Worst aspect ratio in the row areas[start:end] against a side of the container."""
    thickness = sum(areas[start:end]) / side
    t2 = thickness * thickness
    worst = 1.0
    for a in areas[start:end]:
        worst = max(worst, t2 / a, a / t2)
    return worst


def _fill(container: Rect, areas: list[float]) -> list[Rect]:
    rects: list[Rect] = []
    x0, y0, x1, y1 = container.x, container.y, container.x1, container.y1
    start = 0
    while start < len(areas):
        width, height = x1 - x0, y1 - y0
        vertical = width >= height
        side = height if vertical else width
        end = start + 1
        while end < len(areas) and _worst(areas, start, end + 1, side) <= _worst(
            areas, start, end, side
        ):
            end += 1
        thickness = sum(areas[start:end]) / side
        last_row = end == len(areas)
        if vertical:
            xsplit = x1 if last_row else x0 + thickness
            y = y0
            for k in range(start, end):
                ytop = y1 if k == end - 1 else y + areas[k] / thickness
                rects.append(Rect(x0, y, xsplit - x0, ytop - y))
                y = ytop
            x0 = xsplit
        else:
            ysplit = y1 if last_row else y0 + thickness
            x = x0
            for k in range(start, end):
                xright = x1 if k == end - 1 else x + areas[k] / thickness
                rects.append(Rect(x, y0, xright - x, ysplit - y0))
                x = xright
            y0 = ysplit
        start = end
    return rects


def layout_rooms(footprint: Rect, tree: HierarchyNode) -> list[PlacedRoom]:
    """Place every room of the (area-annotated) hierarchy inside the footprint.

    A parent room is the first, unsorted item of its own allotment so it
    stays adjacent to the edge it shares with the level above; child subtrees
    follow in decreasing aggregate area.
    """
    if tree.kind is not RoomKind.OUTSIDE or len(tree.children) != 1:
        raise LayoutError("layout expects the Outside root with its living-room child")
    rooms: list[PlacedRoom] = []
    _place(tree.children[0], footprint, rooms)
    return rooms


def _place(node: HierarchyNode, rect: Rect, rooms: list[PlacedRoom]) -> None:
    if not node.children:
        rooms.append(PlacedRoom(node.room_id, node.kind, rect))
        return
    children = sorted(node.children, key=lambda c: (-c.aggregate_area, c.room_id))
    items = [(node.room_id, node.target_area)]
    items += [(child.room_id, child.aggregate_area) for child in children]
    cells = squarify(LayoutRequest(rect, tuple(items)), keep_order=True)
    rooms.append(PlacedRoom(node.room_id, node.kind, cells[0]))
    for child, cell in zip(children, cells[1:]):
        _place(child, cell, rooms)
