"""Room hierarchy assembly.

Turns a flat room program into the tree that drives both placement grouping
and door connectivity: Outside at the root, the living room as its only
child, and every other room attached under the room it should be reached
from.  The rule engine is deterministic; the one random choice in this stage
(kitchen under dining room instead of directly under the living room) is
drawn by the caller and passed in as a flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .sampling import BEDROOM_KINDS, RoomKind, RoomProgram

OUTSIDE_ID = -1


@dataclass
class HierarchyNode:
    room_id: int
    kind: RoomKind
    target_area: float
    children: list["HierarchyNode"] = field(default_factory=list)
    aggregate_area: float = 0.0

    def walk(self) -> Iterator["HierarchyNode"]:
        """Pre-order traversal, children in insertion order."""
        yield self
        for child in self.children:
            yield from child.walk()


def build_hierarchy(program: RoomProgram, *, kitchen_via_dining: bool = False) -> HierarchyNode:
    """Attach every program entry under its rule-given parent.

    Rules, applied in order: the living room hangs off the Outside root;
    dining room, kitchen (unless ``kitchen_via_dining`` and a dining room
    exists), all bedrooms, the first bathroom and any kind without a rule of
    its own go under the living room; the largest bedroom becomes the master
    bedroom (ties break to the lowest id); bathrooms past the first go under
    bedrooms, largest bedroom first, spilling back to the living room if the
    bedrooms run out; laundry and pantry go under the kitchen when there is
    one.
    """
    entries = sorted(program.entries, key=lambda e: e.id)
    living = [e for e in entries if e.kind is RoomKind.LIVING_ROOM]
    if len(living) != 1:
        raise ValueError("program must contain exactly one living room")

    nodes = {e.id: HierarchyNode(e.id, e.kind, e.target_area) for e in entries}
    root = HierarchyNode(OUTSIDE_ID, RoomKind.OUTSIDE, 0.0)
    lr = nodes[living[0].id]
    root.children.append(lr)

    bedrooms = [nodes[e.id] for e in entries if e.kind in BEDROOM_KINDS]
    if bedrooms:
        master = max(bedrooms, key=lambda n: (n.target_area, -n.room_id))
        for node in bedrooms:
            node.kind = RoomKind.MASTER_BEDROOM if node is master else RoomKind.BEDROOM

    dining = [nodes[e.id] for e in entries if e.kind is RoomKind.DINING_ROOM]
    kitchens = [nodes[e.id] for e in entries if e.kind is RoomKind.KITCHEN]
    kitchen_parent = dining[0] if (kitchen_via_dining and dining) else lr

    lr.children.extend(dining)
    kitchen_parent.children.extend(kitchens)
    lr.children.extend(bedrooms)

    bathrooms = [nodes[e.id] for e in entries if e.kind is RoomKind.BATHROOM]
    by_size = sorted(bedrooms, key=lambda n: (-n.target_area, n.room_id))
    for i, bath in enumerate(bathrooms):
        if i == 0 or i - 1 >= len(by_size):
            lr.children.append(bath)
        else:
            by_size[i - 1].children.append(bath)

    for entry in entries:
        node = nodes[entry.id]
        if entry.kind in (RoomKind.LAUNDRY, RoomKind.PANTRY):
            (kitchens[0] if kitchens else lr).children.append(node)
        elif entry.kind in (
            RoomKind.LIVING_ROOM,
            RoomKind.DINING_ROOM,
            RoomKind.KITCHEN,
            RoomKind.BATHROOM,
        ) or entry.kind in BEDROOM_KINDS:
            continue
        else:
            lr.children.append(node)

    return aggregate_areas(root)


def aggregate_areas(root: HierarchyNode) -> HierarchyNode:
    """Fill every node's aggregate_area with its subtree's total target area."""
    total = root.target_area
    for child in root.children:
        total += aggregate_areas(child).aggregate_area
    root.aggregate_area = total
    return root
