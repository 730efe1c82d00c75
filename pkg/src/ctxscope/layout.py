"""Extended treemap layout: squarified topic cells plus per-item grid slots.

Cells tile the unit canvas with area exactly proportional to topic size
(squarified packing, so cells stay near-square and the item grids get usable
space). Inside each cell every item owns a unique grid slot; slots are handed
out in row-major order with subtopics kept in contiguous blocks, ordered by
the angle of each subtopic's projected centroid, so subtopic boundaries read
as clean sweeps rather than interleaved speckle. Items within a subtopic
follow their projected (y, x) order, preserving the coarse kernel-PCA
arrangement.

Everything here is a pure function of its inputs; expansion re-runs the same
computation with one topic pinned to a large corner cell and the rest packed
into the remaining L-shaped margin.
"""

import math
from dataclasses import dataclass

from .errors import InputError, InternalError, NotFoundError

EXPAND_FRACTION = 0.8  # per-axis share of the canvas for an expanded cell
RADIUS_FACTOR = 0.35  # circle radius as a share of the slot pitch


@dataclass(frozen=True)
class CellRect:
    topic_id: int
    x: float
    y: float
    w: float
    h: float


@dataclass(frozen=True)
class ItemPlacement:
    item_id: str
    topic_id: int
    subtopic_id: str
    row: int
    col: int
    x: float
    y: float
    radius: float


@dataclass(frozen=True)
class LayoutModel:
    cells: tuple[CellRect, ...]
    placements: tuple[ItemPlacement, ...]
    expanded_topic: int | None = None


@dataclass(frozen=True)
class TopicGeometry:
    """Per-topic layout input: members with subtopic and projected coords."""

    topic_id: int
    items: tuple[tuple[str, str, float, float], ...]  # (item_id, subtopic_id, px, py)


def _worst_ratio(areas: list[float], side: float) -> float:
    total = sum(areas)
    thickness = total / side
    worst = 1.0
    for a in areas:
        length = a / thickness
        worst = max(worst, thickness / length, length / thickness)
    return worst


def squarify(weights: list[float], x: float, y: float, w: float, h: float) -> list[tuple[float, float, float, float]]:
    """Squarified treemap packing; returned rects align with input order."""
    if any(wt <= 0 for wt in weights):
        raise InputError("squarify weights must be positive")
    if w <= 0 or h <= 0:
        raise InputError(f"degenerate rect {w}x{h}")
    total = sum(weights)
    areas = [wt * (w * h) / total for wt in weights]
    rects: list[tuple[float, float, float, float]] = [(0.0, 0.0, 0.0, 0.0)] * len(weights)

    cx, cy, cw, ch = x, y, w, h
    row: list[int] = []
    i = 0

    def flush_row():
        nonlocal cx, cy, cw, ch
        row_area = sum(areas[j] for j in row)
        if cw >= ch:
            # Vertical strip on the left edge, cells stacked downward.
            thickness = row_area / ch
            offset = cy
            for j in row:
                length = areas[j] / thickness
                rects[j] = (cx, offset, thickness, length)
                offset += length
            cx += thickness
            cw -= thickness
        else:
            thickness = row_area / cw
            offset = cx
            for j in row:
                length = areas[j] / thickness
                rects[j] = (offset, cy, length, thickness)
                offset += length
            cy += thickness
            ch -= thickness
        row.clear()

    while i < len(areas):
        side = min(cw, ch)
        current = [areas[j] for j in row]
        if not row or _worst_ratio(current + [areas[i]], side) <= _worst_ratio(current, side):
            row.append(i)
            i += 1
        else:
            flush_row()
    if row:
        flush_row()
    return rects


def grid_slots(cell: CellRect, n: int) -> list[tuple[int, int, float, float]]:
    """Evenly spaced slot centers covering the cell, row-major, rows*cols >= n."""
    if n < 1:
        raise InputError(f"need at least one slot, got n={n}")
    if cell.w <= 0 or cell.h <= 0:
        raise InputError(f"degenerate cell {cell.w}x{cell.h}")
    cols = max(1, math.ceil(math.sqrt(n * cell.w / cell.h)))
    rows = math.ceil(n / cols)
    slots = []
    for r in range(rows):
        for c in range(cols):
            slots.append((
                r,
                c,
                cell.x + (c + 0.5) * cell.w / cols,
                cell.y + (r + 0.5) * cell.h / rows,
            ))
    return slots


def assign_slots(
    items: list[tuple[str, str, float, float]],
    slots: list[tuple[int, int, float, float]],
) -> list[tuple[str, str, int, int, float, float]]:
    """Map items to slots so each subtopic occupies one contiguous slot range.

    Subtopics sweep around the cell in the angular order of their projected
    centroids (the projection is centered, so the centroid of all members
    plays the role of the cell center); items inside a subtopic follow
    projected (y, x) order. Returns (item_id, subtopic_id, row, col, x, y).
    """
    if len(items) > len(slots):
        raise InternalError(f"{len(items)} items but only {len(slots)} slots")
    if not items:
        return []
    center_x = sum(px for _, _, px, py in items) / len(items)
    center_y = sum(py for _, _, px, py in items) / len(items)
    groups: dict[str, list[tuple[str, str, float, float]]] = {}
    for entry in items:
        groups.setdefault(entry[1], []).append(entry)

    def group_angle(members: list[tuple[str, str, float, float]]) -> float:
        gx = sum(px for _, _, px, py in members) / len(members)
        gy = sum(py for _, _, px, py in members) / len(members)
        return math.atan2(gy - center_y, gx - center_x)

    ordered_groups = sorted(groups.items(), key=lambda kv: (group_angle(kv[1]), kv[0]))
    flat: list[tuple[str, str, float, float]] = []
    for _, members in ordered_groups:
        flat.extend(sorted(members, key=lambda e: (e[3], e[2], e[0])))

    out = []
    for (item_id, subtopic_id, _, _), (row, col, sx, sy) in zip(flat, slots):
        out.append((item_id, subtopic_id, row, col, sx, sy))
    return out


def _margin_rects() -> tuple[tuple[float, float, float, float], tuple[float, float, float, float]]:
    f = EXPAND_FRACTION
    right = (f, 0.0, 1.0 - f, 1.0)
    bottom = (0.0, f, f, 1.0 - f)
    return right, bottom


def build_layout(topics: list[TopicGeometry], expanded_topic: int | None = None) -> LayoutModel:
    """Lay out all topics on the unit canvas; pure function of its inputs."""
    if not topics:
        raise InputError("no topics to lay out")
    known = {t.topic_id for t in topics}
    if expanded_topic is not None and expanded_topic not in known:
        raise NotFoundError(f"unknown topic {expanded_topic}")
    by_weight = sorted(topics, key=lambda t: (-len(t.items), t.topic_id))

    cell_map: dict[int, CellRect] = {}
    if expanded_topic is None:
        rects = squarify([len(t.items) for t in by_weight], 0.0, 0.0, 1.0, 1.0)
        for topic, (x, y, w, h) in zip(by_weight, rects):
            cell_map[topic.topic_id] = CellRect(topic.topic_id, x, y, w, h)
    else:
        rest = [t for t in by_weight if t.topic_id != expanded_topic]
        f = EXPAND_FRACTION
        if not rest:
            cell_map[expanded_topic] = CellRect(expanded_topic, 0.0, 0.0, 1.0, 1.0)
        elif len(rest) == 1:
            # A single remaining topic cannot tile an L; it takes the full
            # right strip and the expanded cell grows to full height.
            cell_map[expanded_topic] = CellRect(expanded_topic, 0.0, 0.0, f, 1.0)
            only = rest[0]
            cell_map[only.topic_id] = CellRect(only.topic_id, f, 0.0, 1.0 - f, 1.0)
        else:
            cell_map[expanded_topic] = CellRect(expanded_topic, 0.0, 0.0, f, f)
            right, bottom = _margin_rects()
            right_area = right[2] * right[3]
            total_margin = right_area + bottom[2] * bottom[3]
            total_weight = sum(len(t.items) for t in rest)
            target = right_area / total_margin
            # Split index minimizing the mismatch between the right strip's
            # weight share and its area share; both groups stay non-empty.
            prefix = 0
            best_split, best_err = 1, float("inf")
            for j in range(1, len(rest)):
                prefix += len(rest[j - 1].items)
                err = abs(prefix / total_weight - target)
                if err < best_err:
                    best_split, best_err = j, err
            groups = (rest[:best_split], rest[best_split:])
            for group, rect in zip(groups, (right, bottom)):
                rects = squarify([len(t.items) for t in group], *rect)
                for topic, (x, y, w, h) in zip(group, rects):
                    cell_map[topic.topic_id] = CellRect(topic.topic_id, x, y, w, h)

    cells = tuple(sorted(cell_map.values(), key=lambda c: c.topic_id))
    placements: list[ItemPlacement] = []
    for topic in sorted(topics, key=lambda t: t.topic_id):
        cell = cell_map[topic.topic_id]
        slots = grid_slots(cell, len(topic.items))
        cols = max(s[1] for s in slots) + 1
        rows = max(s[0] for s in slots) + 1
        radius = RADIUS_FACTOR * min(cell.w / cols, cell.h / rows)
        for item_id, subtopic_id, row, col, sx, sy in assign_slots(list(topic.items), slots):
            placements.append(ItemPlacement(
                item_id=item_id,
                topic_id=topic.topic_id,
                subtopic_id=subtopic_id,
                row=row,
                col=col,
                x=sx,
                y=sy,
                radius=radius,
            ))
    return LayoutModel(cells=cells, placements=tuple(placements), expanded_topic=expanded_topic)


def expand_cell(layout_inputs: list[TopicGeometry], topic_id: int) -> LayoutModel:
    """Recompute the layout with one topic expanded."""
    return build_layout(layout_inputs, expanded_topic=topic_id)
