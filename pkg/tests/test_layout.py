import random

import pytest

from ctxscope.errors import InputError, InternalError, NotFoundError
from ctxscope.layout import (
    CellRect,
    TopicGeometry,
    assign_slots,
    build_layout,
    expand_cell,
    grid_slots,
    squarify,
)


def reference_squarify(weights, x, y, w, h):
    """Independent reference: the classic recursive squarified-treemap
    formulation with the side-length worst() ratio."""
    total = sum(weights)
    areas = [wt * w * h / total for wt in weights]
    rects = [None] * len(areas)

    def worst(row, side):
        s = sum(row)
        return max(max(side * side * r / (s * s), s * s / (side * side * r)) for r in row)

    def layout_row(row, x, y, w, h):
        s = sum(areas[i] for i in row)
        if w >= h:
            thickness = s / h
            offset = y
            for i in row:
                length = areas[i] / thickness
                rects[i] = (x, offset, thickness, length)
                offset += length
            return x + thickness, y, w - thickness, h
        thickness = s / w
        offset = x
        for i in row:
            length = areas[i] / thickness
            rects[i] = (offset, y, length, thickness)
            offset += length
        return x, y + thickness, w, h - thickness

    def recurse(children, row, x, y, w, h):
        if not children:
            if row:
                layout_row(row, x, y, w, h)
            return
        side = min(w, h)
        head, rest = children[0], children[1:]
        row_areas = [areas[i] for i in row]
        if not row or worst(row_areas + [areas[head]], side) <= worst(row_areas, side):
            recurse(rest, row + [head], x, y, w, h)
        else:
            recurse(children, [], *layout_row(row, x, y, w, h))

    recurse(list(range(len(areas))), [], x, y, w, h)
    return rects


def test_single_weight_fills_rect():
    assert squarify([1.0], 0.0, 0.0, 1.0, 1.0) == [(0.0, 0.0, 1.0, 1.0)]


def test_four_equal_weights_quarter_the_unit_square():
    rects = squarify([1.0, 1.0, 1.0, 1.0], 0.0, 0.0, 1.0, 1.0)
    for x, y, w, h in rects:
        assert w * h == pytest.approx(0.25, abs=1e-12)


def test_classic_example_matches_reference():
    # The canonical 6x4 example with weights summing to 24.
    weights = [6.0, 6.0, 4.0, 3.0, 2.0, 2.0, 1.0]
    mine = squarify(weights, 0.0, 0.0, 6.0, 4.0)
    want = reference_squarify(weights, 0.0, 0.0, 6.0, 4.0)
    for (gx, gy, gw, gh), (wx, wy, ww, wh), weight in zip(mine, want, weights):
        assert gx == pytest.approx(wx, abs=1e-9)
        assert gy == pytest.approx(wy, abs=1e-9)
        assert gw == pytest.approx(ww, abs=1e-9)
        assert gh == pytest.approx(wh, abs=1e-9)
        assert gw * gh == pytest.approx(weight, abs=1e-9)


def test_random_cases_match_reference():
    rng = random.Random(31)
    for _ in range(50):
        n = rng.randint(1, 12)
        weights = [rng.uniform(0.1, 20.0) for _ in range(n)]
        w, h = rng.uniform(0.5, 4.0), rng.uniform(0.5, 4.0)
        mine = squarify(weights, 0.0, 0.0, w, h)
        want = reference_squarify(weights, 0.0, 0.0, w, h)
        for got, expected in zip(mine, want):
            assert got == pytest.approx(expected, abs=1e-9)


def test_nonpositive_weight_rejected():
    with pytest.raises(InputError):
        squarify([1.0, 0.0], 0.0, 0.0, 1.0, 1.0)
    with pytest.raises(InputError):
        squarify([1.0, -2.0], 0.0, 0.0, 1.0, 1.0)


# grid_slots


def test_grid_formula_forced_case():
    slots = grid_slots(CellRect(0, 0.0, 0.0, 4.0, 3.0), 12)
    assert len(slots) == 12
    assert max(s[1] for s in slots) + 1 == 4  # cols
    assert max(s[0] for s in slots) + 1 == 3  # rows


def test_single_slot_sits_at_cell_center():
    (row, col, x, y), = grid_slots(CellRect(0, 1.0, 2.0, 2.0, 4.0), 1)
    assert (row, col) == (0, 0)
    assert (x, y) == (2.0, 4.0)


def test_slots_inside_and_distinct_over_random_cells():
    rng = random.Random(77)
    for _ in range(1000):
        cell = CellRect(0, rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.01, 3), rng.uniform(0.01, 3))
        n = rng.randint(1, 60)
        slots = grid_slots(cell, n)
        assert len(slots) >= n
        positions = [(x, y) for _, _, x, y in slots]
        assert len(set(positions)) == len(positions)
        for x, y in positions:
            assert cell.x < x < cell.x + cell.w
            assert cell.y < y < cell.y + cell.h


def test_degenerate_cell_rejected():
    with pytest.raises(InputError):
        grid_slots(CellRect(0, 0.0, 0.0, 0.0, 1.0), 3)
    with pytest.raises(InputError):
        grid_slots(CellRect(0, 0.0, 0.0, 1.0, 1.0), 0)


# assign_slots


def _slots_for(n):
    return grid_slots(CellRect(0, 0.0, 0.0, 1.0, 1.0), n)


def test_single_subtopic_follows_projected_y_order():
    items = [("c", "0.0", 0.0, 0.3), ("a", "0.0", 0.0, 0.1), ("b", "0.0", 0.0, 0.2)]
    placed = assign_slots(items, _slots_for(3))
    assert [p[0] for p in placed] == ["a", "b", "c"]


def test_subtopics_occupy_contiguous_ranges():
    items = [(f"a{i}", "0.0", -1.0, float(i)) for i in range(3)]
    items += [(f"b{i}", "0.1", 1.0, float(i)) for i in range(5)]
    placed = assign_slots(items, _slots_for(8))
    slot_index = {item_id: row * 3 + col for item_id, _, row, col, _, _ in placed}
    a_slots = sorted(slot_index[f"a{i}"] for i in range(3))
    b_slots = sorted(slot_index[f"b{i}"] for i in range(5))
    ranges = sorted([a_slots, b_slots], key=lambda r: r[0])
    assert ranges[0] == list(range(0, len(ranges[0])))
    assert ranges[1] == list(range(len(ranges[0]), 8))


def test_assignment_is_permutation_invariant():
    rng = random.Random(5)
    items = [(f"i{i}", f"0.{i % 3}", rng.uniform(-1, 1), rng.uniform(-1, 1)) for i in range(20)]
    slots = _slots_for(20)
    want = sorted(assign_slots(items, slots))
    for _ in range(100):
        shuffled = items[:]
        rng.shuffle(shuffled)
        assert sorted(assign_slots(shuffled, slots)) == want


def test_more_items_than_slots_is_internal_error():
    items = [(f"i{i}", "0.0", 0.0, float(i)) for i in range(5)]
    with pytest.raises(InternalError):
        assign_slots(items, _slots_for(3)[:3])


# build_layout / expand_cell


def _geometry(counts):
    rng = random.Random(1)
    out = []
    for topic_id, count in enumerate(counts):
        items = tuple(
            (f"t{topic_id}-i{i}", f"{topic_id}.{i % 2}", rng.uniform(-1, 1), rng.uniform(-1, 1))
            for i in range(count)
        )
        out.append(TopicGeometry(topic_id=topic_id, items=items))
    return out


def test_layout_tiles_canvas_with_proportional_areas():
    geometry = _geometry([10, 20, 30, 40])
    layout = build_layout(geometry)
    total = sum(c.w * c.h for c in layout.cells)
    assert total == pytest.approx(1.0, abs=1e-9)
    for cell in layout.cells:
        count = len(geometry[cell.topic_id].items)
        assert cell.w * cell.h == pytest.approx(count / 100, abs=1e-9)
    assert len(layout.placements) == 100
    positions = {(p.x, p.y) for p in layout.placements}
    assert len(positions) == 100


def test_expand_then_collapse_restores_layout():
    geometry = _geometry([5, 10, 15, 20, 8])
    collapsed = build_layout(geometry)
    expanded = expand_cell(geometry, 2)
    assert expanded.expanded_topic == 2
    assert build_layout(geometry) == collapsed


def test_expanded_cell_has_fixed_area_fraction():
    geometry = _geometry([5, 10, 15, 20, 8])
    expanded = expand_cell(geometry, 3)
    cell = next(c for c in expanded.cells if c.topic_id == 3)
    assert cell.w * cell.h == pytest.approx(0.64, abs=1e-9)
    total = sum(c.w * c.h for c in expanded.cells)
    assert total == pytest.approx(1.0, abs=1e-9)


def test_expansion_keeps_every_topic_visible():
    geometry = _geometry([5, 10, 15, 20, 8])
    expanded = expand_cell(geometry, 0)
    placed_topics = {p.topic_id for p in expanded.placements}
    assert placed_topics == {0, 1, 2, 3, 4}
    positions = {(p.x, p.y) for p in expanded.placements}
    assert len(positions) == len(expanded.placements)


def test_expand_unknown_topic_rejected():
    with pytest.raises(NotFoundError):
        expand_cell(_geometry([4, 4]), 99)


def test_two_topic_expansion_edge_case():
    geometry = _geometry([6, 9])
    expanded = expand_cell(geometry, 0)
    assert sum(c.w * c.h for c in expanded.cells) == pytest.approx(1.0, abs=1e-9)
    assert {c.topic_id for c in expanded.cells} == {0, 1}


def test_study_bundle_expansion_keeps_all_topics_visible(study_bundle):
    from ctxscope.bundle import topic_geometries

    geometry = topic_geometries(study_bundle.topics, study_bundle.subtopics, study_bundle.projections)
    all_topics = {t.topic_id for t in geometry}
    for topic_id in sorted(all_topics):
        expanded = build_layout(geometry, expanded_topic=topic_id)
        assert {p.topic_id for p in expanded.placements} == all_topics
        positions = {(p.x, p.y) for p in expanded.placements}
        assert len(positions) == len(expanded.placements)


def test_placements_strictly_inside_cells_with_radius_margin():
    layout = build_layout(_geometry([7, 13, 29]))
    cells = {c.topic_id: c for c in layout.cells}
    for p in layout.placements:
        cell = cells[p.topic_id]
        assert cell.x + p.radius < p.x < cell.x + cell.w - p.radius
        assert cell.y + p.radius < p.y < cell.y + cell.h - p.radius
