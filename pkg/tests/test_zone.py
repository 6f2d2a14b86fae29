import pytest
from hypothesis import given, settings, strategies as st

from zonelab import (
    ConvexBody,
    FaceClass,
    Hyperplane,
    analyze,
    build_arrangement,
    classify_faces,
    count_borders,
    count_crossing_faces,
    general_position_check,
    is_subface,
    zone_cells,
    zone_report,
)
from zonelab.arrangement import signs_to_str
from zonelab.errors import GeneralPositionError, MalformedInput
from zonelab.zone import REPORT_COLUMNS, outer_complexity_per_cell, prop23_bound, tau_vector

from .test_body import instances


def names(faces):
    return {signs_to_str(f.signs) for f in faces}


def test_worked_zone(axes, strip_body):
    arr = build_arrangement(axes, 2)
    assert names(zone_cells(arr, strip_body)) == {"++", "+-"}
    t1, b1 = count_borders(arr, strip_body, 1)
    t0, b0 = count_borders(arr, strip_body, 0)
    assert (t0, t1) == (2, 2)
    assert {signs_to_str(b.face.signs) for b in b1} == {"0+", "0-"}
    assert {str(b) for b in b0} == {"0;00;++", "0;00;+-"}
    raw, paired = count_crossing_faces(arr, strip_body)
    assert raw[1] == 1 and paired[1] == 2 and raw[0] == 0


def test_worked_report(axes, strip_body):
    r = analyze(axes, strip_body)
    assert r.zone_cell_count == 2
    assert r.tau == (2, 2)
    assert r.outer_complexity == 4
    assert r.crossing_counts == (0, 1)
    assert r.ratio_cz == 1


def test_corner_square(axes):
    K = ConvexBody.box((-2, -2), (-1, -1))
    arr = build_arrangement(axes, 2)
    assert names(zone_cells(arr, K)) == {"--"}
    assert count_borders(arr, K, 1)[0] == 2
    assert count_borders(arr, K, 0)[0] == 1


def test_line_through_square():
    K = ConvexBody.box((-1, -1), (1, 1))
    arr = build_arrangement([((1, 0), 0)], 2)
    assert len(zone_cells(arr, K)) == 2
    raw, paired = count_crossing_faces(arr, K)
    assert raw[1] == 1 and paired[1] == 2


def test_points_around_an_interval():
    K = ConvexBody.box((0,), (1,))
    r = analyze([((1,), -1), ((2,), 1), ((1,), 2)], K)
    assert r.tau == (2,)
    assert r.outer_complexity == 2


def test_whole_space_has_empty_zone(axes):
    K = ConvexBody([], 2)
    arr = build_arrangement(axes, 2)
    assert zone_cells(arr, K) == []
    assert analyze(axes, K).outer_complexity == 0


def test_no_hyperplanes(strip_body):
    r = analyze([], strip_body)
    assert r.n == 0 and r.tau == (0, 0) and r.outer_complexity == 0
    assert r.zone_cell_count == 1  # the single cell R^2 meets both K and its complement
    assert tau_vector([], strip_body) == (0, 0)


def test_refuses_degenerate(axes):
    with pytest.raises(GeneralPositionError) as err:
        analyze(axes, ConvexBody.box((0, 0), (1, 1)))
    assert err.value.findings
    r = analyze(axes, ConvexBody.box((0, 0), (1, 1)), check_general_position=False)
    assert r.d == 2


def test_border_dimension_range(axes, strip_body):
    arr = build_arrangement(axes, 2)
    with pytest.raises(MalformedInput):
        count_borders(arr, strip_body, 2)
    with pytest.raises(MalformedInput):
        zone_cells(arr, ConvexBody.box((0,), (1,)))


def test_prop23_bound_values():
    assert prop23_bound(5, 3, 2) == 4 * 25
    assert prop23_bound(1, 3, 2) == 4
    with pytest.raises(ValueError):
        prop23_bound(3, 3, 0)


def test_csv_row_shape(axes, strip_body):
    row = analyze(axes, strip_body).csv_row()
    assert len(row) == len(REPORT_COLUMNS)
    values = dict(zip(REPORT_COLUMNS, row))
    assert values["tau_0"] == "2" and values["tau_1"] == "2" and values["tau_2"] == ""
    assert values["C_Z"] == "4" and values["ratio_CZ"] == "1"


@settings(max_examples=80, deadline=None)
@given(instances())
def test_border_invariants(inst):
    hs, K = inst
    arr = build_arrangement(hs, K.dim)
    classes = classify_faces(arr, K)
    zone = {c.signs for c in zone_cells(arr, K, classes)}
    total = 0
    for i in range(K.dim):
        tau, borders = count_borders(arr, K, i, classes)
        total += tau
        for b in borders:
            assert classes[b.face.signs] is FaceClass.OUTER
            assert classes[b.cell.signs] is FaceClass.CROSSING
            assert b.cell.signs in zone and is_subface(b.face, b.cell)
        assert len(set((b.face.signs, b.cell.signs) for b in borders)) == tau
    assert total == outer_complexity_per_cell(arr, K, classes)


@settings(max_examples=60, deadline=None)
@given(instances())
def test_outer_facets_border_one_zone_cell(inst):
    hs, K = inst
    arr = build_arrangement(hs, K.dim)
    if not hs or general_position_check(hs, K):
        return
    report = zone_report(arr, K)
    facets = [b for b in report.borders if b.i == K.dim - 1]
    assert len({b.face.signs for b in facets}) == len(facets)
