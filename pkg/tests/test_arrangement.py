import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from zonelab import (
    Hyperplane,
    build_arrangement,
    enumerate_faces_oracle,
    face_counts,
    is_subface,
    restrict_to_hyperplane,
)
from zonelab.arrangement import str_to_signs, signs_to_str
from zonelab.exact import eq, feasible, ge, solve_affine_system
from zonelab.errors import BudgetExceeded, DegenerateRestriction, MalformedInput
from zonelab.instances import GenConfig, random_hyperplanes


def simple_counts(n, d):
    # f_k of a simple arrangement of n hyperplanes in R^d
    return tuple(comb(n, d - k) * sum(comb(n - d + k, j) for j in range(k + 1))
                 for k in range(d + 1))


@st.composite
def hyperplane_sets(draw, max_n=5, max_d=3):
    d = draw(st.integers(1, max_d))
    n = draw(st.integers(0, max_n))
    hs = set()
    for _ in range(n):
        normal = draw(st.lists(st.integers(-3, 3), min_size=d, max_size=d).filter(any))
        hs.add(Hyperplane(normal, draw(st.integers(-3, 3))))
    return d, sorted(hs, key=str)


def test_hyperplane_canonical_form():
    assert Hyperplane((2, 4), 6) == Hyperplane((-1, -2), -3)
    assert Hyperplane(("1/2", 0), "1/4").normal == (2, 0)
    with pytest.raises(MalformedInput):
        Hyperplane((0, 0), 1)


def test_empty_arrangement_is_one_cell():
    arr = build_arrangement([], 2)
    assert list(arr.faces) == [()]
    assert face_counts(arr) == (0, 0, 1)
    assert face_counts(build_arrangement([], 3)) == (0, 0, 0, 1)


def test_axes_give_quadrants(axes):
    arr = build_arrangement(axes, 2)
    assert face_counts(arr) == (1, 4, 4)
    assert len(arr.faces) == 9
    assert arr.face("00").witness == (0, 0)
    assert {signs_to_str(c.signs) for c in arr.cells} == {"++", "+-", "-+", "--"}


def test_three_generic_lines():
    arr = build_arrangement([((1, 0), 0), ((0, 1), 0), ((1, 1), 1)], 2)
    assert face_counts(arr) == (3, 9, 7)
    assert arr.general_position


def test_duplicate_and_mismatched_input():
    with pytest.raises(MalformedInput):
        build_arrangement([((1, 0), 0), ((2, 0), 0)], 2)
    with pytest.raises(MalformedInput):
        build_arrangement([((1, 0, 0), 0)], 2)


def test_point_arrangements_on_the_line():
    oracle = enumerate_faces_oracle([((1,), 0)], 1)
    assert oracle.all_sign_vectors == {(-1,), (0,), (1,)}
    two = enumerate_faces_oracle([((1,), 0), ((1,), 1)], 1)
    assert two.all_sign_vectors == {(-1, -1), (0, -1), (1, -1), (1, 0), (1, 1)}
    assert two.counts == (2, 3)


def test_oracle_budget():
    hs = [((1,), k) for k in range(9)]
    with pytest.raises(BudgetExceeded):
        enumerate_faces_oracle(hs, 1)


def test_subface_examples(axes):
    arr = build_arrangement(axes, 2)
    origin, quadrant = arr.face("00"), arr.face("++")
    assert is_subface(origin, origin)
    assert is_subface(origin, quadrant)
    assert not is_subface(arr.face("0+"), arr.face("--"))
    other = build_arrangement([((1, 0), 0)], 2)
    with pytest.raises(MalformedInput):
        is_subface(other.face("0"), quadrant)


def test_restriction_examples(axes):
    induced, chart = restrict_to_hyperplane(axes, axes[0])
    assert len(induced) == 1 and chart.dim == 1
    (pt,) = induced
    # the induced point is the origin
    assert chart.to_ambient([pt.offset / pt.normal[0]]) == (0, 0)

    space = [Hyperplane((1, 0, 0), 0), Hyperplane((0, 1, 0), 0), Hyperplane((0, 0, 1), 0)]
    induced, chart = restrict_to_hyperplane(space, space[2])
    assert len(induced) == 2
    for h, original in zip(induced, space):
        line = solve_affine_system([eq(h.normal, h.offset)], 2)
        for y in (line.at([0]), line.at([1])):
            x = chart.to_ambient(y)
            assert original.evaluate(x) == 0 and x[2] == 0

    with pytest.raises(DegenerateRestriction):
        restrict_to_hyperplane([((1, 0), 0), ((1, 0), 1)], ((1, 0), 0))
    with pytest.raises(MalformedInput):
        restrict_to_hyperplane([((1,), 0)], ((1,), 0))


def test_dump_lines(axes):
    lines = build_arrangement(axes, 2).dump().splitlines()
    assert len(lines) == 9
    assert "0;00;0,0" in lines
    assert lines == sorted(lines)


def test_sign_string_round_trip():
    assert str_to_signs(signs_to_str((1, 0, -1))) == (1, 0, -1)
    with pytest.raises(MalformedInput):
        str_to_signs("+x")


@settings(max_examples=60, deadline=None)
@given(hyperplane_sets())
def test_builder_matches_oracle(inst):
    d, hs = inst
    arr = build_arrangement(hs, d)
    oracle = enumerate_faces_oracle(hs, d)
    assert set(arr.faces) == oracle.all_sign_vectors
    assert face_counts(arr) == oracle.counts
    for k, vectors in oracle.sign_vectors.items():
        assert {f.signs for f in arr.faces_of_dim(k)} == vectors


@settings(max_examples=60, deadline=None)
@given(hyperplane_sets(max_n=6))
def test_witnesses_reproduce_signs(inst):
    d, hs = inst
    arr = build_arrangement(hs, d)
    for f in arr.faces.values():
        assert tuple(h.side(f.witness) for h in arr.hyperplanes) == f.signs


@settings(max_examples=40, deadline=None)
@given(hyperplane_sets(max_n=4))
def test_subface_is_a_partial_order(inst):
    d, hs = inst
    faces = list(build_arrangement(hs, d).faces.values())
    for f, g in itertools.product(faces, repeat=2):
        if is_subface(f, g) and is_subface(g, f):
            assert f == g
        if is_subface(f, g):
            assert f.dim <= g.dim
    for f, g, h in itertools.product(faces, repeat=3):
        if is_subface(f, g) and is_subface(g, h):
            assert is_subface(f, h)


@pytest.mark.parametrize("d,n,seed", [(1, 5, 1), (2, 5, 2), (2, 7, 3), (3, 5, 4), (3, 6, 5)])
def test_generic_counts_and_incidence(d, n, seed):
    hs = random_hyperplanes(GenConfig(seed=seed, n=n, d=d))
    arr = build_arrangement(hs, d)
    assert arr.general_position
    assert face_counts(arr) == simple_counts(n, d)
    cells = arr.cells
    for f in arr.faces.values():
        if f.dim < d:
            on = [c for c in cells if is_subface(f, c)]
            assert len(on) == 2 ** (d - f.dim)
            assert sorted(c.signs for c in on) == sorted(c.signs for c in arr.incident_cells(f))


def test_boundedness_in_the_plane():
    arr = build_arrangement([((1, 0), 0), ((0, 1), 0), ((1, 1), 1)], 2)
    bounded = arr.bounded()
    assert sum(bounded[c.signs] for c in arr.cells) == 1
    assert sum(bounded[e.signs] for e in arr.faces_of_dim(1)) == 3


def has_recession_ray(face, d):
    cone = []
    for h, s in zip(face.hyperplanes, face.signs):
        cone.append(eq(h.normal, 0) if s == 0 else ge([s * a for a in h.normal], 0))
    for j in range(d):
        for s in (1, -1):
            e = [0] * d
            e[j] = s
            if feasible(cone + [ge(e, 1)], d) is not None:
                return True
    return False


@settings(max_examples=40, deadline=None)
@given(hyperplane_sets(max_n=5))
def test_boundedness_matches_recession_cone(inst):
    d, hs = inst
    arr = build_arrangement(hs, d)
    bounded = arr.bounded()
    for f in arr.faces.values():
        assert bounded[f.signs] == (not has_recession_ray(f, d))
