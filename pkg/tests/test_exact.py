from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from zonelab.errors import MalformedInput
from zonelab.exact import (
    FALSE,
    TRUE,
    Relation,
    as_rational,
    constraint,
    eq,
    feasible,
    format_rational,
    ge,
    gt,
    le,
    lt,
    rank,
    solve_affine_system,
)


def fm_feasible(rows, dim):
    """Fourier-Motzkin on (coeffs, offset, kind) rows meaning a.x >= b (kind 'ge') or > b ('gt').

    Equalities arrive as two 'ge' rows.  Plain Fractions only, no shared code.
    """
    rows = [(tuple(Fraction(a) for a in c), Fraction(b), k) for c, b, k in rows]
    for v in range(dim):
        pos, neg, rest = [], [], []
        for c, b, k in rows:
            (pos if c[v] > 0 else neg if c[v] < 0 else rest).append((c, b, k))
        new = list(rest)
        for cp, bp, kp in pos:
            for cn, bn, kn in neg:
                lp, ln = -cn[v], cp[v]
                c = tuple(lp * x + ln * y for x, y in zip(cp, cn))
                new.append((c, lp * bp + ln * bn, "gt" if "gt" in (kp, kn) else "ge"))
        rows = new
    return all((0 > b) if k == "gt" else (0 >= b) for _, b, k in rows)


def to_rows(cons):
    rows = []
    for c in cons:
        a, b = c.coefficients, c.offset
        if c.relation is Relation.EQ:
            rows += [(a, b, "ge"), (tuple(-x for x in a), -b, "ge")]
        else:
            rows.append((a, b, "ge" if c.relation is Relation.GE else "gt"))
    return rows


coeff = st.integers(-4, 4)


@st.composite
def systems(draw, max_dim=3, max_rows=6):
    dim = draw(st.integers(1, max_dim))
    cons = []
    for _ in range(draw(st.integers(0, max_rows))):
        a = draw(st.lists(coeff, min_size=dim, max_size=dim))
        if not any(a):
            a[0] = 1
        rel = draw(st.sampled_from([Relation.EQ, Relation.GE, Relation.GE, Relation.GT, Relation.GT]))
        cons.append(constraint(a, rel, draw(st.integers(-6, 6))))
    return dim, cons


# -- scalars and constraints --------------------------------------------------

def test_as_rational_forms():
    assert as_rational("3/6") == gmpy2.mpq(1, 2)
    assert as_rational(Fraction(-2, 4)) == gmpy2.mpq(-1, 2)
    assert as_rational(7) == 7
    assert format_rational(gmpy2.mpq(6, 4)) == "3/2"
    assert format_rational(5) == "5"
    for bad in ("1/0", "x", True, None):
        with pytest.raises(MalformedInput):
            as_rational(bad)


def test_zero_rows_become_sentinels():
    assert eq([0, 0], 0) is TRUE
    assert eq([0, 0], 1) is FALSE
    assert ge([0], -1) is TRUE
    assert gt([0], 0) is FALSE
    assert le([0, 0], 0) is TRUE


def test_le_and_lt_flip_sign():
    c = le([1, 2], 3)
    assert c.relation is Relation.GE and c.coefficients == (-1, -2) and c.offset == -3
    assert lt([1], 0).relation is Relation.GT


def test_scaled_needs_positive_factor():
    c = gt([1, -1], 2)
    assert c.scaled(3).coefficients == (3, -3)
    with pytest.raises(MalformedInput):
        c.scaled(-1)


# -- affine systems -----------------------------------------------------------

def test_axes_meet_at_origin():
    sol = solve_affine_system([eq([1, 0], 0), eq([0, 1], 0)], 2)
    assert sol.solution_space_dim == 0
    assert sol.particular_point == (0, 0)


def test_parallel_contradiction():
    assert solve_affine_system([eq([1, 1], 1), eq([1, 1], 2)], 2) is None


def test_line_in_space_contains_known_point():
    sol = solve_affine_system([eq([1, 1, 1], 3), eq([1, -1, 0], 1)], 3)
    assert sol.solution_space_dim == 1
    (u,) = sol.basis
    p = sol.particular_point
    # (2,1,0) = p + t u for some t
    t = next((2 - p[k]) / u[k] for k in range(3) if u[k])
    assert sol.at([t]) == (2, 1, 0)


def test_rank():
    assert rank([(1, 0), (0, 1), (1, 1)]) == 2
    assert rank([(2, 4), (1, 2)]) == 1
    assert rank([]) == 0


@given(st.integers(1, 4), st.data())
def test_generic_equations_cut_expected_dimension(d, data):
    j = data.draw(st.integers(0, d))
    rows = [data.draw(st.lists(st.integers(-5, 5), min_size=d, max_size=d)) for _ in range(j)]
    sol = solve_affine_system([eq(r, data.draw(st.integers(-5, 5))) for r in rows if any(r)], d)
    rows = [r for r in rows if any(r)]
    if rank(rows) == len(rows):
        assert sol is not None and sol.solution_space_dim == d - len(rows)


# -- feasibility --------------------------------------------------------------

def test_open_interval():
    w = feasible([gt([1], 0), lt([1], 1)], 1)
    assert w is not None and 0 < w[0] < 1


def test_strict_against_closed():
    assert feasible([gt([1], 0), le([1], 0)], 1) is None


def test_strictness_forces_infeasibility():
    cons = [ge([1, 0], 1), ge([0, 1], 1), le([1, 1], 2), gt([1, -1], 0)]
    assert feasible(cons, 2) is None
    assert feasible(cons[:3], 2) == (1, 1)


def test_empty_system_and_sentinels():
    assert feasible([], 2) is not None
    assert feasible([TRUE], 1) is not None
    assert feasible([FALSE, ge([1], 0)], 1) is None


def test_unbounded_direction_is_fine():
    w = feasible([gt([1, 1], 100), gt([1, -1], 100)], 2)
    assert w[0] + w[1] > 100 and w[0] - w[1] > 100


def test_dimension_mismatch_is_rejected():
    with pytest.raises(MalformedInput):
        feasible([ge([1, 0], 0)], 3)


@settings(max_examples=300, deadline=None)
@given(systems())
def test_matches_fourier_motzkin(system):
    dim, cons = system
    w = feasible(cons, dim)
    assert (w is not None) == fm_feasible(to_rows(cons), dim)
    if w is not None:
        assert all(c.holds_at(w) for c in cons)


@settings(max_examples=150, deadline=None)
@given(systems(), st.data())
def test_superset_of_infeasible_is_infeasible(system, data):
    dim, cons = system
    if feasible(cons, dim) is not None:
        return
    more = []
    for _ in range(data.draw(st.integers(1, 3))):
        a = data.draw(st.lists(coeff, min_size=dim, max_size=dim).filter(any))
        more.append(gt(a, data.draw(st.integers(-6, 6))))
    assert feasible(cons + more, dim) is None


@settings(max_examples=150, deadline=None)
@given(systems(), st.lists(st.fractions(min_value=Fraction(1, 7), max_value=9), min_size=6, max_size=6))
def test_positive_scaling_keeps_verdict(system, factors):
    dim, cons = system
    scaled = [c.scaled(f) for c, f in zip(cons, factors)]
    assert (feasible(cons, dim) is None) == (feasible(scaled, dim) is None)
