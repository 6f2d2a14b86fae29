"""Exact rational arithmetic, affine systems and linear feasibility.

Every geometric predicate in zonelab reduces to the two operations here:
:func:`solve_affine_system` and :func:`feasible`.  Scalars are ``gmpy2.mpq``
rationals; nothing in this module touches floating point.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2

from .errors import MalformedInput

Rational = type(gmpy2.mpq(0))
ZERO = gmpy2.mpq(0)
ONE = gmpy2.mpq(1)


def as_rational(value) -> Rational:
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to an exact rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise MalformedInput(f"not a rational: {value!r}")
    if isinstance(value, int):
        return gmpy2.mpq(value)
    if isinstance(value, Fraction):
        return gmpy2.mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        try:
            num, _, den = text.partition("/")
            if den:
                return gmpy2.mpq(int(num), int(den))
            return gmpy2.mpq(int(num))
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"not a rational: {value!r}") from exc
    if isinstance(value, float):
        # exact binary value; only used for convenience in interactive work
        return gmpy2.mpq(value)
    raise MalformedInput(f"not a rational: {value!r}")


def as_vector(values: Iterable) -> tuple:
    return tuple(as_rational(v) for v in values)


def format_rational(q) -> str:
    """Serialize as ``"p/q"`` (integers as ``"p"``)."""
    return str(as_rational(q))


def dot(a: Sequence, b: Sequence):
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def sign(q) -> int:
    return (q > 0) - (q < 0)


class Relation(enum.Enum):
    EQ = "="
    GE = ">="
    GT = ">"


@dataclass(frozen=True)
class LinearConstraint:
    """``coefficients . x  (=|>=|>)  offset``."""

    coefficients: tuple
    offset: Rational
    relation: Relation

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    def holds_at(self, x: Sequence) -> bool:
        value = dot(self.coefficients, x)
        if self.relation is Relation.EQ:
            return value == self.offset
        if self.relation is Relation.GE:
            return value >= self.offset
        return value > self.offset

    def scaled(self, factor) -> "LinearConstraint":
        factor = as_rational(factor)
        if factor <= 0:
            raise MalformedInput("constraints may only be scaled by a positive factor")
        return LinearConstraint(
            tuple(c * factor for c in self.coefficients), self.offset * factor, self.relation
        )

    def __str__(self):
        lhs = " + ".join(f"{c}*x{i}" for i, c in enumerate(self.coefficients) if c) or "0"
        return f"{lhs} {self.relation.value} {self.offset}"


@dataclass(frozen=True)
class TrivialConstraint:
    """Sentinel for a constraint whose coefficient vector is zero."""

    holds: bool

    def holds_at(self, x) -> bool:
        return self.holds

    def __str__(self):
        return "TRUE" if self.holds else "FALSE"


TRUE = TrivialConstraint(True)
FALSE = TrivialConstraint(False)


def constraint(coefficients, relation, offset):
    """Build a constraint, normalizing all-zero coefficient vectors to TRUE/FALSE."""
    coefficients = as_vector(coefficients)
    offset = as_rational(offset)
    if isinstance(relation, str):
        relation = {"=": Relation.EQ, "==": Relation.EQ, ">=": Relation.GE, ">": Relation.GT,
                    "<=": "<=", "<": "<"}[relation]
    if relation == "<=":
        coefficients, offset, relation = tuple(-c for c in coefficients), -offset, Relation.GE
    elif relation == "<":
        coefficients, offset, relation = tuple(-c for c in coefficients), -offset, Relation.GT
    if not any(coefficients):
        if relation is Relation.EQ:
            return TRUE if offset == 0 else FALSE
        if relation is Relation.GE:
            return TRUE if offset <= 0 else FALSE
        return TRUE if offset < 0 else FALSE
    return LinearConstraint(coefficients, offset, relation)


def eq(coefficients, offset):
    return constraint(coefficients, Relation.EQ, offset)


def ge(coefficients, offset):
    return constraint(coefficients, Relation.GE, offset)


def gt(coefficients, offset):
    return constraint(coefficients, Relation.GT, offset)


def le(coefficients, offset):
    return constraint(coefficients, "<=", offset)


def lt(coefficients, offset):
    return constraint(coefficients, "<", offset)


# ---------------------------------------------------------------------------
# affine systems


@dataclass(frozen=True)
class AffineSolution:
    """Solution set ``point + span(basis)`` of a consistent linear system."""

    dim: int
    point: tuple
    basis: tuple

    def at(self, params: Sequence) -> tuple:
        x = list(self.point)
        for t, b in zip(params, self.basis):
            if t:
                for k, bk in enumerate(b):
                    if bk:
                        x[k] += t * bk
        return tuple(x)

    @property
    def solution_space_dim(self) -> int:
        return self.dim

    @property
    def particular_point(self) -> tuple:
        return self.point


def _check_dims(constraints, dim):
    if dim < 0:
        raise MalformedInput(f"negative dimension {dim}")
    for c in constraints:
        if isinstance(c, TrivialConstraint):
            continue
        if not isinstance(c, LinearConstraint):
            raise MalformedInput(f"not a constraint: {c!r}")
        if c.dim != dim:
            raise MalformedInput(f"constraint of length {c.dim} in dimension {dim}")


def _rref(rows, ncols):
    """In-place reduced row echelon form over the first ``ncols`` columns.

    Returns the pivot column of each nonzero row.
    """
    pivots = []
    r = 0
    for col in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return pivots


def solve_affine_system(equalities: Sequence, dim: int) -> AffineSolution | None:
    """Exact solution set of a list of EQ constraints in R^dim, or None if empty."""
    _check_dims(equalities, dim)
    rows = []
    for c in equalities:
        if isinstance(c, TrivialConstraint):
            if not c.holds:
                return None
            continue
        if c.relation is not Relation.EQ:
            raise MalformedInput(f"solve_affine_system expects equalities, got {c}")
        rows.append(list(c.coefficients) + [c.offset])
    pivots = _rref(rows, dim)
    for row in rows[len(pivots):]:
        if row[dim]:
            return None
    point = [ZERO] * dim
    for r, col in enumerate(pivots):
        point[col] = rows[r][dim]
    pivot_set = set(pivots)
    basis = []
    for free in range(dim):
        if free in pivot_set:
            continue
        v = [ZERO] * dim
        v[free] = ONE
        for r, col in enumerate(pivots):
            v[col] = -rows[r][free]
        basis.append(tuple(v))
    return AffineSolution(dim - len(pivots), tuple(point), tuple(basis))


def rank(vectors: Sequence[Sequence]) -> int:
    vectors = [list(map(as_rational, v)) for v in vectors]
    if not vectors:
        return 0
    return len(_rref(vectors, len(vectors[0])))


# ---------------------------------------------------------------------------
# linear feasibility


class _Tableau:
    """Slack-form dictionary for ``max c.z  s.t.  A z <= b, z >= 0`` (Bland's rule)."""

    def __init__(self, A, b, c):
        self.m = len(A)
        self.nvars = len(c)
        self.N = list(range(self.nvars))
        self.B = list(range(self.nvars, self.nvars + self.m))
        self.rows = [[b[i]] + list(A[i]) for i in range(self.m)]
        self.obj = [ZERO] + list(c)

    def pivot(self, l, e):
        rows = self.rows
        row_l = rows[l]
        inv = 1 / row_l[1 + e]
        new_l = [v * inv for v in row_l]
        new_l[1 + e] = inv
        rows[l] = new_l
        width = len(new_l)
        for i, row in enumerate(rows):
            if i == l:
                continue
            f = row[1 + e]
            if not f:
                continue
            for j in range(width):
                if j != 1 + e and new_l[j]:
                    row[j] -= f * new_l[j]
            row[1 + e] = -f * inv
        f = self.obj[1 + e]
        if f:
            obj = self.obj
            obj[0] += f * new_l[0]
            for j in range(1, width):
                if j != 1 + e and new_l[j]:
                    obj[j] -= f * new_l[j]
            obj[1 + e] = -f * inv
        self.N[e], self.B[l] = self.B[l], self.N[e]

    def optimize(self):
        while True:
            entering = None
            for j, cj in enumerate(self.obj[1:]):
                if cj > 0 and (entering is None or self.N[j] < self.N[entering]):
                    entering = j
            if entering is None:
                return
            leaving, best = None, None
            for i, row in enumerate(self.rows):
                a = row[1 + entering]
                if a > 0:
                    ratio = row[0] / a
                    if best is None or ratio < best or (ratio == best and self.B[i] < self.B[leaving]):
                        leaving, best = i, ratio
            if leaving is None:
                raise ArithmeticError("unbounded linear program")
            self.pivot(leaving, entering)

    def values(self):
        z = [ZERO] * (self.nvars + self.m + 1)
        for i, var in enumerate(self.B):
            z[var] = self.rows[i][0]
        return z


def _maximize(A, b, c):
    """Exact simplex; returns ``(value, z)`` or None when infeasible."""
    t = _Tableau(A, b, c)
    if t.m and min(b) < 0:
        aux = t.nvars + t.m
        t.N.append(aux)
        for row in t.rows:
            row.append(-ONE)
        saved = t.obj
        t.obj = [ZERO] * (len(t.N) + 1)
        t.obj[-1] = -ONE
        t.pivot(min(range(t.m), key=lambda i: (b[i], i)), len(t.N) - 1)
        t.optimize()
        if t.obj[0] < 0:
            return None
        if aux in t.B:
            l = t.B.index(aux)
            e = next((j for j, v in enumerate(t.rows[l][1:]) if v), None)
            if e is None:
                del t.rows[l], t.B[l]
                t.m -= 1
            else:
                t.pivot(l, e)
        col = t.N.index(aux)
        del t.N[col]
        for row in t.rows:
            del row[1 + col]
        obj = [ZERO] * (len(t.N) + 1)
        for var, cv in enumerate(saved[1:]):
            if not cv:
                continue
            if var in t.N:
                obj[1 + t.N.index(var)] += cv
            else:
                row = t.rows[t.B.index(var)]
                obj[0] += cv * row[0]
                for j in range(len(t.N)):
                    obj[1 + j] -= cv * row[1 + j]
        t.obj = obj
    t.optimize()
    return t.obj[0], t.values()[: t.nvars]


def _feasible_interval(rows):
    """1-D case: rows are (a, b, strict) meaning a*y >= b or a*y > b with a != 0."""
    lo = hi = None
    lo_open = hi_open = False
    for a, b, strict in rows:
        bound = b / a
        if a > 0:
            if lo is None or bound > lo:
                lo, lo_open = bound, strict
            elif bound == lo:
                lo_open = lo_open or strict
        else:
            if hi is None or bound < hi:
                hi, hi_open = bound, strict
            elif bound == hi:
                hi_open = hi_open or strict
    if lo is None and hi is None:
        return ZERO
    if hi is None:
        return lo + 1 if lo_open else lo
    if lo is None:
        return hi - 1 if hi_open else hi
    if lo < hi:
        return (lo + hi) / 2
    if lo == hi and not lo_open and not hi_open:
        return lo
    return None


def feasible(constraints: Sequence, dim: int) -> tuple | None:
    """Decide exactly whether a mixed EQ/GE/GT system has a solution in R^dim.

    Returns a witness satisfying every constraint (strict ones strictly), or
    None.  Strict inequalities are handled by maximizing a shared slack ``t``
    over ``a.x - t >= b`` with ``t <= 1``; the system is strictly feasible iff
    the optimum is positive.
    """
    _check_dims(constraints, dim)
    equalities, inequalities = [], []
    for c in constraints:
        if isinstance(c, TrivialConstraint):
            if not c.holds:
                return None
        elif c.relation is Relation.EQ:
            equalities.append(c)
        else:
            inequalities.append(c)

    if equalities:
        flat = solve_affine_system(equalities, dim)
        if flat is None:
            return None
        point, basis = flat.point, flat.basis
    else:
        point, basis = (ZERO,) * dim, None
    k = dim if basis is None else len(basis)

    rows = []  # (coefficients in flat coordinates, offset, strict)
    for c in inequalities:
        if basis is None:
            coeffs, off = c.coefficients, c.offset
        else:
            coeffs = tuple(dot(c.coefficients, b) for b in basis)
            off = c.offset - dot(c.coefficients, point)
        strict = c.relation is Relation.GT
        if not any(coeffs):
            if off > 0 or (strict and off == 0):
                return None
            continue
        rows.append((coeffs, off, strict))

    if not rows:
        return tuple(point)
    if k == 1:
        y = _feasible_interval([(r[0][0], r[1], r[2]) for r in rows])
        if y is None:
            return None
        return _lift(point, basis, (y,), dim)

    # variables: y = u - v (2k columns), then t if any row is strict
    has_strict = any(r[2] for r in rows)
    A, b = [], []
    for coeffs, off, strict in rows:
        row = [-a for a in coeffs] + list(coeffs)
        if has_strict:
            row.append(ONE if strict else ZERO)
        A.append(row)
        b.append(-off)
    if has_strict:
        A.append([ZERO] * (2 * k) + [ONE])
        b.append(ONE)
        c = [ZERO] * (2 * k) + [ONE]
    else:
        c = [ZERO] * (2 * k)
    result = _maximize(A, b, c)
    if result is None:
        return None
    value, z = result
    if has_strict and value <= 0:
        return None
    y = tuple(z[j] - z[k + j] for j in range(k))
    return _lift(point, basis, y, dim)


def _lift(point, basis, y, dim):
    if basis is None:
        return tuple(y)
    x = list(point)
    for t, b in zip(y, basis):
        if t:
            for i in range(dim):
                if b[i]:
                    x[i] += t * b[i]
    return tuple(x)
