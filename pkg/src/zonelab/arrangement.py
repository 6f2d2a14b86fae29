"""Face lattice of a hyperplane arrangement, keyed by sign vectors.

Faces are built flat by flat.  Every flat spanned by at most ``d``
hyperplanes is solved exactly; the faces lying in a k-flat are the cells of
the induced arrangement inside it, and each of those is reached by stepping
off one of its (k-1)-dimensional boundary faces to either side.  Witness
points are constructed exactly, so no feasibility solve is needed.

:func:`enumerate_faces_oracle` is the independent check: it sweeps
``{-,0,+}^n`` and asks the LP solver about every vector.
"""
from __future__ import annotations

import itertools
from math import comb
from dataclasses import dataclass, field
from typing import Sequence

from .errors import BudgetExceeded, DegenerateRestriction, MalformedInput
from .exact import (
    ONE,
    ZERO,
    AffineSolution,
    as_rational,
    as_vector,
    dot,
    eq,
    feasible,
    format_rational,
    ge,
    gt,
    le,
    lt,
    sign,
    solve_affine_system,
)

MINUS, ZERO_SIGN, PLUS = -1, 0, 1
_SIGN_CHARS = {-1: "-", 0: "0", 1: "+"}
_CHAR_SIGNS = {v: k for k, v in _SIGN_CHARS.items()}


def _canonical(normal, offset):
    normal = as_vector(normal)
    offset = as_rational(offset)
    if not any(normal):
        raise MalformedInput("hyperplane normal must be nonzero")
    values = normal + (offset,)
    lcm = 1
    for v in values:
        den = int(v.denominator)
        lcm = lcm * den // _gcd(lcm, den)
    ints = [int(v * lcm) for v in values]
    g = 0
    for v in ints:
        g = _gcd(g, abs(v))
    lead = next(v for v in ints[:-1] if v)
    if lead < 0:
        g = -g
    ints = [as_rational(v // g) for v in ints]
    return tuple(ints[:-1]), ints[-1]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class Hyperplane:
    """The set ``{x : normal . x = offset}``, stored in canonical integer form.

    The first nonzero normal coordinate is positive and ``(normal, offset)``
    are coprime integers, so two equal sets compare equal.
    """

    normal: tuple
    offset: object

    def __init__(self, normal, offset):
        normal, offset = _canonical(normal, offset)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", offset)

    @property
    def dim(self) -> int:
        return len(self.normal)

    def evaluate(self, x):
        return dot(self.normal, x) - self.offset

    def side(self, x) -> int:
        return sign(self.evaluate(x))

    def __str__(self):
        terms = " + ".join(f"{format_rational(a)}*x{i}" for i, a in enumerate(self.normal) if a)
        return f"{terms} = {format_rational(self.offset)}"


def signs_to_str(signs) -> str:
    return "".join(_SIGN_CHARS[s] for s in signs)


def str_to_signs(text: str) -> tuple:
    try:
        return tuple(_CHAR_SIGNS[c] for c in text)
    except KeyError as exc:
        raise MalformedInput(f"bad sign vector {text!r}") from exc


@dataclass(frozen=True)
class Flat:
    """Intersection of the hyperplanes in ``zero_set``, as ``point + span(basis)``."""

    zero_set: frozenset
    point: tuple
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def at(self, params) -> tuple:
        return AffineSolution(self.dim, self.point, self.basis).at(params)


@dataclass(frozen=True)
class Face:
    signs: tuple
    dim: int
    witness: tuple
    flat: Flat = field(repr=False, compare=False)
    hyperplanes: tuple = field(repr=False, compare=False)

    @property
    def zero_set(self) -> frozenset:
        return self.flat.zero_set

    @property
    def is_cell(self) -> bool:
        return ZERO_SIGN not in self.signs

    @property
    def flat_equations(self) -> list:
        return [eq(self.hyperplanes[i].normal, self.hyperplanes[i].offset)
                for i in sorted(self.zero_set)]

    def constraints(self, closed: bool = False) -> list:
        """The face as a constraint system (its closure when ``closed``)."""
        out = []
        for h, s in zip(self.hyperplanes, self.signs):
            if s == 0:
                out.append(eq(h.normal, h.offset))
            elif s > 0:
                out.append((ge if closed else gt)(h.normal, h.offset))
            else:
                out.append((le if closed else lt)(h.normal, h.offset))
        return out

    def __str__(self):
        return f"{self.dim};{signs_to_str(self.signs)}"


@dataclass
class Arrangement:
    hyperplanes: tuple
    dim: int
    faces: dict  # signs -> Face
    boundary: dict  # signs -> tuple of signs of the (k-1)-faces in its closure
    flats: dict  # zero_set -> Flat
    general_position: bool

    @property
    def n(self) -> int:
        return len(self.hyperplanes)

    def faces_of_dim(self, k: int) -> list:
        return [f for f in self.faces.values() if f.dim == k]

    @property
    def cells(self) -> list:
        return self.faces_of_dim(self.dim)

    def face(self, signs) -> Face:
        if isinstance(signs, str):
            signs = str_to_signs(signs)
        return self.faces[tuple(signs)]

    def incident_cells(self, f: Face) -> list:
        """Cells whose closure contains ``f`` (conformal completions of its zeros)."""
        zeros = [i for i, s in enumerate(f.signs) if s == 0]
        out = []
        for choice in itertools.product((MINUS, PLUS), repeat=len(zeros)):
            signs = list(f.signs)
            for i, s in zip(zeros, choice):
                signs[i] = s
            cell = self.faces.get(tuple(signs))
            if cell is not None:
                out.append(cell)
        return out

    def bounded(self) -> dict:
        """signs -> whether the face is bounded.

        A vertex is bounded; an edge is bounded iff it has two vertices; a
        face of dimension >= 2 is bounded iff it has boundary faces and all
        of them are bounded (an unbounded convex set of dimension >= 2 that
        is not its whole flat has unbounded relative boundary).
        """
        out = {}
        for f in sorted(self.faces.values(), key=lambda f: f.dim):
            kids = self.boundary[f.signs]
            if f.dim == 0:
                out[f.signs] = True
            elif f.dim == 1:
                out[f.signs] = len(kids) == 2
            else:
                out[f.signs] = bool(kids) and all(out[g] for g in kids)
        return out

    def dump(self) -> str:
        lines = sorted(
            f"{f.dim};{signs_to_str(f.signs)};{','.join(format_rational(x) for x in f.witness)}"
            for f in self.faces.values()
        )
        return "".join(line + "\n" for line in lines)


def _validate(hyperplanes, dim):
    hs = []
    for h in hyperplanes:
        if not isinstance(h, Hyperplane):
            h = Hyperplane(*h)
        if h.dim != dim:
            raise MalformedInput(f"hyperplane {h} does not live in R^{dim}")
        hs.append(h)
    if len(set(hs)) != len(hs):
        raise MalformedInput("duplicate hyperplanes")
    return tuple(hs)


def _flat_closure(hs, sol: AffineSolution) -> frozenset:
    return frozenset(
        i for i, h in enumerate(hs)
        if h.evaluate(sol.point) == 0 and all(dot(h.normal, b) == 0 for b in sol.basis)
    )


def enumerate_flats(hyperplanes: Sequence[Hyperplane], dim: int) -> dict:
    """All nonempty intersections of subsets of ``hyperplanes``, keyed by zero set."""
    hs = tuple(hyperplanes)
    flats = {}
    for size in range(0, min(dim, len(hs)) + 1):
        for subset in itertools.combinations(range(len(hs)), size):
            sol = solve_affine_system([eq(hs[i].normal, hs[i].offset) for i in subset], dim)
            if sol is None or sol.dim != dim - size:
                # dependent subsets span flats already reached by a smaller subset
                continue
            z = _flat_closure(hs, sol)
            if z not in flats:
                flats[z] = Flat(z, sol.point, sol.basis)
    return flats


def build_arrangement(hyperplanes: Sequence, dim: int) -> Arrangement:
    """Every nonempty face of A(H), each with an exact relative-interior witness."""
    if dim < 1:
        raise MalformedInput("dimension must be at least 1")
    hs = _validate(hyperplanes, dim)
    n = len(hs)
    flats = enumerate_flats(hs, dim)
    faces: dict = {}
    boundary: dict = {}
    by_dim: dict = {k: [] for k in range(dim + 1)}

    for flat in sorted(flats.values(), key=lambda f: (f.dim, sorted(f.zero_set))):
        k = flat.dim
        z = flat.zero_set
        if k == 0:
            signs = tuple(0 if i in z else h.side(flat.point) for i, h in enumerate(hs))
            _add(faces, by_dim, boundary, Face(signs, 0, flat.point, flat, hs), None)
            continue
        children = [g for g in by_dim[k - 1] if z < g.zero_set]
        if not children:
            # no hyperplane crosses this flat: the whole flat is one face
            signs = tuple(0 if i in z else h.side(flat.point) for i, h in enumerate(hs))
            _add(faces, by_dim, boundary, Face(signs, k, flat.point, flat, hs), None)
            continue
        for g in children:
            new = sorted(g.zero_set - z)
            u = next(b for b in flat.basis if dot(hs[new[0]].normal, b) != 0)
            step = None
            for i, h in enumerate(hs):
                if g.signs[i] == 0:
                    continue
                slope = dot(h.normal, u)
                if slope:
                    room = abs(h.evaluate(g.witness) / slope)
                    if step is None or room < step:
                        step = room
            step = ONE if step is None else step / 2
            for direction in (PLUS, MINUS):
                signs = list(g.signs)
                for i in new:
                    signs[i] = direction * sign(dot(hs[i].normal, u))
                signs = tuple(signs)
                if signs in faces:
                    boundary[signs].append(g.signs)
                    continue
                w = tuple(x + direction * step * ui for x, ui in zip(g.witness, u))
                _add(faces, by_dim, boundary, Face(signs, k, w, flat, hs), g.signs)

    for key in boundary:
        boundary[key] = tuple(boundary[key])
    return Arrangement(hs, dim, faces, boundary, flats, _simple(hs, flats, dim))


def _add(faces, by_dim, boundary, face, child):
    faces[face.signs] = face
    by_dim[face.dim].append(face)
    boundary[face.signs] = [child] if child is not None else []


def _simple(hs, flats, dim) -> bool:
    """Whether every flat spanned by j hyperplanes has dimension d - j and contains no others."""
    n = len(hs)
    for z, flat in flats.items():
        if flat.dim != dim - len(z):
            return False
    # every j-subset (j <= d) must meet in a flat
    expected = sum(_binom(n, j) for j in range(min(n, dim) + 1))
    return len(flats) == expected


def _binom(n, k):
    return comb(n, k) if 0 <= k <= n else 0


def is_subface(f: Face, g: Face) -> bool:
    """True iff ``f`` lies in the closure of ``g``: sign vectors agree wherever f is nonzero."""
    if f.hyperplanes is not g.hyperplanes and f.hyperplanes != g.hyperplanes:
        raise MalformedInput("faces come from different arrangements")
    return all(a == 0 or a == b for a, b in zip(f.signs, g.signs))


def face_counts(arr: Arrangement) -> tuple:
    counts = [0] * (arr.dim + 1)
    for f in arr.faces.values():
        counts[f.dim] += 1
    return tuple(counts)


# ---------------------------------------------------------------------------
# restriction to a hyperplane


@dataclass(frozen=True)
class Chart:
    """Affine parametrization ``y -> origin + sum_j y_j basis_j`` of a flat."""

    origin: tuple
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.origin)

    def to_ambient(self, y) -> tuple:
        return AffineSolution(self.dim, self.origin, self.basis).at(as_vector(y))

    def pull_back(self, normal, offset):
        """Rewrite ``normal . x (rel) offset`` in chart coordinates."""
        return (tuple(dot(normal, b) for b in self.basis),
                as_rational(offset) - dot(normal, self.origin))

    def to_chart(self, x) -> tuple:
        """Coordinates of an ambient point lying on the flat."""
        x = as_vector(x)
        diff = [a - b for a, b in zip(x, self.origin)]
        rows = [[b[i] for b in self.basis] + [diff[i]] for i in range(self.ambient_dim)]
        cons = [eq(r[:-1], r[-1]) for r in rows]
        sol = solve_affine_system(cons, self.dim)
        if sol is None:
            raise MalformedInput("point is not on the chart's flat")
        return sol.point


def chart_for(h: Hyperplane) -> Chart:
    sol = solve_affine_system([eq(h.normal, h.offset)], h.dim)
    return Chart(sol.point, sol.basis)


def restrict_to_hyperplane(arr_input: Sequence, h) -> tuple:
    """The induced (d-1)-dimensional arrangement ``{h' ∩ h : h' != h}`` and its chart.

    Returns ``(induced_hyperplanes, chart)``; the induced list keeps the order
    of ``arr_input`` with ``h`` removed.
    """
    if not isinstance(h, Hyperplane):
        h = Hyperplane(*h)
    hs = [x if isinstance(x, Hyperplane) else Hyperplane(*x) for x in arr_input]
    if h not in hs:
        raise MalformedInput("restriction hyperplane is not part of the arrangement")
    if h.dim < 2:
        raise MalformedInput("cannot restrict a 1-dimensional arrangement")
    chart = chart_for(h)
    induced = []
    for other in hs:
        if other == h:
            continue
        normal, offset = chart.pull_back(other.normal, other.offset)
        if not any(normal):
            raise DegenerateRestriction(f"{other} is parallel to {h}")
        induced.append(Hyperplane(normal, offset))
    if len(set(induced)) != len(induced):
        raise DegenerateRestriction(f"two hyperplanes meet {h} in the same flat")
    return induced, chart


# ---------------------------------------------------------------------------
# brute-force oracle

ORACLE_LIMIT = 8


@dataclass
class OracleResult:
    counts: tuple
    sign_vectors: dict  # dim -> set of sign tuples

    @property
    def all_sign_vectors(self) -> set:
        return set().union(*self.sign_vectors.values()) if self.sign_vectors else set()


def enumerate_faces_oracle(hyperplanes: Sequence, dim: int) -> OracleResult:
    """Exhaustive realizability sweep over ``{-,0,+}^n`` using only the LP solver.

    Prefixes that are already infeasible are pruned, which never drops a
    realizable vector.
    """
    hs = [h if isinstance(h, Hyperplane) else Hyperplane(*h) for h in hyperplanes]
    if len(hs) > ORACLE_LIMIT:
        raise BudgetExceeded(f"oracle sweep limited to n <= {ORACLE_LIMIT}")
    found: dict = {k: set() for k in range(dim + 1)}

    def rec(prefix, cons):
        if len(prefix) == len(hs):
            zeros = [c for c in cons if getattr(c, "relation", None) is not None
                     and c.relation.name == "EQ"]
            sol = solve_affine_system(zeros, dim)
            found[sol.dim].add(tuple(prefix))
            return
        h = hs[len(prefix)]
        for s, make in ((MINUS, lt), (ZERO_SIGN, eq), (PLUS, gt)):
            c = make(h.normal, h.offset)
            if feasible(cons + [c], dim) is not None:
                rec(prefix + [s], cons + [c])

    rec([], [])
    counts = tuple(len(found[k]) for k in range(dim + 1))
    return OracleResult(counts, found)
