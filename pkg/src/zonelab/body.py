"""Polyhedral convex bodies and the classification of arrangement faces against them."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .arrangement import Arrangement, Chart, Face, Hyperplane, enumerate_flats
from .errors import MalformedInput
from .exact import (
    LinearConstraint,
    Relation,
    TrivialConstraint,
    as_rational,
    as_vector,
    constraint,
    dot,
    eq,
    feasible,
    format_rational,
    ge,
    gt,
    le,
    rank,
    solve_affine_system,
)


class FaceClass(enum.Enum):
    OUTER = "outer"
    CROSSING = "crossing"
    INNER = "inner"


class ConvexBody:
    """K = {x : c_j . x >= d_j for all j}, a closed (possibly unbounded) polyhedron.

    Halfspaces may be given as ``(c, d)`` pairs or as GE constraints.  A
    halfspace with zero normal is folded away at construction: a true one is
    dropped, a false one makes the body empty.
    """

    def __init__(self, halfspaces: Sequence = (), dim: int | None = None):
        cons = []
        always_false = False
        for hs in halfspaces:
            if isinstance(hs, (LinearConstraint, TrivialConstraint)):
                c = hs
            else:
                normal, offset = hs
                c = ge(normal, offset)
            if isinstance(c, TrivialConstraint):
                always_false |= not c.holds
                continue
            if c.relation is not Relation.GE:
                raise MalformedInput("convex body halfspaces must be closed (>=)")
            if dim is None:
                dim = c.dim
            elif c.dim != dim:
                raise MalformedInput(f"halfspace of length {c.dim} in dimension {dim}")
            cons.append(c)
        if dim is None:
            raise MalformedInput("dimension of an unconstrained body must be given")
        self.dim = dim
        self.halfspaces = tuple(cons)
        self._trivially_empty = always_false
        self._witness = None if always_false else feasible(self.halfspaces, dim)
        self._bounded = None

    @property
    def ambient_dim(self) -> int:
        return self.dim

    @property
    def is_empty(self) -> bool:
        return self._witness is None

    @property
    def witness(self):
        return self._witness

    @property
    def is_bounded(self) -> bool:
        """True for the empty body; otherwise no nonzero ray stays inside K."""
        if self._bounded is None:
            cone = [ge(c.coefficients, 0) for c in self.halfspaces]
            self._bounded = self.is_empty or not any(
                feasible(cone + [ge([s if k == j else 0 for k in range(self.dim)], 1)],
                         self.dim) is not None
                for j in range(self.dim) for s in (1, -1))
        return self._bounded

    @classmethod
    def box(cls, lower: Sequence, upper: Sequence) -> "ConvexBody":
        lower, upper = as_vector(lower), as_vector(upper)
        d = len(lower)
        halfspaces = []
        for i in range(d):
            e = [0] * d
            e[i] = 1
            halfspaces.append((e, lower[i]))
            halfspaces.append(([-x for x in e], -upper[i]))
        return cls(halfspaces, d)

    def contains(self, x) -> bool:
        x = as_vector(x)
        return not self.is_empty and all(c.holds_at(x) for c in self.halfspaces)

    def in_interior(self, x) -> bool:
        x = as_vector(x)
        return not self.is_empty and all(dot(c.coefficients, x) > c.offset for c in self.halfspaces)

    def interior_constraints(self) -> list:
        return [gt(c.coefficients, c.offset) for c in self.halfspaces]

    def __repr__(self):
        body = "; ".join(str(c) for c in self.halfspaces)
        return f"ConvexBody(dim={self.dim}, [{body}]{', empty' if self.is_empty else ''})"

    def __eq__(self, other):
        return (isinstance(other, ConvexBody) and self.dim == other.dim
                and self.halfspaces == other.halfspaces and self.is_empty == other.is_empty)

    def __hash__(self):
        return hash((self.dim, self.halfspaces))


def intersect_body_with_flat(K: ConvexBody, chart: Chart) -> ConvexBody:
    """K ∩ flat in the chart's own coordinates (possibly empty)."""
    if chart.ambient_dim != K.dim:
        raise MalformedInput("chart and body live in different dimensions")
    if K.is_empty:
        return ConvexBody([constraint([0] * chart.dim, Relation.GE, 1)], chart.dim)
    pulled = [ge(*chart.pull_back(c.coefficients, c.offset)) for c in K.halfspaces]
    return ConvexBody(pulled, chart.dim)


# ---------------------------------------------------------------------------
# classification


def _frame(face: Face, K: ConvexBody):
    """Face and body constraints rewritten in the coordinates of the face's flat."""
    flat = face.flat
    p, B = flat.point, flat.basis
    face_rows = []
    for i, (h, s) in enumerate(zip(face.hyperplanes, face.signs)):
        if s == 0:
            continue
        coeffs = tuple(dot(h.normal, b) for b in B)
        off = h.offset - dot(h.normal, p)
        face_rows.append((tuple(s * c for c in coeffs), s * off))
    body_rows = [(tuple(dot(c.coefficients, b) for b in B), c.offset - dot(c.coefficients, p))
                 for c in K.halfspaces]
    return face_rows, body_rows


def _face_system(face_rows, closed=False):
    make = ge if closed else gt
    return [make(c, o) for c, o in face_rows]


def classify_face(f: Face, K: ConvexBody) -> FaceClass:
    """OUTER (f ∩ K = ∅), INNER (f ⊂ int K) or CROSSING (f meets ∂K).

    An empty body classifies every face OUTER.
    """
    if len(f.witness) != K.dim:
        raise MalformedInput("face and body live in different dimensions")
    if K.is_empty:
        return FaceClass.OUTER
    face_rows, body_rows = _frame(f, K)
    k = f.dim
    system = _face_system(face_rows)
    if feasible(system + [ge(c, o) for c, o in body_rows], k) is None:
        return FaceClass.OUTER
    for c, o in body_rows:
        if feasible(system + [le(c, o)], k) is not None:
            return FaceClass.CROSSING
    return FaceClass.INNER


def classify_faces(arr: Arrangement, K: ConvexBody) -> dict:
    """Classify every face of ``arr``; same answers as :func:`classify_face`.

    Cheap certificates are tried before any LP: the witness point itself,
    open-region hits inherited from boundary faces, and closures of
    superfaces that miss K entirely.
    """
    faces = arr.faces
    if K.is_empty:
        return {s: FaceClass.OUTER for s in faces}
    if not K.halfspaces:
        return {s: FaceClass.INNER for s in faces}

    order = sorted(faces.values(), key=lambda f: f.dim)
    hits_int, hits_out = {}, {}
    result = {}
    for f in order:
        vals = [dot(c.coefficients, f.witness) - c.offset for c in K.halfspaces]
        w_int = all(v > 0 for v in vals)
        w_out = any(v < 0 for v in vals)
        kids = arr.boundary[f.signs]
        hi = w_int or any(hits_int[g] for g in kids)
        ho = w_out or any(hits_out[g] for g in kids)
        hits_int[f.signs], hits_out[f.signs] = hi, ho
        if (hi and ho) or not (w_int or w_out):
            result[f.signs] = FaceClass.CROSSING

    parents: dict = {}
    for s, kids in arr.boundary.items():
        for g in kids:
            parents.setdefault(g, []).append(s)

    bounded = arr.bounded()
    # sides of H that K avoids entirely: closure of any face there misses K
    rows = list(K.halfspaces)
    avoided = []
    for i, h in enumerate(arr.hyperplanes):
        if feasible(rows + [ge(h.normal, h.offset)], K.dim) is None:
            avoided.append((i, 1))
        elif feasible(rows + [le(h.normal, h.offset)], K.dim) is None:
            avoided.append((i, -1))

    # faces meeting int K, bottom-up: INNER or CROSSING
    for f in order:
        s = f.signs
        if s in result or not hits_int[s]:
            continue
        if f.dim == 0:
            result[s] = FaceClass.INNER
        elif not bounded[s] and K.is_bounded:
            # meets int K yet escapes every bounded set
            result[s] = FaceClass.CROSSING
        elif bounded[s] and all(result.get(g) is FaceClass.INNER for g in arr.boundary[s]):
            # closure is the hull of its vertices, all inside int K
            result[s] = FaceClass.INNER
        else:
            face_rows, body_rows = _frame(f, K)
            system = _face_system(face_rows)
            crossing = any(feasible(system + [le(c, o)], f.dim) is not None for c, o in body_rows)
            result[s] = FaceClass.CROSSING if crossing else FaceClass.INNER

    # the rest, top-down: OUTER or CROSSING
    closure_misses = {}
    for f in reversed(order):
        s = f.signs
        closure_misses[s] = False
        if s in result:
            continue
        if (f.dim == 0 or any(s[i] == side for i, side in avoided)
                or any(closure_misses[p] for p in parents.get(s, ()))):
            result[s] = FaceClass.OUTER
            closure_misses[s] = True
            continue
        face_rows, body_rows = _frame(f, K)
        body = [ge(c, o) for c, o in body_rows]
        if feasible(_face_system(face_rows, closed=True) + body, f.dim) is None:
            result[s] = FaceClass.OUTER
            closure_misses[s] = True
        elif feasible(_face_system(face_rows) + body, f.dim) is None:
            result[s] = FaceClass.OUTER
        else:
            result[s] = FaceClass.CROSSING
    return result


# ---------------------------------------------------------------------------
# general position


@dataclass(frozen=True)
class Finding:
    check: str  # "a" rank, "b" concurrency, "c" vertex on boundary, "d" tangency
    hyperplanes: tuple
    message: str

    def __str__(self):
        return f"({self.check}) {self.message} [hyperplanes {list(self.hyperplanes)}]"


def general_position_check(H: Sequence, K: ConvexBody) -> list:
    """Exact general-position test; returns the list of violations (empty means OK).

    (a) any j <= d hyperplanes meet in a (d-j)-flat; (b) no d+1 share a point;
    (c) no vertex lies on the boundary of K; (d) every flat that meets K also
    meets its interior.
    """
    hs = [h if isinstance(h, Hyperplane) else Hyperplane(*h) for h in H]
    d = K.dim
    for h in hs:
        if h.dim != d:
            raise MalformedInput("hyperplanes and body live in different dimensions")
    n = len(hs)
    findings = []

    bad = []
    for j in range(2, min(n, d) + 1):
        for subset in itertools.combinations(range(n), j):
            if any(b <= set(subset) for b in bad):
                continue
            if rank([hs[i].normal for i in subset]) < j:
                bad.append(set(subset))
                findings.append(Finding("a", subset, f"{j} hyperplanes do not meet in a {d - j}-flat"))
    if len(set(hs)) != n:
        findings.append(Finding("a", (), "duplicate hyperplanes"))

    seen = set()
    if n > d:
        for subset in itertools.combinations(range(n), d):
            sol = solve_affine_system([eq(hs[i].normal, hs[i].offset) for i in subset], d)
            if sol is None or sol.dim != 0:
                continue
            extra = [i for i in range(n) if i not in subset and hs[i].evaluate(sol.point) == 0]
            if extra:
                key = frozenset(subset) | frozenset(extra)
                if key not in seen:
                    seen.add(key)
                    findings.append(Finding("b", tuple(sorted(key)),
                                            f"{len(key)} hyperplanes share the point "
                                            f"({', '.join(map(format_rational, sol.point))})"))

    if K.is_empty:
        return findings
    flats = enumerate_flats(hs, d)
    interior = K.interior_constraints()
    for z, flat in sorted(flats.items(), key=lambda kv: (kv[1].dim, sorted(kv[0]))):
        if flat.dim == 0:
            if K.contains(flat.point) and not K.in_interior(flat.point):
                findings.append(Finding("c", tuple(sorted(z)),
                                        f"vertex ({', '.join(map(format_rational, flat.point))}) "
                                        "lies on the boundary of K"))
            continue
        eqs = [eq(hs[i].normal, hs[i].offset) for i in sorted(z)]
        if feasible(eqs + list(K.halfspaces), d) is None:
            continue
        if feasible(eqs + interior, d) is None:
            findings.append(Finding("d", tuple(sorted(z)),
                                    f"{flat.dim}-flat touches K without meeting its interior"))
    return findings


def is_general_position(H: Sequence, K: ConvexBody) -> bool:
    return not general_position_check(H, K)


FaceClassifier = Callable[[Face], FaceClass]
