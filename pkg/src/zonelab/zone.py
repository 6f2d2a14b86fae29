"""Zone of ∂K, k-borders and the outer-complexity counts derived from them."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

import gmpy2

from .arrangement import Arrangement, Face, build_arrangement, is_subface, signs_to_str
from .body import ConvexBody, FaceClass, classify_faces, general_position_check
from .errors import GeneralPositionError, MalformedInput
from .exact import format_rational

CSV_VERSION = "#zonelab-v1"
MAX_D = 6


@dataclass(frozen=True)
class Border:
    """An i-face contained in K^c paired with a zone cell whose closure holds it."""

    face: Face
    cell: Face
    i: int

    def __str__(self):
        return f"{self.i};{signs_to_str(self.face.signs)};{signs_to_str(self.cell.signs)}"


def _classes(arr, K, classes):
    if arr.dim != K.dim:
        raise MalformedInput("arrangement and body live in different dimensions")
    return classes if classes is not None else classify_faces(arr, K)


def zone_cells(arr: Arrangement, K: ConvexBody, classes: dict | None = None) -> list:
    """Cells meeting ∂K, i.e. cells that meet both K and its complement."""
    classes = _classes(arr, K, classes)
    return sorted((c for c in arr.cells if classes[c.signs] is FaceClass.CROSSING),
                  key=lambda c: c.signs)


def count_borders(arr: Arrangement, K: ConvexBody, i: int, classes: dict | None = None,
                  zone: set | None = None) -> tuple:
    """tau_i and the list of i-borders (f, C) with f ⊂ K^c and C in the zone."""
    if not 0 <= i < arr.dim:
        raise MalformedInput(f"border dimension {i} outside [0, {arr.dim})")
    classes = _classes(arr, K, classes)
    if zone is None:
        zone = {c.signs for c in zone_cells(arr, K, classes)}
    borders = []
    limit = 2 ** (arr.dim - i)
    for f in sorted(arr.faces_of_dim(i), key=lambda f: f.signs):
        if classes[f.signs] is not FaceClass.OUTER:
            continue
        incident = arr.incident_cells(f)
        if arr.general_position:
            assert len(incident) <= limit, f"{f} borders {len(incident)} > {limit} cells"
        for cell in incident:
            if cell.signs in zone:
                borders.append(Border(f, cell, i))
    return len(borders), borders


def count_crossing_faces(arr: Arrangement, K: ConvexBody, classes: dict | None = None) -> tuple:
    """Per-dimension counts of CROSSING faces, raw and as (face, zone cell) pairs.

    Both tuples are indexed 0..d; at dimension d the raw count is the number of
    zone cells and each contributes itself once.
    """
    classes = _classes(arr, K, classes)
    zone = {c.signs for c in zone_cells(arr, K, classes)}
    raw = [0] * (arr.dim + 1)
    paired = [0] * (arr.dim + 1)
    for f in arr.faces.values():
        if classes[f.signs] is not FaceClass.CROSSING:
            continue
        raw[f.dim] += 1
        paired[f.dim] += sum(1 for c in arr.incident_cells(f) if c.signs in zone)
    return tuple(raw), tuple(paired)


def outer_complexity_per_cell(arr: Arrangement, K: ConvexBody, classes: dict | None = None) -> int:
    """C(Z) accumulated cell by cell over all faces on each zone cell's boundary."""
    classes = _classes(arr, K, classes)
    total = 0
    for cell in zone_cells(arr, K, classes):
        total += sum(1 for f in arr.faces.values()
                     if f.dim < arr.dim and classes[f.signs] is FaceClass.OUTER
                     and is_subface(f, cell))
    return total


def prop23_bound(n: int, d: int, i: int) -> int:
    """4 (d-i)! C(n, d-i) n^(i-1), for i >= 1."""
    if i < 1:
        raise ValueError("bound is stated for i >= 1")
    return 4 * factorial(d - i) * comb(n, d - i) * n ** (i - 1)


@dataclass
class ZoneReport:
    n: int
    d: int
    zone_cell_count: int
    tau: tuple
    outer_complexity: int
    crossing_counts: tuple
    crossing_border_counts: tuple
    inner_counts: tuple
    ratio_cz: object
    prop23_ratios: dict = field(default_factory=dict)
    open_edge_deficit: int = 0  # sum over 1-borders of (2 - number of edge endpoints)
    borders: list = field(default_factory=list, repr=False)

    def csv_row(self) -> list:
        return report_csv_row(self)


REPORT_COLUMNS = (
    ["n", "d", "zone_cells"]
    + [f"tau_{i}" for i in range(MAX_D)]
    + ["C_Z"]
    + [f"crossing_{i}" for i in range(MAX_D)]
    + ["ratio_CZ"]
)


def report_csv_row(r: ZoneReport) -> list:
    def padded(values):
        values = [str(v) for v in values[: r.d]]
        return values + [""] * (MAX_D - len(values))

    return ([str(r.n), str(r.d), str(r.zone_cell_count)] + padded(r.tau)
            + [str(r.outer_complexity)] + padded(r.crossing_counts)
            + [format_rational(r.ratio_cz)])


def zone_report(arr: Arrangement, K: ConvexBody, check_general_position: bool = True,
                classes: dict | None = None) -> ZoneReport:
    """All zone counts for (K, H); refuses degenerate instances by default."""
    if check_general_position:
        findings = general_position_check(arr.hyperplanes, K)
        if findings:
            raise GeneralPositionError(findings)
    classes = _classes(arr, K, classes)
    d, n = arr.dim, arr.n
    zone = {c.signs for c in zone_cells(arr, K, classes)}
    tau, borders = [], []
    for i in range(d):
        t, b = count_borders(arr, K, i, classes, zone)
        tau.append(t)
        borders.extend(b)
    raw, paired = count_crossing_faces(arr, K, classes)
    inner = [0] * (d + 1)
    for f in arr.faces.values():
        if classes[f.signs] is FaceClass.INNER:
            inner[f.dim] += 1
    cz = sum(tau)
    denom = d * n ** (d - 1)
    ratio = gmpy2.mpq(cz, denom) if denom else gmpy2.mpq(0)
    prop = {}
    for i in range(2, d):
        rhs = prop23_bound(n, d, i)
        if rhs:
            prop[i] = gmpy2.mpq(tau[i], rhs)
    deficit = sum(2 - len(arr.boundary[b.face.signs]) for b in borders if b.i == 1)
    return ZoneReport(n, d, len(zone), tuple(tau), cz, raw[:d], paired[:d], tuple(inner),
                      ratio, prop, deficit, borders)


def analyze(hyperplanes, K: ConvexBody, check_general_position: bool = True) -> ZoneReport:
    """Build the arrangement of ``hyperplanes`` and report on the zone of ∂K."""
    return zone_report(build_arrangement(hyperplanes, K.dim), K, check_general_position)


def tau_vector(hyperplanes, K: ConvexBody) -> tuple:
    """tau_0..tau_{d-1} recomputed from scratch, without the general-position gate."""
    if not hyperplanes or K.is_empty or not K.halfspaces:
        return (0,) * K.dim
    return analyze(hyperplanes, K, check_general_position=False).tau
