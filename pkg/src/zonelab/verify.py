"""Instance-level checks of the outer-zone bounds.

Checks with explicit constants PASS or FAIL on exact integers.  Quantities
whose constant is unspecified are emitted as REPORT_ONLY ratios.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

import gmpy2

from .arrangement import Arrangement, Hyperplane, build_arrangement, restrict_to_hyperplane, signs_to_str
from .body import ConvexBody, FaceClass, classify_faces, general_position_check, intersect_body_with_flat
from .errors import DegenerateRestriction, GeneralPositionError
from .exact import format_rational
from .zone import ZoneReport, prop23_bound, tau_vector, zone_report


class Status(enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    NOT_APPLICABLE = "NOT_APPLICABLE"
    REPORT_ONLY = "REPORT_ONLY"


CHECK_COLUMNS = ["check_id", "status", "lhs", "rhs", "n", "d", "i", "instance_seed"]


@dataclass
class CheckResult:
    check_id: str
    status: Status
    lhs: object = None
    rhs: object = None
    n: int | None = None
    d: int | None = None
    i: int | None = None
    instance_seed: object = None
    context: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.status is Status.FAIL

    def csv_row(self) -> list:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, int):
                return str(v)
            return format_rational(v)

        return [self.check_id, self.status.value, fmt(self.lhs), fmt(self.rhs),
                fmt(self.n), fmt(self.d), fmt(self.i),
                "" if self.instance_seed is None else str(self.instance_seed)]

    def __str__(self):
        i = f" i={self.i}" if self.i is not None else ""
        return (f"{self.check_id}{i}: {self.status.value} "
                f"({'' if self.lhs is None else self.lhs} <= {'' if self.rhs is None else self.rhs})")


def _inequality(check_id, lhs, rhs, report=None, i=None, n=None, d=None, **context):
    status = Status.PASS if lhs <= rhs else Status.FAIL
    if report is not None:
        n, d = report.n, report.d
    return CheckResult(check_id, status, lhs, rhs, n, d, i, context=context)


def _not_applicable(check_id, report=None, i=None, n=None, d=None, **context):
    if report is not None:
        n, d = report.n, report.d
    return CheckResult(check_id, Status.NOT_APPLICABLE, None, None, n, d, i, context=context)


def check_dim1(report: ZoneReport) -> CheckResult:
    """tau_0 <= 2 on the line."""
    if report.d != 1:
        return _not_applicable("dim1", report)
    return _inequality("dim1", report.tau[0], 2, report, i=0)


def check_lemma22(report: ZoneReport) -> tuple:
    """Planar bounds tau_1 <= 4n and tau_0 <= 12n."""
    if report.d != 2:
        return (_not_applicable("lemma22.tau1", report, i=1),
                _not_applicable("lemma22.tau0", report, i=0))
    n = report.n
    return (_inequality("lemma22.tau1", report.tau[1], 4 * n, report, i=1),
            _inequality("lemma22.tau0", report.tau[0], 12 * n, report, i=0))


def check_prop23(report: ZoneReport, i: int) -> CheckResult:
    """tau_i <= 4 (d-i)! C(n, d-i) n^(i-1) for d >= 3, 2 <= i < d."""
    d = report.d
    if d < 3 or not 2 <= i < d:
        return _not_applicable("prop23", report, i=i)
    return _inequality("prop23", report.tau[i], prop23_bound(report.n, d, i), report, i=i)


@dataclass
class RecurrenceTerms:
    """tau vectors of (K, H), every (K, H - h) and every (K ∩ h, H ∩ h)."""

    n: int
    d: int
    tau: tuple
    dropped: list
    restricted: list  # tau vector per h, or None
    degenerate: dict  # index of h -> reason


def recurrence_terms(H: Sequence, K: ConvexBody, check_restricted: bool = True) -> RecurrenceTerms:
    """Recompute every tau the recurrence needs, each from a fresh arrangement."""
    H = [h if isinstance(h, Hyperplane) else Hyperplane(*h) for h in H]
    d = K.dim
    full = tau_vector(H, K)
    dropped = [tau_vector(H[:j] + H[j + 1:], K) for j in range(len(H))]
    restricted, degenerate = [], {}
    for j, h in enumerate(H):
        if d < 2:
            restricted.append(None)
            continue
        try:
            induced, chart = restrict_to_hyperplane(H, h)
        except DegenerateRestriction as exc:
            restricted.append(None)
            degenerate[j] = str(exc)
            continue
        Kh = intersect_body_with_flat(K, chart)
        if check_restricted and not Kh.is_empty:
            findings = general_position_check(induced, Kh)
            if findings:
                restricted.append(None)
                degenerate[j] = "; ".join(map(str, findings))
                continue
        restricted.append(tau_vector(induced, Kh))
    return RecurrenceTerms(len(H), d, full, dropped, restricted, degenerate)


def check_recurrence(H: Sequence, K: ConvexBody, i: int,
                     terms: RecurrenceTerms | None = None) -> CheckResult:
    """(n-d+i) tau_i(K,H) <= sum_h tau_i(K, H-h) + sum_h tau_{i-1}(K∩h, H∩h)."""
    d, n = K.dim, len(H)
    if not 1 <= i < d:
        return _not_applicable("recurrence", i=i, n=n, d=d)
    if terms is None:
        terms = recurrence_terms(H, K)
    if terms.degenerate:
        j, reason = next(iter(terms.degenerate.items()))
        return _not_applicable("recurrence", i=i, n=n, d=d, hyperplane=j, reason=reason)
    lhs = (n - d + i) * terms.tau[i]
    drop = sum(t[i] for t in terms.dropped)
    restrict = sum(t[i - 1] for t in terms.restricted)
    return _inequality("recurrence", lhs, drop + restrict, i=i, n=n, d=d,
                       dropped=drop, restricted=restrict)


def check_claim24(arr: Arrangement, K, classify: Callable | None = None) -> CheckResult:
    """No facet lying in K^c borders two zone cells.

    ``classify`` maps a face to a FaceClass; it defaults to exact
    classification against the convex body ``K`` and exists so that
    non-convex sets can be plugged in by tests.
    """
    if classify is None:
        classes = classify_faces(arr, K)
    else:
        classes = {s: classify(f) for s, f in arr.faces.items()}
    zone = {c.signs for c in arr.cells if classes[c.signs] is FaceClass.CROSSING}
    worst = 0
    violations = []
    for f in arr.faces_of_dim(arr.dim - 1):
        cls = classes[f.signs]
        if cls is FaceClass.INNER:
            continue
        k = sum(1 for c in arr.incident_cells(f) if c.signs in zone)
        if cls is FaceClass.OUTER:
            worst = max(worst, k)
        if k >= 2 and cls is not FaceClass.CROSSING:
            violations.append(signs_to_str(f.signs))
    status = Status.FAIL if violations else Status.PASS
    return CheckResult("claim24", status, worst, 1, arr.n, arr.dim, arr.dim - 1,
                       context={"violations": violations})


def check_tau1_tau0(report: ZoneReport) -> CheckResult:
    """REPORT_ONLY: tau_1 against (d/2) tau_0.

    The context also carries the form that accounts for 1-borders whose edge
    has fewer than two vertices: tau_1 <= (d/2) tau_0 + deficit/2.
    """
    if report.d < 3:
        return _not_applicable("tau1_tau0", report, i=1)
    half_d = gmpy2.mpq(report.d, 2)
    rhs = half_d * report.tau[0]
    fuller = rhs + gmpy2.mpq(report.open_edge_deficit, 2)
    return CheckResult("tau1_tau0", Status.REPORT_ONLY, report.tau[1], rhs, report.n, report.d, 1,
                       context={"plain_holds": report.tau[1] <= rhs,
                                "fuller_rhs": fuller,
                                "fuller_holds": report.tau[1] <= fuller})


def check_theorem_main(report: ZoneReport) -> CheckResult:
    """C(Z) / (d n^(d-1)) as a measured ratio; for d = 2 also C(Z) <= 16n."""
    n, d = report.n, report.d
    if n < 1:
        return _not_applicable("theorem_main", report)
    ratio = gmpy2.mpq(report.outer_complexity, d * n ** (d - 1))
    if d == 2:
        res = _inequality("theorem_main", report.outer_complexity, 16 * n, report, ratio=ratio)
    else:
        res = CheckResult("theorem_main", Status.REPORT_ONLY, report.outer_complexity,
                          d * n ** (d - 1), n, d, context={"ratio": ratio})
    return res


ALL_CHECKS = ("dim1", "lemma22", "prop23", "recurrence", "claim24", "tau1_tau0", "theorem_main")


def run_checks(H: Sequence, K: ConvexBody, checks: Sequence[str] = ALL_CHECKS,
               instance_seed=None, arr: Arrangement | None = None,
               report: ZoneReport | None = None) -> tuple:
    """Every requested check on one instance; returns ``(report, results)``.

    Refuses (GeneralPositionError) when the instance is degenerate.
    """
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    d = K.dim
    if arr is None:
        arr = build_arrangement(H, d)
    if report is None:
        report = zone_report(arr, K)
    results = []
    if "dim1" in checks:
        results.append(check_dim1(report))
    if "lemma22" in checks:
        results.extend(check_lemma22(report))
    if "prop23" in checks:
        for i in range(2, d) if d >= 3 else ():
            results.append(check_prop23(report, i))
    if "recurrence" in checks and d >= 2:
        terms = recurrence_terms(arr.hyperplanes, K)
        for i in range(1, d):
            results.append(check_recurrence(arr.hyperplanes, K, i, terms))
    if "claim24" in checks:
        results.append(check_claim24(arr, K))
    if "tau1_tau0" in checks:
        results.append(check_tau1_tau0(report))
    if "theorem_main" in checks:
        results.append(check_theorem_main(report))
    for r in results:
        r.instance_seed = instance_seed
    return report, results


__all__ = [
    "ALL_CHECKS", "CHECK_COLUMNS", "CheckResult", "GeneralPositionError", "RecurrenceTerms", "Status",
    "check_claim24", "check_dim1", "check_lemma22", "check_prop23", "check_recurrence",
    "check_tau1_tau0", "check_theorem_main", "recurrence_terms", "run_checks",
]
