"""Seeded sweeps over random instances, written as versioned CSV files.

Instance ``index`` at size ``n`` uses seed ``base_seed ^ mix64(n, index)``
(see :func:`zonelab.instances.mix64`).  Rows are emitted in (n, index)
order whatever the number of worker processes.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import gmpy2

from .body import general_position_check
from .errors import BudgetExceeded, MalformedInput
from .exact import format_rational
from .instances import GenConfig, generate, mix64, perturb
from .verify import ALL_CHECKS, CHECK_COLUMNS, Status, run_checks
from .zone import CSV_VERSION, MAX_D, REPORT_COLUMNS

MAX_SWEEP_D = 4
MAX_SWEEP_N = 12
MAX_INSTANCES = 200


@dataclass(frozen=True)
class SweepSpec:
    d: int
    n_values: tuple
    instances_per_n: int
    base_seed: int = 0
    checks: tuple = ALL_CHECKS
    coeff_bound: int = 10
    body_facets: int | None = None
    body_scale: object = 1
    box: bool = False

    def validate(self) -> None:
        if not self.n_values:
            raise MalformedInput("n_values must be nonempty")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise MalformedInput("n_values must be strictly increasing")
        if self.d < 1 or min(self.n_values) < 0 or self.instances_per_n < 1:
            raise MalformedInput("need d >= 1, n >= 0 and at least one instance per n")
        if self.d > MAX_SWEEP_D or max(self.n_values) > MAX_SWEEP_N \
                or self.instances_per_n > MAX_INSTANCES:
            raise BudgetExceeded(
                f"sweep budget is d <= {MAX_SWEEP_D}, n <= {MAX_SWEEP_N}, "
                f"instances_per_n <= {MAX_INSTANCES}")
        unknown = set(self.checks) - set(ALL_CHECKS)
        if unknown:
            raise MalformedInput(f"unknown checks: {sorted(unknown)}")

    def instance_seed(self, n: int, index: int) -> int:
        return self.base_seed ^ mix64(n, index)

    def config(self, n: int, index: int) -> GenConfig:
        return GenConfig(seed=self.instance_seed(n, index), n=n, d=self.d,
                         coeff_bound=self.coeff_bound, body_facets=self.body_facets,
                         body_scale=self.body_scale, box=self.box)


@dataclass
class InstanceOutcome:
    n: int
    index: int
    seed: int
    perturbed: bool
    report: object
    results: list


def run_instance(spec: SweepSpec, n: int, index: int) -> InstanceOutcome:
    cfg = spec.config(n, index)
    inst = generate(cfg)
    H = inst.hyperplanes
    perturbed = False
    if general_position_check(H, inst.body):
        H = perturb(H, inst.body, seed=cfg.seed)
        perturbed = True
    report, results = run_checks(H, inst.body, spec.checks, instance_seed=cfg.seed)
    report.borders = []
    return InstanceOutcome(n, index, cfg.seed, perturbed, report, results)


def _run_packed(args):
    return run_instance(*args)


@dataclass
class SweepResult:
    spec: SweepSpec
    outcomes: list
    summary: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        return [r for o in self.outcomes for r in o.results if r.status is Status.FAIL]

    def checks_csv(self) -> str:
        rows = [r.csv_row() for o in self.outcomes for r in o.results]
        return _csv(CHECK_COLUMNS, rows)

    def reports_csv(self) -> str:
        rows = [o.report.csv_row() + [str(o.seed), str(int(o.perturbed))] for o in self.outcomes]
        return _csv(REPORT_COLUMNS + ["instance_seed", "perturbed"], rows)

    def summary_csv(self) -> str:
        cols = (["n", "instances", "perturbed", "fails", "max_C_Z", "max_ratio_CZ"]
                + [f"max_tau_{i}" for i in range(MAX_D)])
        rows = []
        for s in self.summary:
            taus = [str(t) for t in s["max_tau"]] + [""] * (MAX_D - len(s["max_tau"]))
            rows.append([str(s["n"]), str(s["instances"]), str(s["perturbed"]), str(s["fails"]),
                         str(s["max_C_Z"]), format_rational(s["max_ratio_CZ"])] + taus)
        return _csv(cols, rows)

    def write(self, out_dir) -> dict:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {}
        for name, text in (("checks", self.checks_csv()), ("reports", self.reports_csv()),
                           ("summary", self.summary_csv())):
            p = out / f"{name}.csv"
            p.write_text(text)
            paths[name] = p
        return paths


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_VERSION + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def summarize(spec: SweepSpec, outcomes: list) -> list:
    summary = []
    for n in spec.n_values:
        group = [o for o in outcomes if o.n == n]
        summary.append({
            "n": n,
            "instances": len(group),
            "perturbed": sum(o.perturbed for o in group),
            "fails": sum(r.status is Status.FAIL for o in group for r in o.results),
            "max_C_Z": max(o.report.outer_complexity for o in group),
            "max_ratio_CZ": max((o.report.ratio_cz for o in group), default=gmpy2.mpq(0)),
            "max_tau": [max(o.report.tau[i] for o in group) for i in range(spec.d)],
        })
    return summary


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    spec.validate()
    tasks = [(spec, n, k) for n in spec.n_values for k in range(spec.instances_per_n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_packed, tasks, chunksize=1))
    else:
        outcomes = [run_instance(*t) for t in tasks]
    return SweepResult(spec, outcomes, summarize(spec, outcomes))
