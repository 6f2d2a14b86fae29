"""zonelab command line: gen, zone, verify, sweep, render.

Exit codes: 0 success, 1 a check FAILed, 2 bad input / degenerate instance /
refused request.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from .body import general_position_check
from .errors import GeneralPositionError, ZonelabError
from .exact import as_rational
from .instances import GenConfig, Instance, generate, perturb
from .render import render_svg
from .sweep import SweepSpec, run_sweep
from .verify import ALL_CHECKS, CHECK_COLUMNS, Status, run_checks
from .zone import CSV_VERSION, REPORT_COLUMNS, analyze

EXIT_FAIL = 1
EXIT_ERROR = 2


def _env_seed(default):
    value = os.environ.get("ZONELAB_SEED")
    return int(value, 0) if value not in (None, "") else default


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv_text(columns, rows):
    import io
    buf = io.StringIO()
    buf.write(CSV_VERSION + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def _parse_n_values(text):
    if ".." in text:
        lo, hi = text.split("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(x) for x in text.split(",") if x.strip())


def _parse_checks(text):
    return tuple(c.strip() for c in text.split(",") if c.strip()) if text else ALL_CHECKS


def _load(path, allow_perturb, precision=64):
    inst = Instance.read(path)
    findings = general_position_check(inst.hyperplanes, inst.body)
    if findings:
        if not allow_perturb:
            raise GeneralPositionError(findings)
        seed = _env_seed(inst.seed or 0)
        inst.hyperplanes = perturb(inst.hyperplanes, inst.body, precision, seed=seed)
        print(f"perturbed {len(inst.hyperplanes)} hyperplanes into general position",
              file=sys.stderr)
    return inst


def cmd_gen(args):
    cfg = GenConfig(seed=_env_seed(args.seed), n=args.n, d=args.d, coeff_bound=args.coeff_bound,
                    body_facets=args.body_facets, body_scale=as_rational(args.body_scale),
                    box=args.box)
    inst = generate(cfg)
    _write_text(args.out, inst.to_json())
    return 0


def cmd_zone(args):
    inst = _load(args.instance, args.perturb, args.precision)
    report = analyze(inst.hyperplanes, inst.body)
    _write_text(args.out, _csv_text(REPORT_COLUMNS, [report.csv_row()]))
    if args.dump_borders:
        text = "".join(f"{b}\n" for b in report.borders)
        _write_text(args.dump_borders, text)
    return 0


def cmd_verify(args):
    inst = _load(args.instance, args.perturb, args.precision)
    _, results = run_checks(inst.hyperplanes, inst.body, _parse_checks(args.checks),
                            instance_seed=inst.seed)
    _write_text(args.out, _csv_text(CHECK_COLUMNS, [r.csv_row() for r in results]))
    failed = [r for r in results if r.status is Status.FAIL]
    for r in failed:
        print(f"FAIL {r}", file=sys.stderr)
    return EXIT_FAIL if failed else 0


def cmd_sweep(args):
    spec = SweepSpec(d=args.d, n_values=_parse_n_values(args.n_values),
                     instances_per_n=args.instances, base_seed=_env_seed(args.base_seed),
                     checks=_parse_checks(args.checks), coeff_bound=args.coeff_bound,
                     body_facets=args.body_facets, body_scale=as_rational(args.body_scale),
                     box=args.box)
    result = run_sweep(spec, jobs=args.jobs)
    paths = result.write(args.out_dir)
    sys.stdout.write(result.summary_csv())
    for name, p in paths.items():
        print(f"wrote {name}: {p}", file=sys.stderr)
    if result.failures:
        print(f"{len(result.failures)} FAILed checks", file=sys.stderr)
        return EXIT_FAIL
    return 0


def cmd_render(args):
    inst = Instance.read(args.instance)
    _write_text(args.out, render_svg(inst.hyperplanes, inst.body))
    return 0


def _add_gen_options(p):
    p.add_argument("--coeff-bound", type=int, default=10)
    p.add_argument("--body-facets", type=int, default=None)
    p.add_argument("--body-scale", default="1")
    p.add_argument("--box", action="store_true", help="axis-aligned box body (2d facets)")


def build_parser():
    parser = argparse.ArgumentParser(prog="zonelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random instance file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_gen_options(p)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gen)

    for name, func, help_ in (("zone", cmd_zone, "report the zone counts of an instance"),
                              ("verify", cmd_verify, "run every applicable bound check")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("instance")
        p.add_argument("--out", default="-")
        p.add_argument("--perturb", action="store_true",
                       help="perturb a degenerate instance instead of refusing it")
        p.add_argument("--precision", type=int, default=64)
        if name == "zone":
            p.add_argument("--dump-borders", metavar="PATH",
                           help="list borders as i;face_signs;cell_signs ('-' for stdout)")
        else:
            p.add_argument("--checks", default="", help=f"comma list from {','.join(ALL_CHECKS)}")
        p.set_defaults(func=func)

    p = sub.add_parser("sweep", help="seeded experiment sweep with CSV output")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-values", required=True, help="e.g. 2,4,6 or 3..8")
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--checks", default="")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--jobs", type=int, default=1)
    _add_gen_options(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("render", help="SVG drawing of a planar instance")
    p.add_argument("instance")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GeneralPositionError as exc:
        print("instance is not in general position (use --perturb):", file=sys.stderr)
        for f in exc.findings:
            print(f"  {f}", file=sys.stderr)
        return EXIT_ERROR
    except (ZonelabError, OSError, ValueError) as exc:
        print(f"zonelab {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
