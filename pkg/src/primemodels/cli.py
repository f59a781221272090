"""
Command-line front end.

    primemodels pi --x 100
    primemodels li --x 1e6 --tol 1e-9
    primemodels moments --x 1000000 [--model M2] [--k 4 --l 1]
    primemodels band --x 1000000 --c 3
    primemodels simulate --x 100000 --trials 2000 --seed 7
    primemodels legendre --n-max 3000
    primemodels eh-sum --x 100000 --a 0.5 --big-a 2
    primemodels report-all [--x 1e8] --format json

Every report starts with the run configuration (a ``# config:`` comment line
in CSV, a ``config`` object in JSON).  Exit status is 0 on success, 1 when an
asserted check fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

from . import __version__, analytic, conjectures, models, montecarlo, suite
from .primes import INT64_MAX, ProgressionClass, prime_count, prime_count_progression

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2
THREADS_ENV = "PRIMEMODELS_THREADS"

# fixed CSV columns per command
COLUMNS = {
    "pi": ["x", "pi"],
    "pi-class": ["x", "k", "l", "pi"],
    "li": ["x", "li"],
    "moments": ["x", "model", "k", "l", "mean", "variance", "pi", "z"],
    "band": ["x", "model", "k", "l", "C", "center", "lo", "hi", "coverage", "pi", "contains"],
    "simulate": ["x", "model", "k", "l", "trials", "seed", "start_index", "C", "coverage", "expected",
                 "tolerance", "empirical_mean", "empirical_variance", "model_mean", "model_variance", "status"],
    "legendre": ["n", "lo", "hi", "first_prime", "status"],
    "eh-sum": ["x", "a", "big_a", "k_max", "sum", "bound", "fitted_c", "majorant", "crossover",
               "assertable", "status"],
    "report-all": ["check", "status", "value", "detail"],
}


class UsageError(Exception):
    pass


@dataclass
class Report:
    schema: str
    rows: list[dict]
    failed: bool = False
    extra: dict = field(default_factory=dict)


def fmt_value(v) -> str:
    """Render one CSV cell: ints verbatim, reals with 10 significant digits."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            return str(v)
        s = format(v, ".10g")
        if not any(ch in s for ch in ".en"):
            s += ".0"
        return s
    return str(v)


def _json_value(v):
    if isinstance(v, float) and (math.isnan(v) or math.isinf(v)):
        return str(v)
    return v


def parse_number(text: str) -> int:
    """Integers, also written as 1e6 or 10**6."""
    try:
        if "**" in text:
            base, exp = text.split("**")
            v = int(base) ** int(exp)
        elif any(c in text.lower() for c in ".e"):
            f = float(text)
            if not f.is_integer():
                raise ValueError
            v = int(f)
        else:
            v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v > INT64_MAX:
        raise argparse.ArgumentTypeError(f"{text} exceeds 2**63 - 1")
    return v


def _class_from(args) -> ProgressionClass | None:
    k, l = getattr(args, "k", None), getattr(args, "l", None)
    if k is None and l is None:
        return None
    if k is None or l is None:
        raise UsageError("--k and --l must be given together")
    return ProgressionClass(k, l)


def cmd_pi(args) -> Report:
    cls = _class_from(args)
    if cls is None:
        return Report("pi", [{"x": args.x, "pi": prime_count(args.x)}])
    return Report("pi-class", [{"x": args.x, "k": cls.k, "l": cls.l, "pi": prime_count_progression(args.x, cls)}])


def cmd_li(args) -> Report:
    r = analytic.li(args.x, args.tol)
    x = int(args.x) if float(args.x).is_integer() else args.x
    return Report("li", [{"x": x, "li": r.value}], extra={"abs_error_bound": r.abs_error_bound})


def _models_for(args, cls):
    if args.model:
        return [models.ModelKind.parse(args.model)]
    if cls is None:
        return [models.M1, models.M1_CRUDE, models.M2]
    return [models.M3, models.M3_CRUDE, models.M4]


def _actual(x: int, cls) -> int:
    return prime_count(x) if cls is None else prime_count_progression(x, cls)


def cmd_moments(args) -> Report:
    cls = _class_from(args)
    actual = _actual(args.x, cls)
    rows = []
    for kind in _models_for(args, cls):
        m = models.model_moments(kind, args.x, cls)
        rows.append({
            "x": args.x, "model": kind.name, "k": cls.k if cls else 1, "l": cls.l if cls else 0,
            "mean": m.mean, "variance": m.variance, "pi": actual, "z": models.z_score(actual, m),
        })
    return Report("moments", rows)


def cmd_band(args) -> Report:
    cls = _class_from(args)
    actual = _actual(args.x, cls)
    rows = []
    for kind in _models_for(args, cls):
        b = models.deviation_band(models.model_moments(kind, args.x, cls), args.c)
        rows.append({
            "x": args.x, "model": kind.name, "k": cls.k if cls else 1, "l": cls.l if cls else 0,
            "C": b.C, "center": b.center, "lo": b.lo, "hi": b.hi, "coverage": b.coverage,
            "pi": actual, "contains": b.contains(actual),
        })
    return Report("band", rows)


def _workers() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}")


def cmd_simulate(args) -> Report:
    cls = _class_from(args)
    kind = models.M2 if cls is None else models.M4
    c_list = tuple(args.c) if args.c else montecarlo.DEFAULT_C_LIST
    cfg = montecarlo.TrialConfig(kind, args.x, cls, args.trials, args.seed, c_list)
    rep = montecarlo.run_experiment(cfg, workers=_workers())
    rows = []
    failed = False
    for c in c_list:
        row = montecarlo.coverage_report([rep], c)["rows"][0]
        failed |= row["status"] != "PASS"
        rows.append({
            "x": args.x, "model": kind.name, "k": row["k"], "l": row["l"], "trials": rep.trials,
            "seed": args.seed, "start_index": rep.start_index, "C": float(c), "coverage": row["empirical"],
            "expected": row["expected"], "tolerance": row["tolerance"], "empirical_mean": rep.empirical_mean,
            "empirical_variance": rep.empirical_variance, "model_mean": rep.moments.mean,
            "model_variance": rep.moments.variance, "status": row["status"],
        })
    return Report("simulate", rows, failed, extra={"z_summary": rep.z_summary})


def cmd_legendre(args) -> Report:
    scan = conjectures.legendre_scan(args.n_max)
    rows = [
        {"n": n, "lo": n * n, "hi": (n + 1) ** 2, "first_prime": w, "status": "PASS" if w else "FAIL"}
        for n, w in enumerate(scan.witnesses, 1)
    ]
    return Report("legendre", rows, not scan.all_pass)


def cmd_eh_sum(args) -> Report:
    rec = conjectures.eh_sum(args.x, args.a, args.big_a)
    chk = conjectures.eh_bound_check(rec, args.big_a)
    row = {
        "x": args.x, "a": args.a, "big_a": args.big_a, "k_max": rec.k_max, "sum": rec.sum,
        "bound": rec.bound, "fitted_c": rec.fitted_C, "majorant": chk.majorant, "crossover": chk.crossover,
        "assertable": chk.assertable, "status": "PASS" if chk.passed else "FAIL",
    }
    return Report("eh-sum", [row], not chk.passed, extra={"checks": chk.checks, "reported": chk.reported})


def cmd_report_all(args) -> Report:
    if args.x < 10**4:
        raise UsageError("report-all needs --x >= 1e4")
    cfg = suite.SuiteConfig(x_max=args.x, n_max=args.n_max, trials=args.trials, seed=args.seed, workers=_workers())
    results = suite.run_suite(cfg)
    rows = []
    for r in results:
        row = {"check": r.name, "status": r.status, "value": r.value, "detail": r.detail}
        if args.timings:
            row["wall_time"] = r.wall_time
        rows.append(row)
    failed = any(r.status == suite.FAIL for r in results)
    counts = {s: sum(r.status == s for r in results) for s in (suite.PASS, suite.FAIL, suite.REPORTED)}
    return Report("report-all", rows, failed, extra={"summary": counts})


COMMANDS = {
    "pi": cmd_pi,
    "li": cmd_li,
    "moments": cmd_moments,
    "band": cmd_band,
    "simulate": cmd_simulate,
    "legendre": cmd_legendre,
    "eh-sum": cmd_eh_sum,
    "report-all": cmd_report_all,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="primemodels", description="Probabilistic models of prime counts.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="write here instead of stdout")
        return p

    def add_class(p):
        p.add_argument("--k", type=parse_number)
        p.add_argument("--l", type=parse_number)

    p = add("pi", "exact prime count")
    p.add_argument("--x", type=parse_number, required=True)
    add_class(p)

    p = add("li", "offset logarithmic integral")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)

    for name in ("moments", "band"):
        p = add(name, f"model {name}")
        p.add_argument("--x", type=parse_number, required=True)
        p.add_argument("--model", default=None, help="M1, M1-crude, M2, M3, M3-crude or M4")
        add_class(p)
        if name == "band":
            p.add_argument("--c", type=float, required=True)

    p = add("simulate", "Monte Carlo run of the Cramer model")
    p.add_argument("--x", type=parse_number, required=True)
    p.add_argument("--trials", type=parse_number, required=True)
    p.add_argument("--seed", type=parse_number, required=True)
    p.add_argument("--c", type=float, action="append", help="coverage level (repeatable)")
    add_class(p)

    p = add("legendre", "primes between consecutive squares")
    p.add_argument("--n-max", type=parse_number, required=True)

    p = add("eh-sum", "Elliott-Halberstam sum and bound chain")
    p.add_argument("--x", type=parse_number, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--big-a", type=float, default=2.0)

    p = add("report-all", "run every grid check")
    p.add_argument("--x", type=parse_number, default=10**8, help="grid ceiling")
    p.add_argument("--n-max", type=parse_number, default=3000)
    p.add_argument("--trials", type=parse_number, default=montecarlo.DEFAULT_TRIALS)
    p.add_argument("--seed", type=parse_number, default=suite.SuiteConfig.seed)
    p.add_argument("--timings", action="store_true", help="include wall times (breaks byte-identity)")
    return parser


def config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}


def render(report: Report, args) -> str:
    cols = list(COLUMNS[report.schema])
    if report.schema == "report-all" and args.timings:
        cols.append("wall_time")
    cfg = config_echo(args)
    if args.format == "json":
        doc = {
            "version": __version__,
            "command": args.command,
            "config": cfg,
            "columns": cols,
            "rows": [{c: _json_value(r.get(c)) for c in cols} for r in report.rows],
            "status": "FAIL" if report.failed else "PASS",
        }
        doc.update(report.extra)
        return json.dumps(doc, indent=2, sort_keys=False, default=str) + "\n"
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(cfg, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in report.rows:
        w.writerow([fmt_value(r.get(c)) for c in cols])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        report = COMMANDS[args.command](args)
        text = render(report, args)
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            print(f"error: cannot write {args.out}: {e}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return EXIT_CHECK_FAILED if report.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
