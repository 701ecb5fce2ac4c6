"""Command-line entry point.

Exit codes: 0 ok / sufficient conditions pass, 1 necessary condition fails,
2 parse error, 3 range error, 4 output I/O error, 5 undecided.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from . import asym, conditions, sums
from .errors import ParseError, QuadratureError, RangeError
from .powerlog import parse
from .sieve import DEFAULT_SEGMENT_SIZE, MAX_LIMIT

EXIT_OK = 0
EXIT_NECESSARY_FAIL = 1
EXIT_PARSE = 2
EXIT_RANGE = 3
EXIT_IO = 4
EXIT_UNDECIDED = 5

TABLE_COLUMNS = ["n", "exact", "surrogate", "asymptotic", "ratio_es", "ratio_ea"]


@dataclass
class RunSpec:
    command: str
    f_source: str | None = None
    n_max: int | None = None
    points_per_decade: int = 3
    formula: str = "auto"
    output: str = "csv"
    out_path: str | None = None
    extra: dict = field(default_factory=dict)


def _integer(text):
    """Integer flag value; scientific notation such as ``1e8`` is accepted."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _real(text):
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="primesums", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, f=False, n_max=None):
        if f:
            p.add_argument("--f", required=True, dest="f_source", help='expression in t, e.g. "log(t)/t"')
        if n_max is not None:
            p.add_argument("--n-max", type=_integer, default=n_max)
            p.add_argument("--points-per-decade", type=_integer, default=3)
        p.add_argument("--output", choices=["csv", "json"], default="csv")
        p.add_argument("--out", dest="out_path", default=None, help="output file (default: stdout)")
        p.add_argument("--threads", type=_integer, default=1)
        p.add_argument("--segment-size", type=_integer, default=DEFAULT_SEGMENT_SIZE)

    p = sub.add_parser("table", help="exact vs surrogate vs asymptotic prime sums")
    common(p, f=True, n_max=10**6)
    p.add_argument("--formula", default="auto", help='"auto", "none" or a form such as "sum_p_pow_m:m=1"')

    p = sub.add_parser("check", help="sufficient / necessary condition report")
    common(p, f=True, n_max=10**7)
    p.add_argument("--exact-b", action="store_true", help="use the exact B(t) step function")

    p = sub.add_parser("mertens", help="Mertens function at checkpoints")
    common(p, n_max=10**6)

    p = sub.add_parser("density", help="density of primes or squarefree integers")
    common(p, n_max=10**6)
    p.add_argument("--predicate", choices=["prime", "squarefree"], default="prime")

    p = sub.add_parser("abel", help="both sides of the Abel summation identity")
    common(p, f=True)
    p.add_argument("--n", type=_integer, required=True)
    p.add_argument("--weights", choices=["prime", "prime_indicator", "inv_log"], default="prime")

    p = sub.add_parser("quad", help="adaptive quadrature of f over [a, b]")
    common(p, f=True)
    p.add_argument("--a", type=_real, default=2.0)
    p.add_argument("--b", type=_real, required=True)
    p.add_argument("--rel-tol", type=_real, default=asym.DEFAULT_SPEC.rel_tol)
    return parser


def _spec_from_args(args) -> RunSpec:
    base = {"command", "f_source", "n_max", "points_per_decade", "formula", "output", "out_path"}
    spec = RunSpec(
        command=args.command,
        f_source=getattr(args, "f_source", None),
        n_max=getattr(args, "n_max", None),
        points_per_decade=getattr(args, "points_per_decade", 3),
        formula=getattr(args, "formula", "auto") if args.command == "table" else "none",
        output=args.output,
        out_path=args.out_path,
    )
    spec.extra = {k: v for k, v in sorted(vars(args).items()) if k not in base}
    return spec


def _grid(spec: RunSpec, start: int):
    if spec.n_max is None or not 2 <= spec.n_max <= MAX_LIMIT:
        raise RangeError(f"--n-max must lie in [2, 2^40], got {spec.n_max}")
    if spec.points_per_decade < 1:
        raise RangeError("--points-per-decade must be >= 1")
    return sums.CheckpointGrid.geometric(spec.n_max, spec.points_per_decade, start=min(start, spec.n_max))


def _sieve_kw(spec):
    return {"segment_size": spec.extra["segment_size"], "threads": spec.extra["threads"]}


def run_table(spec: RunSpec):
    f = parse(spec.f_source)
    if spec.n_max is None or spec.n_max < 1000:
        raise RangeError("table needs --n-max >= 1000")
    grid = _grid(spec, 1000)
    if spec.formula == "auto":
        form = asym.match_form(f)
    elif spec.formula == "none":
        form = None
    else:
        form = asym.parse_form(spec.formula)
    series = sums.summation_table(f, grid, form=form, **_sieve_kw(spec))
    rows = [row.as_dict() for row in series.rows]
    meta = {"formula": form.label() if form is not None else None}
    return EXIT_OK, rows, meta


def run_check(spec: RunSpec):
    f = parse(spec.f_source)
    if spec.n_max is None or spec.n_max < 1000:
        raise RangeError("check needs --n-max >= 1000")
    grid = _grid(spec, 1000)
    report = conditions.check_conditions(f, grid, exact_b=spec.extra.get("exact_b", False))
    code = {
        conditions.Verdict.SUFFICIENT_PASS: EXIT_OK,
        conditions.Verdict.NECESSARY_FAIL: EXIT_NECESSARY_FAIL,
        conditions.Verdict.UNDECIDED: EXIT_UNDECIDED,
    }[report.overall]
    return code, report.as_dict(), {}


def run_mertens(spec: RunSpec):
    grid = _grid(spec, 10)
    values = sums.mertens(grid, **_sieve_kw(spec))
    return EXIT_OK, [{"n": n, "M": m} for n, m in values.items()], {}


def run_density(spec: RunSpec):
    grid = _grid(spec, 10)
    report = sums.quantity_density(spec.extra["predicate"], grid, **_sieve_kw(spec))
    rows = [{"n": r.n, "count": r.count, "density": r.density} for r in report.rows]
    return EXIT_OK, rows, {}


def run_abel(spec: RunSpec):
    f = parse(spec.f_source)
    n = spec.extra["n"]
    if not 2 <= n <= MAX_LIMIT:
        raise RangeError(f"--n must lie in [2, 2^40], got {n}")
    d = conditions.abel_decompose(spec.extra["weights"], f, n)
    return EXIT_OK, [{"n": n, "lhs": d.lhs, "rhs": d.rhs, "residual": d.residual}], {}


def run_quad(spec: RunSpec):
    f = parse(spec.f_source)
    a, b = spec.extra["a"], spec.extra["b"]
    qspec = asym.QuadratureSpec(rel_tol=spec.extra["rel_tol"]) if spec.extra["rel_tol"] > 0 else None
    if qspec is None:
        raise RangeError("--rel-tol must be positive")
    value, err = asym.integrate_with_error(f, a, b, qspec)
    return EXIT_OK, [{"a": a, "b": b, "value": value, "error": err}], {}


RUNNERS = {
    "table": run_table,
    "check": run_check,
    "mertens": run_mertens,
    "density": run_density,
    "abel": run_abel,
    "quad": run_quad,
}


def _check_csv(report: dict):
    rows = []
    for key in ("cond1", "cond2", "cond3", "shortcut34", "necessary36"):
        c = report.get(key)
        if c is None:
            continue
        trend = c["trend"] or {}
        rows.append({
            "condition": key,
            "applicable": c["applicable"],
            "passed": c["passed"],
            "classification": trend.get("classification"),
            "limit": trend.get("limit"),
            "description": c["description"],
        })
    rows.append({"condition": "overall", "passed": report["overall"]})
    return rows


def render(spec: RunSpec, payload, meta, runtime_ms) -> str:
    if spec.output == "json":
        key = "report" if spec.command == "check" else "rows"
        doc = {"spec": asdict(spec), key: payload, "runtime_ms": runtime_ms}
        if meta:
            doc["meta"] = meta
        return json.dumps(doc, indent=2) + "\n"
    rows = _check_csv(payload) if spec.command == "check" else payload
    if spec.command == "table":
        columns = TABLE_COLUMNS
    else:
        columns = list(dict.fromkeys(k for row in rows for k in row))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else row.get(c) for c in columns])
    return buf.getvalue()


def run(argv=None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    spec = _spec_from_args(args)
    t0 = time.perf_counter()
    try:
        code, payload, meta = RUNNERS[spec.command](spec)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (RangeError, OverflowError, QuadratureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    runtime_ms = (time.perf_counter() - t0) * 1000.0
    text = render(spec, payload, meta, runtime_ms)
    try:
        if spec.out_path:
            with open(spec.out_path, "w", newline="") as fh:
                fh.write(text)
        else:
            stdout.write(text)
            stdout.flush()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
