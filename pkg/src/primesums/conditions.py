"""Numerical verdicts on when prime sums follow their ``f(k)/log k`` surrogate.

Every limit here is estimated from a geometric checkpoint grid with
:func:`primesums.trend.classify_trend`, so verdicts are empirical by design.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .asym import DEFAULT_SPEC, QuadratureSpec, integrate
from .errors import InapplicableError, QuadratureError, RangeError
from .powerlog import T, Expr, differentiate, divide_by_log, evaluate
from .sieve import DEFAULT_SEGMENT_SIZE, SieveConfig, iter_segments
from .sums import CheckpointGrid, Fold, run_folds
from .trend import Trend, TrendEstimate, classify_trend

__all__ = [
    "AbelDecomposition",
    "abel_decompose",
    "ConditionResult",
    "ConditionReport",
    "Verdict",
    "check_sufficient",
    "check_shortcut_34",
    "check_necessary_36",
    "check_conditions",
    "largest_primes_at",
]

RATIO_ONE_TOL = 0.05
SHORTCUT_ZERO_TOL = 0.01
NECESSARY_ZERO_TOL = 0.01
NECESSARY_TAIL_MAX = 0.05
MIN_DECADES = 4


# -- Abel summation ------------------------------------------------------------


@dataclass(frozen=True)
class AbelDecomposition:
    lhs: float
    rhs: float
    residual: float


_WEIGHTS = {"prime": "prime_indicator", "prime_indicator": "prime_indicator", "inv_log": "inv_log"}


def _prime_flags_upto(n, segment_size=DEFAULT_SEGMENT_SIZE):
    cfg = SieveConfig(n, segment_size)
    parts = []
    for seg in iter_segments(cfg):
        parts.append(seg.prime_flags[: min(seg.hi, n + 1) - seg.lo])
        if seg.hi > n:
            break
    return np.concatenate(parts)


def abel_decompose(weights: str, f: Expr, n: int) -> AbelDecomposition:
    """Both sides of ``sum w_k f(k) = W(n) f(n) - int_1^n W(t) f'(t) dt``.

    ``W`` is the step function of partial weight sums (zero below 2), so the
    integral is exactly ``sum_{k=2}^{n-1} W(k) (f(k+1) - f(k))``.
    """
    try:
        kind = _WEIGHTS[weights]
    except KeyError:
        raise ValueError(f"weights must be 'prime_indicator' or 'inv_log', got {weights!r}") from None
    n = int(n)
    if n < 2:
        raise RangeError("n must be >= 2")
    k = np.arange(2, n + 1, dtype=np.float64)
    fk = f(k)
    if kind == "prime_indicator":
        w = _prime_flags_upto(n)[2:].astype(np.float64)
    else:
        w = 1.0 / np.log(k)
    W = np.cumsum(w)
    lhs = math.fsum((w * fk).tolist())
    integral = math.fsum((W[:-1] * np.diff(fk)).tolist())
    rhs = float(W[-1] * fk[-1]) - integral
    residual = abs(lhs - rhs) / max(1.0, abs(lhs))
    return AbelDecomposition(lhs, rhs, residual)


# -- reports -------------------------------------------------------------------


class Verdict(enum.Enum):
    SUFFICIENT_PASS = "sufficient_pass"
    NECESSARY_FAIL = "necessary_fail"
    UNDECIDED = "undecided"


@dataclass
class ConditionResult:
    name: str
    description: str
    passed: bool
    trend: TrendEstimate | None = None
    applicable: bool = True
    detail: str = ""

    def as_dict(self):
        return {
            "name": self.name,
            "description": self.description,
            "applicable": self.applicable,
            "passed": self.passed,
            "trend": self.trend.as_dict() if self.trend is not None else None,
            "detail": self.detail,
        }


@dataclass
class ConditionReport:
    expr: Expr
    cond1: ConditionResult | None = None
    cond2: ConditionResult | None = None
    cond3: ConditionResult | None = None
    shortcut34: ConditionResult | None = None
    necessary36: ConditionResult | None = None
    diagnostics: list[str] = field(default_factory=list)

    @property
    def sufficient(self):
        return all(c is not None and c.passed for c in (self.cond1, self.cond2, self.cond3))

    @property
    def overall(self) -> Verdict:
        if self.necessary36 is not None and not self.necessary36.passed:
            return Verdict.NECESSARY_FAIL
        if self.sufficient:
            return Verdict.SUFFICIENT_PASS
        return Verdict.UNDECIDED

    def as_dict(self):
        out = {"f": str(self.expr), "overall": self.overall.value}
        for key in ("cond1", "cond2", "cond3", "shortcut34", "necessary36"):
            c = getattr(self, key)
            out[key] = c.as_dict() if c is not None else None
        out["diagnostics"] = list(self.diagnostics)
        return out


def _grid(grid) -> CheckpointGrid:
    return grid if isinstance(grid, CheckpointGrid) else CheckpointGrid(tuple(grid))


def _sample_derivative(f: Expr, lo, hi, points=()):
    xs = np.unique(np.concatenate([np.geomspace(lo, hi, 129), np.asarray(points, dtype=float)]))
    with np.errstate(over="ignore", invalid="ignore"):
        return differentiate(f)(xs)


def _moment_integrand(f: Expr) -> Expr:
    """``t f'(t) / log t``."""
    return divide_by_log(T * differentiate(f))


def _cumulative_integrals(h: Expr, points, spec):
    out = []
    total = 0.0
    prev = 2.0
    for n in points:
        total += integrate(h, prev, float(n), spec)
        prev = float(n)
        out.append(total)
    return out


def _exact_b_integrals(f: Expr, points, chunk=2**20):
    """``int_1^n B(t) f'(t) dt`` and ``B(n)`` with the exact step function ``B``."""
    integral = kernels.ExactSum()
    b_acc = kernels.ExactSum()
    b_prev = 0.0
    f_prev = None
    out = []
    k0 = 2
    for n in points:
        while k0 <= n:
            k1 = min(n, k0 + chunk - 1)
            k = np.arange(k0, k1 + 1, dtype=np.float64)
            fk = f(k)
            inv = 1.0 / np.log(k)
            B = b_prev + np.cumsum(inv)
            if f_prev is not None:
                # step from k0-1 to k0 carries B(k0-1)
                integral.add(b_prev * (fk[0] - f_prev))
            integral.add_array(np.ascontiguousarray(B[:-1] * np.diff(fk)))
            b_acc.add_array(inv)
            b_prev = b_acc.value()
            f_prev = fk[-1]
            k0 = k1 + 1
        out.append((integral.value(), b_prev))
    return out


def check_sufficient(
    f: Expr,
    grid,
    *,
    spec: QuadratureSpec = DEFAULT_SPEC,
    exact_b: bool = False,
) -> ConditionReport:
    """Evaluate the three sufficient conditions at every checkpoint.

    1. ``int_2^n t f'(t)/log t dt  /  (n f(n)/log n)`` tends to a limit other
       than 1 (or diverges);
    2. f is monotone with non-vanishing derivative over the grid range;
    3. ``int_2^n t f'(t)/log t dt`` diverges.

    With ``exact_b`` condition 1 and 3 use the exact step function
    ``B(t) = sum_{2<=k<=t} 1/log k`` instead of its ``t/log t`` approximation.
    """
    grid = _grid(grid)
    points = grid.points
    if math.log10(points[-1] / points[0]) < MIN_DECADES - 1e-9 or len(points) < 4:
        raise RangeError(f"condition checks need a grid spanning >= {MIN_DECADES} decades")
    report = ConditionReport(f)

    desc1 = "limit of int_2^n t f'(t)/log(t) dt / (n f(n)/log n) is not 1"
    desc3 = "int_2^n t f'(t)/log(t) dt diverges"
    if exact_b:
        desc1 = "limit of int_1^n B(t) f'(t) dt / (B(n) f(n)) is not 1 (exact B)"
        desc3 = "int_1^n B(t) f'(t) dt diverges (exact B)"
    try:
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            if exact_b:
                pairs = _exact_b_integrals(f, points)
                integrals = [p[0] for p in pairs]
                denoms = [b * f(float(n)) for (_, b), n in zip(pairs, points)]
            else:
                integrals = _cumulative_integrals(_moment_integrand(f), points, spec)
                denoms = [n * f(float(n)) / math.log(n) for n in points]
            ratios = [i / d if d != 0 else math.nan for i, d in zip(integrals, denoms)]
    except (QuadratureError, OverflowError) as exc:
        msg = f"integral evaluation failed: {exc}"
        report.diagnostics.append(msg)
        t = TrendEstimate(Trend.INCONCLUSIVE, points, (), detail=msg)
        report.cond1 = ConditionResult("cond1", desc1, False, t, detail=msg)
        report.cond3 = ConditionResult("cond3", desc3, False, t, detail=msg)
    else:
        t1 = classify_trend(points, ratios)
        ok1 = t1.diverges or (t1.converges and abs(t1.limit - 1.0) > RATIO_ONE_TOL)
        report.cond1 = ConditionResult("cond1", desc1, ok1, t1)
        t3 = classify_trend(points, integrals)
        report.cond3 = ConditionResult("cond3", desc3, t3.diverges, t3)

    deriv = _sample_derivative(f, points[0], points[-1], points)
    monotone = bool(np.all(deriv > 0) or np.all(deriv < 0))
    report.cond2 = ConditionResult(
        "cond2",
        f"f monotone with f' != 0 on [{points[0]}, {points[-1]}]",
        monotone,
        detail="" if monotone else "f' vanishes or changes sign on the sampled range",
    )
    return report


def check_shortcut_34(f: Expr, grid) -> ConditionResult:
    """Monotone-increasing shortcut: ``f(n) / (n f'(n))`` must not tend to 0.

    Applies only when f' > 0 on the grid and f grows (``f(n_max) > 10 |f(2)|``);
    otherwise raises :class:`InapplicableError`.
    """
    grid = _grid(grid)
    points = grid.points
    desc = "f increasing to infinity and limit of f(n)/(n f'(n)) is not 0"
    d = differentiate(f)
    with np.errstate(over="ignore", invalid="ignore"):
        dv = d(np.asarray(points, dtype=float))
        f_top = f(float(points[-1]))
    if not np.all(dv > 0):
        raise InapplicableError("f' is not positive on the grid")
    if not (f_top > 0 and f_top > 10.0 * abs(f(2.0))):
        raise InapplicableError("f does not grow on the sampled range")
    # ratio taken on g_max**-n scaled values so exponential factors cancel first
    x = np.asarray(points, dtype=float)
    shift = x * math.log(f.max_base)
    r = np.array([evaluate(f, xi, s) / (xi * evaluate(d, xi, s)) for xi, s in zip(x, shift)])
    trend = classify_trend(points, r)
    passed = trend.diverges or (trend.converges and abs(trend.limit) > SHORTCUT_ZERO_TOL)
    return ConditionResult("shortcut34", desc, passed, trend)


def largest_primes_at(points, segment_size=DEFAULT_SEGMENT_SIZE) -> list[int]:
    """Largest prime <= n for each checkpoint n (points ascending, all >= 2)."""
    points = list(points)
    cfg = SieveConfig(points[-1], segment_size)
    out = []
    last = None
    i = 0
    for seg in iter_segments(cfg):
        primes = seg.primes()
        while i < len(points) and points[i] < seg.hi:
            idx = int(np.searchsorted(primes, points[i], side="right"))
            out.append(int(primes[idx - 1]) if idx else last)
            i += 1
        if len(primes):
            last = int(primes[-1])
        if i == len(points):
            break
    return out


def _scaled_surrogate(f: Expr, p: int, chunk=2**20):
    """``(f(p), sum_{k=2}^p f(k)/log k)`` both multiplied by ``g_max**-p``."""
    shift = p * math.log(f.max_base)
    summand = divide_by_log(f)
    acc = kernels.ExactSum()
    for k0 in range(2, p + 1, chunk):
        k = np.arange(k0, min(p, k0 + chunk - 1) + 1, dtype=np.float64)
        acc.add_array(evaluate(summand, k, shift))
    return evaluate(f, float(p), shift), acc.value()


def check_necessary_36(f: Expr, grid) -> ConditionResult:
    """``|f(p)| / |sum_{k=2}^p f(k)/log k|`` must tend to 0 along primes.

    Evaluated at the largest prime below each checkpoint. Passes when the
    ratio converges to 0 (within 0.01) or decreases monotonically to below
    0.05 at the last checkpoint.
    """
    grid = _grid(grid)
    primes = sorted(set(largest_primes_at(grid.points)))
    desc = "|f(p)| / |sum_{k<=p} f(k)/log k| tends to 0 along primes"
    if f.max_base == 1.0:
        sums = run_folds([Fold("surrogate", f)], primes)[0]
        tops = f(np.asarray(primes, dtype=float))
    else:
        pairs = [_scaled_surrogate(f, p) for p in primes]
        tops = [t for t, _ in pairs]
        sums = [s for _, s in pairs]
    q = []
    for p, top, s in zip(primes, tops, sums):
        if s == 0:
            raise ZeroDivisionError(f"surrogate sum vanishes at p={p}")
        q.append(abs(top / s))
    trend = classify_trend(primes, q)
    decreasing = len(q) >= 4 and all(b < a for a, b in zip(q[-4:], q[-3:]))
    passed = (trend.converges and abs(trend.limit) <= NECESSARY_ZERO_TOL) or (
        decreasing and q[-1] < NECESSARY_TAIL_MAX
    )
    return ConditionResult("necessary36", desc, passed, trend)


def check_conditions(f: Expr, grid, *, spec: QuadratureSpec = DEFAULT_SPEC, exact_b: bool = False) -> ConditionReport:
    """Sufficient conditions, the increasing-f shortcut (when it applies) and the necessary condition."""
    report = check_sufficient(f, grid, spec=spec, exact_b=exact_b)
    try:
        report.shortcut34 = check_shortcut_34(f, grid)
    except InapplicableError as exc:
        report.shortcut34 = ConditionResult(
            "shortcut34",
            "f increasing to infinity and limit of f(n)/(n f'(n)) is not 0",
            False,
            applicable=False,
            detail=str(exc),
        )
    try:
        report.necessary36 = check_necessary_36(f, grid)
    except ZeroDivisionError as exc:
        report.diagnostics.append(str(exc))
    return report
