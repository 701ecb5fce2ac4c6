"""Quadrature and closed-form leading terms for prime-argument sums.

Integrals always start at t = 2. Long ranges are integrated in u = log t,
where every power-log integrand is smooth and slowly varying, so a few
Gauss-Kronrod panels per unit of u are enough.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import QuadratureError, RangeError, ShapeError
from .powerlog import ONE, T, Expr, differentiate, divide_by_log

__all__ = [
    "QuadratureSpec",
    "integrate",
    "integrate_with_error",
    "log_integral_J1",
    "EulerMaclaurinEstimate",
    "euler_maclaurin_estimate",
    "FormKind",
    "AsymptoticForm",
    "closed_form",
    "match_form",
    "parse_form",
    "parts_identity_residual",
]


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_depth: int = 50

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_depth < 10:
            raise ValueError("max_depth must be >= 10")


DEFAULT_SPEC = QuadratureSpec()

# 15-point Kronrod nodes (non-negative half) with 7-point Gauss embedded at odd indices.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK, _XK[-2::-1]])
_WK_FULL = np.concatenate([_WK, _WK[-2::-1]])
_WG_FULL = np.zeros(15)
_WG_FULL[1:7:2] = _WG[:3]
_WG_FULL[7] = _WG[3]
_WG_FULL[9:15:2] = _WG[2::-1]

LOG_TRANSFORM_SPAN = 1e3


def _gk15(h: Callable, lo: np.ndarray, hi: np.ndarray):
    """Kronrod estimate and |K - G| for each interval [lo_i, hi_i]."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = h(x)
    if not np.isfinite(y).all():
        raise QuadratureError("integrand is not finite on the interval", math.nan, math.inf)
    k = half * (y @ _WK_FULL)
    g = half * (y @ _WG_FULL)
    return k, np.abs(k - g)


def integrate_with_error(f, a: float, b: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """Adaptive Gauss-Kronrod quadrature of f over [a, b]; returns (value, error bound).

    ``f`` is an :class:`Expr` or a vectorized callable defined for t >= 2.
    """
    if not 2.0 <= a <= b:
        raise RangeError(f"integration requires 2 <= a <= b, got a={a!r}, b={b!r}")
    if a == b:
        return 0.0, 0.0
    func = f if callable(f) else (lambda t: f(t))
    if b / a >= LOG_TRANSFORM_SPAN:
        def h(u):
            t = np.exp(u)
            return func(t) * t
        lo_end, hi_end = math.log(a), math.log(b)
        panels = max(1, math.ceil(hi_end - lo_end))
    else:
        h = func
        lo_end, hi_end = float(a), float(b)
        panels = 1
    with np.errstate(over="ignore", invalid="ignore"):
        edges = np.linspace(lo_end, hi_end, panels + 1)
        edges[0], edges[-1] = lo_end, hi_end
        vals, errs = _gk15(h, edges[:-1], edges[1:])
        # heap keyed on -error; the counter makes ordering deterministic
        heap = [(-e, i, l, r, v, 0) for i, (l, r, v, e) in enumerate(zip(edges[:-1], edges[1:], vals, errs))]
        heapq.heapify(heap)
        counter = len(heap)
        frozen_val, frozen_err = [], []
        while True:
            live_vals = [item[4] for item in heap]
            total = math.fsum(live_vals + frozen_val)
            err = math.fsum([-item[0] for item in heap] + frozen_err)
            tol = max(spec.abs_tol, spec.rel_tol * abs(total))
            if err <= tol:
                return total, err
            if not heap:
                raise QuadratureError("maximum subdivision depth reached", total, err)
            neg_e, _, l, r, v, depth = heapq.heappop(heap)
            if depth >= spec.max_depth or r - l <= 4 * np.spacing(max(abs(l), abs(r))):
                frozen_val.append(v)
                frozen_err.append(-neg_e)
                continue
            m = 0.5 * (l + r)
            cv, ce = _gk15(h, np.array([l, m]), np.array([m, r]))
            for (cl, cr), cvi, cei in zip(((l, m), (m, r)), cv, ce):
                heapq.heappush(heap, (-float(cei), counter, cl, cr, float(cvi), depth + 1))
                counter += 1


def integrate(f, a: float, b: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int_a^b f(t) dt`` to ``spec`` tolerance (raises :class:`QuadratureError` otherwise)."""
    return integrate_with_error(f, a, b, spec)[0]


_INV_LOG = divide_by_log(ONE)


def log_integral_J1(x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``J1(x) = int_2^x du / log u``."""
    if x < 2:
        raise RangeError(f"J1 requires x >= 2, got {x!r}")
    return integrate(_INV_LOG, 2.0, x, spec)


# -- Euler-Maclaurin style estimates -----------------------------------------


@dataclass
class EulerMaclaurinEstimate:
    estimate: float
    constant: float | None
    error_band: float
    stabilized: bool
    differences: dict[int, float] = field(default_factory=dict)


def _sample_points(lo, hi, count=65):
    return np.unique(np.geomspace(lo, hi, count))


def euler_maclaurin_estimate(
    f: Expr,
    n: int,
    shape: str,
    *,
    start: int | None = None,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> EulerMaclaurinEstimate:
    """Estimate ``sum_{k=start}^n f(k)`` as an integral from 2 plus a fitted constant.

    ``shape`` is "decreasing_to_zero" or "nondecreasing". For the decreasing
    case the constant is fitted from ``D(m) = sum_{k<=m} f(k) - int_2^m f`` at
    m = n/16, ..., n (Aitken-extrapolated); it counts as stabilized when the
    last two D values differ by at most |f(n)|. The nondecreasing case has no
    constant and an error band of |f(n)|.

    ``start`` defaults to 1 for functions without a log factor and 2 otherwise.
    """
    from .sums import natural_sum

    n = int(n)
    if n < 32:
        raise RangeError("euler_maclaurin_estimate needs n >= 32")
    if start is None:
        start = 2 if f.has_log_factor() else 1
    if start not in (1, 2):
        raise RangeError("start must be 1 or 2")
    deriv = differentiate(f)(_sample_points(2.0, float(n)))
    f_n = f(float(n))
    if shape == "decreasing_to_zero":
        if not (deriv < 0).all() or f_n < 0:
            raise ShapeError("f is not strictly decreasing towards zero on [2, n]")
    elif shape == "nondecreasing":
        if not (deriv >= 0).all():
            raise ShapeError("f is not non-decreasing on [2, n]")
        integral = integrate(f, 2.0, n, spec)
        return EulerMaclaurinEstimate(integral, None, abs(f_n), True)
    else:
        raise ValueError(f"unknown shape {shape!r}")

    ms = sorted({max(3, n // d) for d in (16, 8, 4, 2, 1)})
    sums = natural_sum(f, ms)
    head = f.value_at_one() if start == 1 else 0.0
    diffs = {}
    integral = 0.0
    prev = 2.0
    for m, s in zip(ms, sums):
        integral += integrate(f, prev, m, spec)
        prev = m
        diffs[m] = s + head - integral
    d = [diffs[m] for m in ms]
    stabilized = len(d) >= 2 and abs(d[-1] - d[-2]) <= abs(f_n)
    constant = d[-1]
    if len(d) >= 3:
        d1, d2 = d[-2] - d[-3], d[-1] - d[-2]
        if d2 != d1 and d1 != 0 and 0 < d2 / d1 < 1:
            constant = d[-1] - d2 * d2 / (d2 - d1)
    return EulerMaclaurinEstimate(integral + constant, constant, abs(f_n), stabilized, diffs)


# -- closed-form catalog -----------------------------------------------------


class FormKind(enum.Enum):
    SUM_RECIPROCAL_P = "sum_reciprocal_p"
    SUM_LOG_P = "sum_log_p"
    SUM_LOGP_OVER_P = "sum_logp_over_p"
    SUM_PL_LOGP = "sum_pl_logp"
    SUM_LOGLP_OVER_P = "sum_loglp_over_p"
    SUM_P_POW_M = "sum_p_pow_m"
    POWER_SUM = "power_sum"
    PI_N = "pi_n"


_PARAMETRIZED = {
    FormKind.SUM_PL_LOGP: ("l", lambda v: v >= 0, "l >= 0"),
    FormKind.SUM_LOGLP_OVER_P: ("l", lambda v: v >= 1, "l >= 1"),
    FormKind.SUM_P_POW_M: ("m", lambda v: v > -1, "m > -1"),
    FormKind.POWER_SUM: ("m", lambda v: v > -1, "m > -1"),
}


@dataclass(frozen=True)
class AsymptoticForm:
    """Leading term of a catalogued sum, optionally scaled by a constant factor."""

    kind: FormKind
    param: float | None = None
    scale: float = 1.0

    def __post_init__(self):
        kind = FormKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in _PARAMETRIZED:
            name, ok, text = _PARAMETRIZED[kind]
            if self.param is None:
                raise RangeError(f"{kind.value} requires parameter {name}")
            if not ok(self.param):
                raise RangeError(f"{kind.value} requires {text}, got {self.param!r}")
        elif self.param is not None:
            raise RangeError(f"{kind.value} takes no parameter")

    def value(self, n) -> float:
        return self.scale * closed_form(self, n)

    def label(self) -> str:
        if self.param is None:
            return self.kind.value
        name = _PARAMETRIZED[self.kind][0]
        return f"{self.kind.value}:{name}={_num(self.param)}"


def _num(x):
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def closed_form(form: AsymptoticForm, n) -> float:
    """Leading term of ``form`` at n, exactly as the catalogue states it (scale ignored)."""
    if n < 3:
        raise RangeError(f"closed forms are evaluated for n >= 3, got {n!r}")
    n = float(n)
    ln = math.log(n)
    k = form.kind
    if k is FormKind.SUM_RECIPROCAL_P:
        return math.log(ln)
    if k is FormKind.SUM_LOG_P:
        return n
    if k is FormKind.SUM_LOGP_OVER_P:
        return ln
    if k is FormKind.SUM_PL_LOGP:
        return n ** (form.param + 1) / (form.param + 1)
    if k is FormKind.SUM_LOGLP_OVER_P:
        return ln ** form.param / form.param
    if k is FormKind.SUM_P_POW_M:
        return n ** (form.param + 1) / ((form.param + 1) * ln)
    if k is FormKind.POWER_SUM:
        return n ** (form.param + 1) / (form.param + 1)
    if k is FormKind.PI_N:
        return n / ln
    raise ValueError(k)


def match_form(f: Expr) -> AsymptoticForm | None:
    """Structural match of a single-term power-log f against the prime-sum catalogue."""
    if len(f.terms) != 1:
        return None
    term = f.terms[0]
    c, a, b = term.coeff, term.a, term.b
    if term.g != 1.0:
        return None
    if b == 0:
        if a == -1:
            return AsymptoticForm(FormKind.SUM_RECIPROCAL_P, scale=c)
        if a == 0:
            return AsymptoticForm(FormKind.PI_N, scale=c)
        if a > -1:
            return AsymptoticForm(FormKind.SUM_P_POW_M, a, scale=c)
        return None
    if a == 0 and b == 1:
        return AsymptoticForm(FormKind.SUM_LOG_P, scale=c)
    if a == -1 and b == 1:
        return AsymptoticForm(FormKind.SUM_LOGP_OVER_P, scale=c)
    if a == -1 and b >= 2:
        return AsymptoticForm(FormKind.SUM_LOGLP_OVER_P, float(b), scale=c)
    if b == 1 and a >= 0:
        return AsymptoticForm(FormKind.SUM_PL_LOGP, a, scale=c)
    return None


def parse_form(text: str) -> AsymptoticForm:
    """Parse ``"sum_p_pow_m:m=1"``, ``"sum_p_pow_m:1"`` or a bare kind name."""
    name, _, rest = text.strip().partition(":")
    try:
        kind = FormKind(name.strip().lower())
    except ValueError:
        raise RangeError(f"unknown asymptotic form {name!r}") from None
    param = None
    if rest:
        rest = rest.split("=", 1)[-1]
        try:
            param = float(rest)
        except ValueError:
            raise RangeError(f"bad parameter {rest!r} for {kind.value}") from None
    return AsymptoticForm(kind, param)


# -- integration by parts ----------------------------------------------------


def parts_identity_residual(f: Expr, n, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Relative gap between both sides of the by-parts identity with t/log t for J1.

    ``L = int_2^n f/log t`` and
    ``R = f(n) n/log n - 2 f(2)/log 2 - int_2^n t f'(t)/log t dt``;
    returns ``|L - R| / |L|``.
    """
    if n < 3:
        raise RangeError("n must be >= 3")
    lhs = integrate(divide_by_log(f), 2.0, n, spec)
    inner = integrate(divide_by_log(T * differentiate(f)), 2.0, n, spec)
    rhs = f(float(n)) * n / math.log(n) - 2.0 * f(2.0) / math.log(2.0) - inner
    if lhs == 0:
        raise ZeroDivisionError("left-hand integral vanishes")
    return abs(lhs - rhs) / abs(lhs)
