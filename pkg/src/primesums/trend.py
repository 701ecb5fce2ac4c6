"""Empirical limit classification of sequences sampled on geometric grids.

The increments ``d_i = x_{i+1} - x_i`` drive everything:

* all ``|d_{i+1}/d_i| <= 0.7``: geometric convergence, limit by Aitken's
  delta-squared step;
* monotone tail otherwise: the increments are matched to a power of
  ``log n``. If ``x ~ L + c*(log n)**p`` then ``log|d_i/dlog n_i|`` is linear
  in ``log log n`` with slope ``p - 1``. Slope-derived ``p >= -0.5`` means
  the sequence keeps growing at least like ``log log n`` (diverges); smaller
  ``p`` means it settles at a logarithmic rate and the limit is extrapolated
  in ``s = 1/log n``;
* anything else (sign changes in the increments) is inconclusive.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Trend", "TrendEstimate", "classify_trend"]

GEOMETRIC_RATIO = 0.7
LOG_POWER_SPLIT = -0.5
MIN_SAMPLES = 4
TAIL = 7


class Trend(enum.Enum):
    CONVERGES = "converges"
    DIVERGES = "diverges"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class TrendEstimate:
    classification: Trend
    points: tuple[int, ...]
    samples: tuple[float, ...]
    limit: float | None = None
    sign: int = 0
    extrapolated: float | None = None
    log_power: float | None = None
    detail: str = ""

    @property
    def converges(self):
        return self.classification is Trend.CONVERGES

    @property
    def diverges(self):
        return self.classification is Trend.DIVERGES

    def as_dict(self):
        return {
            "classification": self.classification.value,
            "limit": self.limit,
            "sign": self.sign,
            "extrapolated": self.extrapolated,
            "log_power": self.log_power,
            "points": list(self.points),
            "samples": list(self.samples),
            "detail": self.detail,
        }


def classify_trend(points, values, *, tail: int = TAIL, detail: str = "") -> TrendEstimate:
    """Classify the limit behaviour of ``values`` sampled at ``points``."""
    pts = tuple(int(p) for p in points)
    xs = tuple(float(v) for v in values)
    if len(pts) != len(xs):
        raise ValueError("points and values differ in length")

    def result(cls, **kw):
        return TrendEstimate(cls, pts, xs, detail=kw.pop("detail", detail), **kw)

    if len(xs) < MIN_SAMPLES:
        return result(Trend.INCONCLUSIVE, detail=f"fewer than {MIN_SAMPLES} samples")
    if not all(math.isfinite(v) for v in xs):
        return result(Trend.INCONCLUSIVE, detail="non-finite samples")

    n = np.array(pts[-tail:], dtype=float)
    x = np.array(xs[-tail:])
    d = np.diff(x)
    scale = max(1.0, float(np.max(np.abs(x))))
    if np.all(np.abs(d) <= 1e-12 * scale):
        return result(Trend.CONVERGES, limit=xs[-1], extrapolated=xs[-1])

    nonzero = d[:-1] != 0
    ratios = np.divide(d[1:], d[:-1], out=np.full(len(d) - 1, np.inf), where=nonzero)
    if np.all(np.abs(ratios) <= GEOMETRIC_RATIO):
        limit = _aitken(x)
        return result(Trend.CONVERGES, limit=limit, extrapolated=limit)

    signs = np.sign(d)
    if not (np.all(signs > 0) or np.all(signs < 0)):
        return result(Trend.INCONCLUSIVE, detail=detail or "increments change sign")
    sign = int(signs[0])

    dlog = np.diff(np.log(n))
    mid = np.sqrt(n[:-1] * n[1:])
    slope = np.polyfit(np.log(np.log(mid)), np.log(np.abs(d) / dlog), 1)[0]
    power = float(slope + 1.0)
    if power >= LOG_POWER_SPLIT:
        return result(Trend.DIVERGES, sign=sign, log_power=power)
    if np.all(np.abs(ratios) < 1.0) and power < -3.0:
        limit = _aitken(x)
    else:
        limit = _log_rate_limit(n, x, -power)
    return result(Trend.CONVERGES, limit=limit, extrapolated=limit, log_power=power)


def _aitken(x):
    x0, x1, x2 = x[-3], x[-2], x[-1]
    den = (x2 - x1) - (x1 - x0)
    if den == 0:
        return float(x2)
    return float(x2 - (x2 - x1) ** 2 / den)


def _log_rate_limit(n, x, q):
    """Limit of ``L + c*(1/log n)**q`` through the last two samples."""
    s = (1.0 / np.log(n[-2:])) ** q
    c = (x[-2] - x[-1]) / (s[0] - s[1])
    return float(x[-1] - c * s[1])
