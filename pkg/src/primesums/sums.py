"""Sieve-backed summation functions sampled on checkpoint grids.

Real-valued folds use an exact accumulator (the checkpoint value is the
correctly rounded sum of the evaluated terms), integer folds use Python
ints. Several folds share one sieve pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import RangeError
from .powerlog import Expr, divide_by_log
from .sieve import DEFAULT_SEGMENT_SIZE, SieveConfig, iter_segments

__all__ = [
    "CheckpointGrid",
    "Fold",
    "SumRow",
    "SumSeries",
    "DensityRow",
    "DensityReport",
    "run_folds",
    "summation_table",
    "prime_sum",
    "surrogate_sum",
    "natural_sum",
    "mertens",
    "mobius_value_distribution",
    "quantity_density",
    "mean_value",
]


@dataclass(frozen=True)
class CheckpointGrid:
    """Strictly ascending evaluation points; a point n means "after all k <= n"."""

    points: tuple[int, ...]

    def __post_init__(self):
        pts = tuple(int(p) for p in self.points)
        if not pts:
            raise RangeError("checkpoint grid is empty")
        if pts[0] < 1 or any(b <= a for a, b in zip(pts, pts[1:])):
            raise RangeError("checkpoints must be positive and strictly ascending")
        object.__setattr__(self, "points", pts)

    @classmethod
    def geometric(cls, n_max: int, points_per_decade: int = 3, start: int = 1000):
        """Points ``round(start * 10**(j/ppd))`` up to ``n_max``; ``n_max`` always included."""
        n_max = int(n_max)
        if points_per_decade < 1:
            raise RangeError("points_per_decade must be >= 1")
        pts = []
        j = 0
        while True:
            p = int(round(start * 10 ** (j / points_per_decade)))
            if p > n_max:
                break
            if not pts or p > pts[-1]:
                pts.append(p)
            j += 1
        if not pts or pts[-1] != n_max:
            pts.append(n_max)
        return cls(tuple(pts))

    @property
    def n_max(self):
        return self.points[-1]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def _as_grid(grid, minimum=2) -> CheckpointGrid:
    if isinstance(grid, (int, np.integer)):
        grid = CheckpointGrid((int(grid),))
    elif not isinstance(grid, CheckpointGrid):
        grid = CheckpointGrid(tuple(grid))
    if grid.points[0] < minimum:
        raise RangeError(f"checkpoints must be >= {minimum}")
    return grid


@dataclass(frozen=True)
class Fold:
    """A running real-valued sum over the sieve stream.

    kind "prime" sums f(p) over primes, "surrogate" sums f(k)/log k over
    k >= 2, and "natural" sums f(k) over k >= 2.
    """

    kind: str
    expr: Expr

    def __post_init__(self):
        if self.kind not in ("prime", "surrogate", "natural"):
            raise ValueError(f"unknown fold kind {self.kind!r}")

    @property
    def summand(self) -> Expr:
        return divide_by_log(self.expr) if self.kind == "surrogate" else self.expr


def _segment_terms(folds: Sequence[Fold]):
    summands = [f.summand for f in folds]
    need_primes = any(f.kind == "prime" for f in folds)
    need_range = any(f.kind != "prime" for f in folds)

    def work(seg):
        primes = seg.primes() if need_primes else None
        ks = np.arange(max(seg.lo, 2), seg.hi, dtype=np.int64) if need_range else None
        out = []
        for fold, summand in zip(folds, summands):
            pos = primes if fold.kind == "prime" else ks
            out.append((pos, summand(pos.astype(np.float64))))
        return seg.lo, seg.hi, out

    return work


def run_folds(
    folds: Sequence[Fold],
    grid,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> list[list[float]]:
    """Evaluate every fold at every checkpoint in one sieve pass.

    Returns one list of checkpoint values per fold. Raises ``OverflowError``
    if a summand or partial sum is not finite at or below the last checkpoint.
    """
    grid = _as_grid(grid)
    cfg = SieveConfig(grid.n_max, segment_size, threads)
    points = grid.points
    accs = [kernels.ExactSum() for _ in folds]
    results: list[list[float]] = [[] for _ in folds]
    next_cp = 0
    for lo, hi, per_fold in iter_segments(cfg, transform=_segment_terms(folds)):
        if next_cp == len(points):
            break
        cps = []
        while next_cp < len(points) and points[next_cp] < hi:
            cps.append(points[next_cp])
            next_cp += 1
        for acc, res, (pos, vals) in zip(accs, results, per_fold):
            cursor = 0
            for n in cps:
                idx = int(np.searchsorted(pos, n, side="right"))
                _add(acc, vals[cursor:idx], n)
                res.append(acc.value())
                cursor = idx
            if next_cp < len(points):
                _add(acc, vals[cursor:], points[next_cp])
    return results


def _add(acc, chunk, n):
    try:
        acc.add_array(chunk)
    except OverflowError as exc:
        raise OverflowError(f"sum leaves the representable range before n={n}") from exc


@dataclass
class SumRow:
    n: int
    exact: float | None = None
    surrogate: float | None = None
    asymptotic: float | None = None

    @property
    def ratio_es(self):
        return _ratio(self.exact, self.surrogate)

    @property
    def ratio_ea(self):
        return _ratio(self.exact, self.asymptotic)

    def as_dict(self):
        return {
            "n": self.n,
            "exact": self.exact,
            "surrogate": self.surrogate,
            "asymptotic": self.asymptotic,
            "ratio_es": self.ratio_es,
            "ratio_ea": self.ratio_ea,
        }


def _ratio(num, den):
    if num is None or den is None or den == 0:
        return None
    return num / den


@dataclass
class SumSeries:
    expr: Expr
    rows: list[SumRow] = field(default_factory=list)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    def __getitem__(self, n):
        for row in self.rows:
            if row.n == n:
                return row
        raise KeyError(n)


def summation_table(
    f: Expr,
    grid,
    *,
    form=None,
    exact: bool = True,
    surrogate: bool = True,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> SumSeries:
    """Exact prime sum, surrogate sum and (optionally) asymptotic value per checkpoint.

    ``form`` is an ``asym.AsymptoticForm`` (or anything with a
    ``value(n)`` method); its value fills the asymptotic column.
    """
    grid = _as_grid(grid)
    folds = []
    if exact:
        folds.append(Fold("prime", f))
    if surrogate:
        folds.append(Fold("surrogate", f))
    cols = run_folds(folds, grid, segment_size=segment_size, threads=threads) if folds else []
    cols_iter = iter(cols)
    ex = next(cols_iter) if exact else [None] * len(grid)
    su = next(cols_iter) if surrogate else [None] * len(grid)
    rows = []
    for i, n in enumerate(grid.points):
        asymptotic = form.value(n) if form is not None else None
        rows.append(SumRow(n, ex[i], su[i], asymptotic))
    return SumSeries(f, rows)


def prime_sum(f: Expr, grid, **kw) -> SumSeries:
    """``sum_{p <= n} f(p)`` at each checkpoint (exact column only)."""
    return summation_table(f, grid, surrogate=False, **kw)


def surrogate_sum(f: Expr, grid, **kw) -> SumSeries:
    """``sum_{k=2}^n f(k)/log k`` at each checkpoint (surrogate column only)."""
    return summation_table(f, grid, exact=False, **kw)


def natural_sum(f: Expr, grid, **kw) -> list[float]:
    """``sum_{k=2}^n f(k)`` at each checkpoint."""
    return run_folds([Fold("natural", f)], grid, **kw)[0]


def mean_value(f: Expr, n: int, **kw) -> float:
    """Average of f over primes relative to the whole range: ``sum_{p<=n} f(p) / n``."""
    return prime_sum(f, [n], **kw).rows[-1].exact / n


# -- integer folds ---------------------------------------------------------


@dataclass
class _Counts:
    n: int
    primes: int = 0
    mertens: int = 0
    plus: int = 0
    minus: int = 0
    zero: int = 0


def _integer_pass(grid, mobius, segment_size=DEFAULT_SEGMENT_SIZE, threads=1) -> list[_Counts]:
    grid = _as_grid(grid, minimum=1)
    points = grid.points
    cfg = SieveConfig(max(grid.n_max, 2), segment_size, threads)
    totals = _Counts(0)
    out = []
    next_cp = 0
    for seg in iter_segments(cfg, mobius=mobius):
        if next_cp == len(points):
            break
        bounds = []
        while next_cp < len(points) and points[next_cp] < seg.hi:
            bounds.append(points[next_cp])
            next_cp += 1
        if next_cp < len(points):
            bounds.append(None)
        start = max(seg.lo, 1) - seg.lo
        for n in bounds:
            stop = (n + 1 - seg.lo) if n is not None else seg.hi - seg.lo
            totals.primes += int(np.count_nonzero(seg.prime_flags[start:stop]))
            if mobius:
                mu = seg.mobius[start:stop]
                plus = int(np.count_nonzero(mu == 1))
                minus = int(np.count_nonzero(mu == -1))
                totals.plus += plus
                totals.minus += minus
                totals.zero += (stop - start) - plus - minus
                totals.mertens += plus - minus
            start = stop
            if n is not None:
                out.append(_Counts(n, totals.primes, totals.mertens, totals.plus, totals.minus, totals.zero))
    return out


def mertens(grid, **kw) -> dict[int, int]:
    """Exact ``M(n) = sum_{k<=n} mu(k)`` at each checkpoint (points may start at 1)."""
    return {c.n: c.mertens for c in _integer_pass(grid, True, **kw)}


def mobius_value_distribution(n: int, **kw) -> tuple[Fraction, Fraction, Fraction]:
    """Empirical frequencies of mu = +1, -1, 0 over 1..n, as exact fractions."""
    c = _integer_pass([n], True, **kw)[0]
    return Fraction(c.plus, n), Fraction(c.minus, n), Fraction(c.zero, n)


@dataclass
class DensityRow:
    n: int
    count: int

    @property
    def density(self):
        return self.count / self.n


@dataclass
class DensityReport:
    predicate: str
    rows: list[DensityRow]

    def __getitem__(self, n):
        for row in self.rows:
            if row.n == n:
                return row
        raise KeyError(n)


def quantity_density(predicate: str, grid, **kw) -> DensityReport:
    """Count of k <= n that are prime (or squarefree), and that count over n."""
    if predicate not in ("prime", "squarefree"):
        raise ValueError(f"predicate must be 'prime' or 'squarefree', got {predicate!r}")
    counts = _integer_pass(grid, predicate == "squarefree", **kw)
    if predicate == "prime":
        rows = [DensityRow(c.n, c.primes) for c in counts]
    else:
        rows = [DensityRow(c.n, c.plus + c.minus) for c in counts]
    return DensityReport(predicate, rows)
