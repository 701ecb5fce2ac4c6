"""Segmented sieve of Eratosthenes with per-segment Moebius values.

Segments are always full blocks ``[j*S, (j+1)*S)`` even when the last one
runs past the limit; consumers mask to the limit themselves. Keeping the
blocks identical regardless of the limit is what makes folds to different
limits agree bit for bit on their common prefix.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import kernels
from .errors import RangeError

__all__ = [
    "SieveConfig",
    "Segment",
    "base_primes",
    "iter_segments",
    "stream_primes",
    "stream_mobius",
    "pi",
]

MAX_LIMIT = 2**40
DEFAULT_SEGMENT_SIZE = 2**20


@dataclass(frozen=True)
class SieveConfig:
    limit: int
    segment_size: int = DEFAULT_SEGMENT_SIZE
    threads: int = 1

    def __post_init__(self):
        if int(self.limit) != self.limit or not 2 <= self.limit <= MAX_LIMIT:
            raise RangeError(f"sieve limit must be an integer in [2, 2^40], got {self.limit!r}")
        if int(self.segment_size) != self.segment_size or self.segment_size < 2**10:
            raise RangeError(f"segment_size must be an integer >= 1024, got {self.segment_size!r}")
        if self.threads < 1:
            raise RangeError("threads must be >= 1")
        object.__setattr__(self, "limit", int(self.limit))
        object.__setattr__(self, "segment_size", int(self.segment_size))

    @property
    def n_segments(self):
        return self.limit // self.segment_size + 1

    @property
    def sieve_end(self):
        """Exclusive upper end of the last (full) segment."""
        return self.n_segments * self.segment_size


@dataclass
class Segment:
    lo: int
    hi: int
    prime_flags: np.ndarray
    mobius: np.ndarray | None = None

    def primes(self) -> np.ndarray:
        return self.lo + np.flatnonzero(self.prime_flags).astype(np.int64)


def base_primes(bound: int) -> np.ndarray:
    """All primes <= bound (small monolithic sieve), as int64."""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(bound + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def iter_segments(
    cfg: SieveConfig,
    mobius: bool = False,
    transform: Callable[[Segment], object] | None = None,
) -> Iterator:
    """Yield segments (or ``transform(segment)``) in ascending order.

    With ``cfg.threads > 1`` segments are produced by a worker pool and
    merged back in order, so consumers see the same sequence either way.
    """
    bp = base_primes(math.isqrt(cfg.sieve_end - 1))
    size = cfg.segment_size

    def build(j):
        lo, hi = j * size, (j + 1) * size
        seg = Segment(lo, hi, kernels.sieve_segment(lo, hi, bp))
        if mobius:
            seg.mobius = kernels.mobius_segment(lo, hi, bp)
        return transform(seg) if transform is not None else seg

    if cfg.threads == 1:
        for j in range(cfg.n_segments):
            yield build(j)
        return
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        pending = deque()
        nxt = 0
        while nxt < cfg.n_segments and len(pending) < 2 * cfg.threads:
            pending.append(pool.submit(build, nxt))
            nxt += 1
        while pending:
            result = pending.popleft().result()
            if nxt < cfg.n_segments:
                pending.append(pool.submit(build, nxt))
                nxt += 1
            yield result


def stream_primes(cfg: SieveConfig, visit: Callable[[int], object]) -> None:
    """Call ``visit(p)`` for every prime p <= limit, ascending."""
    for seg in iter_segments(cfg):
        primes = seg.primes()
        for p in primes[primes <= cfg.limit].tolist():
            visit(p)


def stream_mobius(cfg: SieveConfig, visit: Callable[[int, int], object]) -> None:
    """Call ``visit(k, mu(k))`` for every 1 <= k <= limit, ascending."""
    for seg in iter_segments(cfg, mobius=True):
        start = max(seg.lo, 1)
        stop = min(seg.hi, cfg.limit + 1)
        if start >= stop:
            continue
        values = seg.mobius[start - seg.lo : stop - seg.lo].tolist()
        for k, mu in enumerate(values, start):
            visit(k, mu)


def pi(n: int, cfg: SieveConfig | None = None) -> int:
    """Exact number of primes <= n.

    If ``cfg`` is given, ``n`` must lie in ``[2, cfg.limit]`` and the
    configured segment size and thread count are used.
    """
    if cfg is None:
        if int(n) != n or n < 2:
            raise RangeError(f"pi(n) requires an integer n >= 2, got {n!r}")
        cfg = SieveConfig(int(n))
    elif int(n) != n or not 2 <= n <= cfg.limit:
        raise RangeError(f"n={n!r} outside [2, {cfg.limit}]")
    n = int(n)
    count = 0
    sub = SieveConfig(n, cfg.segment_size, cfg.threads)
    for seg in iter_segments(sub):
        if seg.lo > n:
            break
        stop = min(seg.hi, n + 1) - seg.lo
        count += int(np.count_nonzero(seg.prime_flags[:stop]))
    return count
