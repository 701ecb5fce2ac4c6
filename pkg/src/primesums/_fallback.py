"""NumPy implementations of the sieve and accumulation kernels.

Used when the compiled ``_kernels`` extension is missing, or when the
environment variable ``PRIMESUMS_PURE`` is set. Outputs are bit-identical to
the compiled versions.
"""

import math

import numpy as np

BACKEND = "numpy"


def sieve_segment(lo, hi, base_primes):
    size = hi - lo
    flags = np.ones(size, dtype=np.uint8)
    for p in base_primes.tolist():
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo::p] = 0
    if lo < 2:
        flags[: 2 - lo] = 0
    return flags


def mobius_segment(lo, hi, base_primes):
    size = hi - lo
    mu = np.ones(size, dtype=np.int8)
    prod = np.ones(size, dtype=np.int64)
    for p in base_primes.tolist():
        if p * p >= hi:
            break
        start = -(-lo // p) * p - lo
        mu[start::p] *= -1
        prod[start::p] *= p
        p2 = p * p
        mu[-(-lo // p2) * p2 - lo::p2] = 0
    k = np.arange(lo, hi, dtype=np.int64)
    flip = (mu != 0) & (prod != k)
    mu[flip] *= -1
    if lo == 0:
        mu[0] = 0
    return mu


class ExactSum:
    """Exact running sum of doubles, kept as a list of non-overlapping partials.

    Each call folds the new values in with repeated ``math.fsum`` passes: every
    pass peels off the correctly rounded remainder until nothing is left, so
    the stored partials always sum exactly to the true total.
    """

    def __init__(self):
        self._partials = []

    def add(self, x):
        self.add_array(np.asarray([x], dtype=np.float64))

    def add_array(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.size == 0:
            return
        if not np.isfinite(values).all():
            raise OverflowError("partial sum left the representable range")
        items = self._partials + values.tolist()
        out = []
        try:
            while True:
                s = math.fsum(items)
                if s == 0.0:
                    break
                if not math.isfinite(s):
                    raise OverflowError("partial sum left the representable range")
                out.append(s)
                items.append(-s)
        except OverflowError as exc:
            raise OverflowError("partial sum left the representable range") from exc
        self._partials = out

    def partials_list(self):
        return list(self._partials)

    def value(self):
        return math.fsum(self._partials) + 0.0
