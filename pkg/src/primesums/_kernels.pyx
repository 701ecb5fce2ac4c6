# cython: language_level=3
"""Compiled sieve and accumulation kernels.

Mirrors ``primesums._fallback`` exactly: same signatures, same outputs bit
for bit. Must be compiled without fast-math (TwoSum depends on strict IEEE
rounding).
"""

import math

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, isfinite

cnp.import_array()

# non-overlapping partials occupy disjoint bit positions: at most 2098 of them
DEF MAX_PARTIALS = 2100


def sieve_segment(long long lo, long long hi, const long long[::1] base_primes):
    """Return uint8 flags over [lo, hi): 1 where the integer is prime."""
    cdef Py_ssize_t size = hi - lo
    flags_arr = np.ones(size, dtype=np.uint8)
    cdef unsigned char[::1] flags = flags_arr
    cdef Py_ssize_t i, nb = base_primes.shape[0]
    cdef long long p, start, j
    with nogil:
        for i in range(nb):
            p = base_primes[i]
            if p * p >= hi:
                break
            start = ((lo + p - 1) // p) * p
            if start < p * p:
                start = p * p
            j = start - lo
            while j < size:
                flags[j] = 0
                j += p
        j = 0
        while j < size and lo + j < 2:
            flags[j] = 0
            j += 1
    return flags_arr


def mobius_segment(long long lo, long long hi, const long long[::1] base_primes):
    """Return int8 Moebius values over [lo, hi); position of 0 (if lo == 0) is 0."""
    cdef Py_ssize_t size = hi - lo
    mu_arr = np.ones(size, dtype=np.int8)
    prod_arr = np.ones(size, dtype=np.int64)
    cdef signed char[::1] mu = mu_arr
    cdef long long[::1] prod = prod_arr
    cdef Py_ssize_t i, nb = base_primes.shape[0]
    cdef long long p, p2, start, j
    with nogil:
        for i in range(nb):
            p = base_primes[i]
            if p * p >= hi:
                break
            start = ((lo + p - 1) // p) * p
            j = start - lo
            while j < size:
                mu[j] = -mu[j]
                prod[j] *= p
                j += p
            p2 = p * p
            start = ((lo + p2 - 1) // p2) * p2
            j = start - lo
            while j < size:
                mu[j] = 0
                j += p2
        for j in range(size):
            if mu[j] != 0 and prod[j] != lo + j:
                mu[j] = -mu[j]
        if lo == 0:
            mu[0] = 0
    return mu_arr


cdef class ExactSum:
    """Exact running sum of doubles (non-overlapping partials, TwoSum based).

    ``value()`` is the correctly rounded exact sum of everything added so far,
    independent of how the input was chunked.
    """

    cdef double partials[MAX_PARTIALS]
    cdef int count

    def __cinit__(self):
        self.count = 0

    cdef int _add(self, double x) nogil:
        cdef int i = 0, j
        cdef double y, hi, lo, t
        if not isfinite(x):
            return -1
        for j in range(self.count):
            y = self.partials[j]
            if fabs(x) < fabs(y):
                t = x
                x = y
                y = t
            hi = x + y
            lo = y - (hi - x)
            if lo != 0.0:
                self.partials[i] = lo
                i += 1
            x = hi
        if not isfinite(x):
            return -1
        if i >= MAX_PARTIALS:
            return -2
        self.partials[i] = x
        self.count = i + 1
        return 0

    def add(self, double x):
        if self._add(x) != 0:
            raise OverflowError("partial sum left the representable range")

    def add_array(self, const double[::1] values):
        cdef Py_ssize_t k, n = values.shape[0]
        cdef int status = 0
        with nogil:
            for k in range(n):
                status = self._add(values[k])
                if status != 0:
                    break
        if status == -1:
            raise OverflowError("partial sum left the representable range")
        if status == -2:
            raise RuntimeError("partials buffer exhausted")

    def partials_list(self):
        return [self.partials[j] for j in range(self.count)]

    def value(self):
        return math.fsum(self.partials_list()) + 0.0


BACKEND = "cython"
