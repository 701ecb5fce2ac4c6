import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from primesums import kernels
from primesums.sieve import base_primes

fallback = kernels.load_backend("numpy")
try:
    compiled = kernels.load_backend("cython")
except ImportError:  # extension not built
    compiled = None

needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.load_backend("fortran")


@needs_ext
@pytest.mark.parametrize("lo, hi", [(0, 4096), (4096, 8192), (10**6, 10**6 + 5000), (2**30, 2**30 + 3000)])
def test_backends_bit_identical(lo, hi):
    bp = base_primes(math.isqrt(hi))
    assert np.array_equal(compiled.sieve_segment(lo, hi, bp), fallback.sieve_segment(lo, hi, bp))
    assert np.array_equal(compiled.mobius_segment(lo, hi, bp), fallback.mobius_segment(lo, hi, bp))


def _exact(values):
    return float(sum((Fraction(v) for v in values), Fraction(0)))


floats = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e300, max_value=1e300)


@pytest.mark.parametrize("impl", [fallback, pytest.param(compiled, marks=needs_ext)], ids=["numpy", "cython"])
@given(values=st.lists(floats, max_size=60), cut=st.integers(0, 60))
def test_exact_sum_is_correctly_rounded(impl, values, cut):
    acc = impl.ExactSum()
    acc.add_array(np.array(values[:cut], dtype=float))
    for v in values[cut:]:
        acc.add(v)
    assert acc.value() == _exact(values)


@needs_ext
@given(st.lists(floats, max_size=80))
def test_exact_sum_backends_agree(values):
    a, b = compiled.ExactSum(), fallback.ExactSum()
    arr = np.array(values, dtype=float)
    a.add_array(arr)
    b.add_array(arr)
    assert a.value() == b.value()


def test_exact_sum_cancellation():
    acc = kernels.ExactSum()
    acc.add_array(np.array([1e100, 1.0, -1e100, 1e-100]))
    assert acc.value() == 1.0 + 1e-100


def test_exact_sum_rejects_overflow():
    acc = kernels.ExactSum()
    with pytest.raises(OverflowError):
        acc.add_array(np.array([1.7e308, 1.7e308]))
    with pytest.raises(OverflowError):
        kernels.ExactSum().add(math.inf)
