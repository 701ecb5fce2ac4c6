import math

import numpy as np
import pytest

from primesums.errors import RangeError
from primesums.sieve import SieveConfig, iter_segments, pi, stream_mobius, stream_primes

from conftest import is_prime_td, mobius_bf

PI_1E6 = 78498  # trial-division count, computed once offline


def _primes(limit, **kw):
    out = []
    stream_primes(SieveConfig(limit, **kw), out.append)
    return out


def _mobius(limit, **kw):
    out = []
    stream_mobius(SieveConfig(limit, **kw), lambda k, m: out.append(m))
    return out


def test_stream_primes_examples():
    assert _primes(10) == [2, 3, 5, 7]
    assert len(_primes(100)) == 25
    assert _primes(2) == [2]


def test_stream_mobius_examples():
    assert _mobius(10) == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    mu = _mobius(30)
    assert mu[3] == 0 and mu[29] == -1


def test_pi_examples():
    assert pi(10) == 4
    assert pi(100) == 25
    assert pi(2) == 1


def test_pi_million_matches_offline_table():
    assert pi(10**6) == PI_1E6


def test_primes_match_trial_division():
    limit = 10**4
    assert _primes(limit, segment_size=1024) == [k for k in range(limit + 1) if is_prime_td(k)]


def test_mobius_matches_factorization():
    limit = 10**4
    assert _mobius(limit, segment_size=1024) == [mobius_bf(k) for k in range(1, limit + 1)]


def test_mobius_of_primes():
    mu = _mobius(10**4)
    assert all(mu[p - 1] == -1 for p in _primes(10**4))


@pytest.mark.parametrize("size", [2**10, 3000, 2**16, 2**20])
def test_segment_size_independence(size):
    cfg = SieveConfig(10**6, segment_size=size)
    flags = np.concatenate([s.prime_flags for s in iter_segments(cfg)])[: 10**6 + 1]
    ref = np.concatenate([s.prime_flags for s in iter_segments(SieveConfig(10**6))])[: 10**6 + 1]
    assert np.array_equal(flags, ref)
    assert pi(10**6, cfg) == PI_1E6


def test_threads_do_not_change_order():
    cfg1 = SieveConfig(200_000, segment_size=4096)
    cfg4 = SieveConfig(200_000, segment_size=4096, threads=4)
    a = [(s.lo, s.prime_flags.tobytes(), s.mobius.tobytes()) for s in iter_segments(cfg1, mobius=True)]
    b = [(s.lo, s.prime_flags.tobytes(), s.mobius.tobytes()) for s in iter_segments(cfg4, mobius=True)]
    assert a == b


def test_squarefree_count_consistent():
    mu = np.array(_mobius(10**5))
    assert np.count_nonzero(mu) / mu.size == pytest.approx(6 / math.pi**2, abs=2e-3)


@pytest.mark.parametrize("kw", [{"limit": 1}, {"limit": 2**40 + 1}, {"limit": 100, "segment_size": 512}, {"limit": 100, "threads": 0}])
def test_config_rejects(kw):
    with pytest.raises(RangeError):
        SieveConfig(**kw)


def test_pi_range_errors():
    with pytest.raises(RangeError):
        pi(1)
    with pytest.raises(RangeError):
        pi(200, SieveConfig(100))
