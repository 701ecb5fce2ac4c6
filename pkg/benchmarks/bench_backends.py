"""Compare the compiled and NumPy kernel backends.

Each kernel runs on the same inputs under both backends; outputs must be
bit-identical and the timings are reported side by side.

    python3 benchmarks/bench_backends.py --limit 1e7
"""

import argparse
import math
import time

import numpy as np

from primesums.kernels import load_backend
from primesums.sieve import base_primes


def _time(fn, repeat):
    best, out = math.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _segments(limit, size):
    bp = base_primes(math.isqrt(limit))
    return [(lo, lo + size, bp) for lo in range(0, limit, size)]


def bench(limit, size, repeat):
    segs = _segments(limit, size)
    values = 1.0 / np.arange(2, min(limit, 2_000_000) + 2, dtype=np.float64)
    backends = {}
    for name in ("cython", "numpy"):
        try:
            backends[name] = load_backend(name)
        except ImportError:
            print(f"{name}: not available")
    results = {}
    for name, mod in backends.items():

        def run_exact_sum():
            acc = mod.ExactSum()
            acc.add_array(values)
            return acc.value()

        results[name] = {
            "sieve": _time(lambda: [mod.sieve_segment(*s) for s in segs], repeat),
            "mobius": _time(lambda: [mod.mobius_segment(*s) for s in segs], repeat),
            "exact_sum": _time(run_exact_sum, repeat),
        }
    print(f"limit={limit:.3g} segment_size={size} exact_sum terms={values.size}")
    print(f"{'kernel':<10}" + "".join(f"{n:>12}" for n in results) + "   identical")
    for kernel in ("sieve", "mobius", "exact_sum"):
        outs = [r[kernel][1] for r in results.values()]
        if kernel == "exact_sum":
            same = all(o == outs[0] for o in outs)
        else:
            same = all(all(np.array_equal(a, b) for a, b in zip(o, outs[0])) for o in outs)
        row = "".join(f"{r[kernel][0]:>11.3f}s" for r in results.values())
        print(f"{kernel:<10}{row}   {same}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--limit", type=float, default=1e7)
    parser.add_argument("--segment-size", type=int, default=2**20)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    bench(int(args.limit), args.segment_size, args.repeat)


if __name__ == "__main__":
    main()
