"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines appear at
the end of the session under "acceptance criteria".
"""

import json
import math
import subprocess
import sys
import time

import pytest

from primesums.asym import QuadratureSpec, integrate, log_integral_J1
from primesums.conditions import Verdict, abel_decompose, check_conditions
from primesums.powerlog import ONE, parse
from primesums.sums import (
    CheckpointGrid,
    Fold,
    mertens,
    prime_sum,
    quantity_density,
    run_folds,
    surrogate_sum,
)

from conftest import CATALOG, is_prime_td, mobius_bf, record_acceptance

J1_10 = 5.120435724669806  # composite Simpson, 10^7 panels, computed offline
DECADES = CheckpointGrid((10**5, 10**6, 10**7, 10**8))


def report(label, ok, detail):
    record_acceptance(label, ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, detail


def _approaches_one(values):
    gaps = [abs(v - 1) for v in values]
    return all(b < a for a, b in zip(gaps, gaps[1:]))


@pytest.fixture(scope="module")
def big_pass():
    """Prime sums of log t, 1/t, t, 1 and the surrogate of 1/t at decades up to 10^8."""
    folds = [
        Fold("prime", parse("log(t)")),
        Fold("prime", parse("1/t")),
        Fold("prime", parse("t")),
        Fold("prime", ONE),
        Fold("surrogate", parse("1/t")),
    ]
    theta, recip, psum, count, sur = run_folds(folds, DECADES)
    return {"theta": theta, "recip": recip, "psum": psum, "pi": count, "sur": sur}


def test_c01_exactness_oracle():
    t0 = time.perf_counter()
    n = 10**4
    primes = [k for k in range(2, n + 1) if is_prime_td(k)]
    worst = 0.0
    for src in CATALOG:
        f = parse(src)
        exact = prime_sum(f, [n]).rows[0].exact
        sur = surrogate_sum(f, [n]).rows[0].surrogate
        ref_exact = math.fsum(f(float(p)) for p in primes)
        ref_sur = math.fsum(f(float(k)) / math.log(k) for k in range(2, n + 1))
        worst = max(worst, abs(exact - ref_exact) / abs(ref_exact), abs(sur - ref_sur) / abs(ref_sur))
    elapsed = time.perf_counter() - t0
    report("1 exactness oracle", worst <= 1e-12 and elapsed < 5, f"max rel err {worst:.2e}, {elapsed:.2f} s")


def test_c02_theta_and_pi(big_pass):
    t0 = time.perf_counter()
    theta = [v / n for v, n in zip(big_pass["theta"], DECADES)]
    pil = [c * math.log(n) / n for c, n in zip(big_pass["pi"], DECADES)]
    ok = (
        0.995 <= theta[-1] <= 1.005
        and 1.0 <= pil[-1] <= 1.10
        and _approaches_one(theta)
        and _approaches_one(pil)
    )
    report(
        "2 theta(n)/n and pi(n) log n/n",
        ok,
        f"theta/n {['%.6f' % v for v in theta]}, pi log n/n {['%.4f' % v for v in pil]}",
    )


def test_c03_reciprocal_sum(big_pass):
    off = [s - math.log(math.log(n)) for s, n in zip(big_pass["recip"], DECADES)]
    ratio = [e / s for e, s in zip(big_pass["recip"], big_pass["sur"])]
    change = abs(off[-1] - off[-2])
    ok = change < 5e-3 and _approaches_one(ratio)
    report(
        "3 sum 1/p - log log n",
        ok,
        f"offset {off[-2]:.7f} -> {off[-1]:.7f} (change {change:.1e}), ratio_es {['%.4f' % r for r in ratio]}",
    )


def test_c04_sum_of_primes(big_pass):
    ratio = [s / (n * n / (2 * math.log(n))) for s, n in zip(big_pass["psum"], DECADES)]
    ok = 1.0 <= ratio[-1] <= 1.15 and all(b < a for a, b in zip(ratio, ratio[1:]))
    report("4 sum p / (n^2/(2 log n))", ok, f"{['%.4f' % r for r in ratio]}")


def test_c05_mertens():
    grid = CheckpointGrid.geometric(10**7, 3, start=10**5)
    m = mertens(grid)
    worst = max(abs(v) / n for n, v in m.items())
    small = mertens([10, 100])
    oracle = {n: sum(mobius_bf(k) for k in range(1, n + 1)) for n in (10, 100)}
    ok = worst < 0.01 and small == oracle == {10: -1, 100: 1}
    report("5 Mertens", ok, f"max |M(n)|/n = {worst:.2e} on [1e5, 1e7], M(10)={small[10]}, M(100)={small[100]}")


def test_c06_squarefree_density():
    d = quantity_density("squarefree", [10**7])[10**7].density
    gap = abs(d - 6 / math.pi**2)
    report("6 squarefree density", gap < 0.001, f"{d:.7f} vs 6/pi^2 {6 / math.pi**2:.7f} (gap {gap:.1e})")


def test_c07_abel_identity():
    worst = 0.0
    for src in CATALOG:
        for w in ("prime_indicator", "inv_log"):
            for n in (10**2, 10**3, 10**4):
                worst = max(worst, abel_decompose(w, parse(src), n).residual)
    report("7 Abel identity", worst < 1e-9, f"max residual {worst:.1e}")


def test_c08_condition_suite():
    grid = CheckpointGrid.geometric(10**7, 3)
    verdicts = {src: check_conditions(parse(src), grid).overall for src in CATALOG + ["2^t"]}
    ok = all(verdicts[s] is Verdict.SUFFICIENT_PASS for s in CATALOG) and verdicts["2^t"] is Verdict.NECESSARY_FAIL
    report("8 condition suite", ok, ", ".join(f"{s}: {v.value}" for s, v in verdicts.items()))


def test_c09_quadrature():
    j10 = log_integral_J1(10.0)
    tight = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-15)
    fd_err = 0.0
    for x in (10.0, 1e3, 1e6):
        h = x * 1e-4
        fd = (log_integral_J1(x + h, tight) - log_integral_J1(x - h, tight)) / (2 * h)
        fd_err = max(fd_err, abs(fd * math.log(x) - 1))
    n = 1e6
    gaps = []
    for m in (0, 1, 2):
        quad = integrate(parse(f"t^{m}/log(t)"), 2.0, n)
        closed = (n ** (m + 1) / math.log(n) - 2 ** (m + 1) / math.log(2)) / (m + 1)
        gaps.append(abs(closed - quad) / quad)
    ok = abs(j10 - J1_10) < 1e-8 and fd_err < 1e-6 and max(gaps) < 0.10
    report(
        "9 quadrature",
        ok,
        f"J1(10) err {abs(j10 - J1_10):.1e}, J1' rel err {fd_err:.1e}, closed-form gaps {['%.3f' % g for g in gaps]}",
    )


PERF_SCRIPT = """
import json, resource, sys, time
from primesums.powerlog import parse
from primesums.sums import CheckpointGrid, Fold, run_folds
t0 = time.perf_counter()
grid = CheckpointGrid.geometric(10**8, 3, start=10**5)
folds = [Fold("prime", parse("log(t)")), Fold("prime", parse("1/t")), Fold("prime", parse("t"))]
cols = run_folds(folds, grid, threads=int(sys.argv[1]))
print(json.dumps({
    "seconds": time.perf_counter() - t0,
    "maxrss_mb": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024,
    "values": [[v.hex() for v in col] for col in cols],
}))
"""


def test_c10_performance():
    runs = {}
    for threads in (1, 4):
        out = subprocess.run([sys.executable, "-c", PERF_SCRIPT, str(threads)], capture_output=True, text=True, check=True)
        runs[threads] = json.loads(out.stdout)
    same = runs[1]["values"] == runs[4]["values"]
    slowest = max(r["seconds"] for r in runs.values())
    biggest = max(r["maxrss_mb"] for r in runs.values())
    ok = same and slowest <= 60 and biggest <= 256
    report(
        "10 performance gate",
        ok,
        f"{slowest:.1f} s, {biggest:.0f} MB peak, 1 vs 4 threads bit-identical: {same}",
    )
