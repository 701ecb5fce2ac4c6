import math

import pytest

from primesums.powerlog import parse

# the six functions whose prime sums have catalogued asymptotics
CATALOG = ["1/t", "log(t)", "log(t)/t", "t*log(t)", "log(t)^2/t", "t"]


def is_prime_td(n):
    """Trial division; deliberately naive."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def mobius_bf(n):
    """Moebius value by factorizing n."""
    if n == 1:
        return 1
    sign = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            sign = -sign
        d += 1
    if n > 1:
        sign = -sign
    return sign


@pytest.fixture(params=CATALOG)
def catalog_expr(request):
    return parse(request.param)


_acceptance_lines = []


def record_acceptance(label, ok, detail):
    _acceptance_lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
