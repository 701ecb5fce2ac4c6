import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from primesums.errors import DomainError, ParseError
from primesums.powerlog import (
    ONE,
    ZERO,
    Expr,
    Term,
    differentiate,
    divide_by_log,
    format_expr,
    parse,
)


def test_eval_examples():
    assert parse("t^2*log(t)")(math.e) == pytest.approx(math.e**2, rel=1e-15)
    assert ZERO(5.0) == 0.0
    assert Expr([Term(1.0, -1.0, -1)])(4.0) == pytest.approx(1 / (4 * math.log(4)), rel=1e-15)
    assert Expr([Term(1.0, -1.0, -1)])(4.0) == pytest.approx(0.180337, abs=5e-7)


def test_eval_rejects_small_t():
    with pytest.raises(DomainError):
        parse("t")(1.5)


def test_differentiate_examples():
    assert differentiate(parse("t^2*log(t)")) == parse("2*t*log(t) + t")
    assert differentiate(parse("1/t")) == parse("-1*t^-2")
    assert differentiate(parse("2^t")) == Expr([Term(math.log(2), g=2.0)])
    assert differentiate(ONE) == ZERO


def test_divide_by_log_examples():
    assert divide_by_log(parse("log(t)")) == ONE
    assert divide_by_log(parse("1/t")) == Expr([Term(1.0, -1.0, -1)])
    assert divide_by_log(ONE) == Expr([Term(1.0, 0.0, -1)])


@pytest.mark.parametrize(
    "src, terms",
    [
        ("log(t)/t", [Term(1.0, -1.0, 1)]),
        ("t^0.5 + 3*log(t)^2", [Term(1.0, 0.5, 0), Term(3.0, 0.0, 2)]),
        ("2^t", [Term(1.0, 0.0, 0, 2.0)]),
        ("1/t", [Term(1.0, -1.0)]),
        ("t^2*log(t)", [Term(1.0, 2.0, 1)]),
        ("  t *  t - t^2 ", []),
        ("1", [Term(1.0)]),
        ("-2*t + 1e-3", [Term(-2.0, 1.0), Term(1e-3)]),
    ],
)
def test_parse_cases(src, terms):
    assert parse(src) == Expr(terms)


@pytest.mark.parametrize(
    "src, offset, kind",
    [
        ("t^", 2, "syntax"),
        ("t + * 2", 4, "syntax"),
        ("log(x)", 0, "syntax"),
        ("0.5^t", 0, "semantic"),
        ("log(t)^1.5", 7, "semantic"),
        ("t $", 2, "syntax"),
        ("", 0, "syntax"),
    ],
)
def test_parse_errors(src, offset, kind):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.offset == offset
    assert info.value.kind == kind


def test_canonical_form_merges_and_drops():
    e = Expr([Term(1.0, 1.0), Term(2.0, 1.0), Term(0.0, 3.0), Term(-1.0, 2.0, 1)])
    assert e.terms == (Term(-1.0, 2.0, 1), Term(3.0, 1.0))
    assert Expr([Term(1.0, 1.0), Term(-1.0, 1.0)]) == ZERO
    assert format_expr(ZERO) == "0"


def test_bad_terms_rejected():
    with pytest.raises(ValueError):
        Term(1.0, g=0.5)
    with pytest.raises(ValueError):
        Term(1.0, b=1.5)
    with pytest.raises(ValueError):
        Term(math.inf)


# -- properties --------------------------------------------------------------

coeffs = st.floats(-100, 100, allow_nan=False).filter(lambda c: abs(c) > 1e-3)
terms = st.builds(
    Term,
    coeff=coeffs,
    a=st.sampled_from([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0]),
    b=st.integers(-3, 3),
    g=st.sampled_from([1.0, 1.0, 1.0, 1.0001, 1.5]),
)
exprs = st.lists(terms, min_size=0, max_size=4).map(Expr)


@given(exprs)
def test_closure(e):
    d = differentiate(e)
    assert isinstance(d, Expr)
    keys = [t.key for t in d.terms]
    assert len(keys) == len(set(keys))
    assert all(t.coeff != 0 for t in d.terms)
    assert Expr(d.terms) == d


@settings(max_examples=200)
@given(exprs, st.floats(2.0, 1e6))
def test_derivative_matches_central_difference(e, t):
    assume(all(math.isfinite(Expr([term])(t * 1.01)) for term in e.terms))
    h = t * 1e-6
    lo = max(2.0, t - h)
    fd = (e(t + h) - e(lo)) / (t + h - lo)
    exact = differentiate(e)(t)
    # cancellation between terms limits what a difference quotient can resolve
    noise = sum(abs(term.coeff) * abs(Expr([term])(t)) for term in e.terms) * 1e-9 / h
    scale = sum(abs(Expr([term])(t)) for term in differentiate(e).terms)
    assert abs(fd - exact) <= 1e-5 * scale + noise + 1e-300


@given(exprs, exprs, st.floats(2.0, 1e6))
def test_linearity(e1, e2, t):
    assume(all(math.isfinite(Expr([term])(t)) for term in e1.terms + e2.terms))
    total = (e1 + e2)(t)
    parts = e1(t) + e2(t)
    scale = sum(abs(Expr([term])(t)) for term in e1.terms + e2.terms)
    assert abs(total - parts) <= 1e-14 * max(scale, 1e-300) * 4


@given(exprs)
def test_round_trip(e):
    assert parse(format_expr(e)) == e


def test_array_and_scalar_eval_agree():
    import numpy as np

    e = parse("t^1.5*log(t)^-2 + 3*log(t)/t - 2")
    xs = np.array([2.0, 3.5, 1e3, 1e7])
    assert np.array_equal(e(xs), np.array([e(float(x)) for x in xs]))


def test_shifted_eval_tames_exponentials():
    e = parse("2^t")
    assert math.isinf(e(2000.0))
    from primesums.powerlog import evaluate

    assert evaluate(e, 2000.0, 2000.0 * math.log(2)) == pytest.approx(1.0, rel=1e-12)
