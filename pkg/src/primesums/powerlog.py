"""Power-log-exponential expressions ``sum c * t**a * log(t)**b * g**t``.

This family is closed under differentiation, division by ``log t`` and
multiplication, which covers every integrand and summand the rest of the
package needs. Values are immutable.

>>> f = parse("t^2*log(t)")
>>> print(differentiate(f))
2*t*log(t) + t
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError, ParseError

__all__ = [
    "Term",
    "Expr",
    "ZERO",
    "ONE",
    "T",
    "LOG",
    "constant",
    "evaluate",
    "differentiate",
    "divide_by_log",
    "parse",
    "format_expr",
]


@dataclass(frozen=True)
class Term:
    coeff: float
    a: float = 0.0
    b: int = 0
    g: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.coeff) or not math.isfinite(self.a):
            raise ValueError("coefficient and power of t must be finite")
        if not (math.isfinite(self.g) and self.g >= 1.0):
            raise ValueError(f"exponential base must be >= 1, got {self.g!r}")
        if int(self.b) != self.b:
            raise ValueError(f"power of log(t) must be an integer, got {self.b!r}")
        object.__setattr__(self, "coeff", float(self.coeff))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", int(self.b))
        object.__setattr__(self, "g", float(self.g))

    @property
    def key(self):
        return (self.a, self.b, self.g)


def _canonical(terms: Iterable[Term]) -> tuple[Term, ...]:
    merged: dict[tuple, float] = {}
    for term in terms:
        merged[term.key] = merged.get(term.key, 0.0) + term.coeff
    out = [Term(c, a, b, g) for (a, b, g), c in merged.items() if c != 0.0]
    # dominant terms first: exponential base, then power of t, then log power
    out.sort(key=lambda term: (term.g, term.a, term.b), reverse=True)
    return tuple(out)


class Expr:
    """Canonical finite sum of :class:`Term` objects."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Term] = ()):
        object.__setattr__(self, "terms", _canonical(terms))

    def __setattr__(self, name, value):
        raise AttributeError("Expr is immutable")

    def __eq__(self, other):
        return isinstance(other, Expr) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"Expr({format_expr(self)!r})"

    def __str__(self):
        return format_expr(self)

    def __add__(self, other):
        other = _coerce(other)
        return Expr(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return Expr(Term(-t.coeff, t.a, t.b, t.g) for t in self.terms)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return Expr(
            Term(x.coeff * y.coeff, x.a + y.a, x.b + y.b, x.g * y.g)
            for x in self.terms
            for y in other.terms
        )

    __rmul__ = __mul__

    def __call__(self, t):
        return evaluate(self, t)

    @property
    def is_zero(self):
        return not self.terms

    @property
    def max_base(self):
        """Largest exponential base among the terms (1.0 when purely power-log)."""
        return max((t.g for t in self.terms), default=1.0)

    def has_log_factor(self):
        return any(t.b != 0 for t in self.terms)

    def value_at_one(self):
        """Value at t = 1 using the convention that log-power terms vanish there.

        Terms with b > 0 are genuinely zero at 1; terms with b < 0 are
        undefined and are excluded from sums that start at 1.
        """
        return math.fsum(t.coeff * t.g for t in self.terms if t.b == 0)


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, Term):
        return Expr([x])
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return constant(x)
    raise TypeError(f"cannot combine Expr with {type(x).__name__}")


def constant(c: float) -> Expr:
    return Expr([Term(float(c))])


ZERO = Expr()
ONE = constant(1.0)
T = Expr([Term(1.0, a=1.0)])
LOG = Expr([Term(1.0, b=1)])


def evaluate(e: Expr, t, shift: float = 0.0):
    """Evaluate ``e`` at ``t`` (scalar or array, every value >= 2).

    ``shift`` multiplies the result by ``exp(-shift)`` inside each exponential
    factor, so expressions like ``2^t`` can be compared at large t without
    overflow. Overflow otherwise yields ``inf``; callers decide whether that
    is an error.
    """
    scalar = np.ndim(t) == 0
    x = np.asarray(t, dtype=np.float64)
    if x.size and not (x >= 2.0).all():
        raise DomainError("expressions are evaluated on t >= 2 only")
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        out = np.zeros_like(x)
        logx = np.log(x) if any(term.b for term in e.terms) else None
        for term in e.terms:
            v = _power(x, term.a)
            if term.b:
                v = v * _power(logx, term.b)
            if term.g != 1.0 or shift:
                v = v * np.exp(x * math.log(term.g) - shift)
            out = out + term.coeff * v
    if scalar:
        return float(out)
    return out


def _power(x, p):
    if p == 0:
        return np.ones_like(x)
    if p == 1:
        return x
    if p == -1:
        return 1.0 / x
    return np.power(x, float(p))


def differentiate(e: Expr) -> Expr:
    """Exact derivative with respect to t, staying inside the family."""
    out = []
    for t in e.terms:
        if t.a != 0.0:
            out.append(Term(t.coeff * t.a, t.a - 1.0, t.b, t.g))
        if t.b != 0:
            out.append(Term(t.coeff * t.b, t.a - 1.0, t.b - 1, t.g))
        if t.g != 1.0:
            out.append(Term(t.coeff * math.log(t.g), t.a, t.b, t.g))
    return Expr(out)


def divide_by_log(e: Expr) -> Expr:
    """``e(t) / log t``: every log power drops by one."""
    return Expr(Term(t.coeff, t.a, t.b - 1, t.g) for t in e.terms)


# -- text form ---------------------------------------------------------------

def _fmt_number(x: float) -> str:
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _format_term(term: Term) -> str:
    factors = []
    if term.g != 1.0:
        factors.append(f"{_fmt_number(term.g)}^t")
    if term.a == 1.0:
        factors.append("t")
    elif term.a != 0.0:
        factors.append(f"t^{_fmt_number(term.a)}")
    if term.b == 1:
        factors.append("log(t)")
    elif term.b != 0:
        factors.append(f"log(t)^{term.b}")
    c = abs(term.coeff)
    if not factors:
        return _fmt_number(c)
    if c != 1.0:
        factors.insert(0, _fmt_number(c))
    return "*".join(factors)


def format_expr(e: Expr) -> str:
    """Render ``e`` in the grammar accepted by :func:`parse`."""
    if e.is_zero:
        return "0"
    parts = []
    for i, term in enumerate(e.terms):
        body = _format_term(term)
        if i == 0:
            parts.append(("-" if term.coeff < 0 else "") + body)
        else:
            parts.append((" - " if term.coeff < 0 else " + ") + body)
    return "".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<log>log\(\s*t\s*\))|(?P<op>[-+*/^])|(?P<t>t))"
)


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = []
        pos = 0
        while pos < len(src):
            if src[pos:].strip() == "":
                break
            m = _TOKEN.match(src, pos)
            if m is None:
                start = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
                raise ParseError(f"unexpected character {src[start]!r}", start)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.src))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, text, pos = self.take()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}, found {text or 'end of input'!r}", pos)

    def parse(self) -> Expr:
        terms = []
        sign = 1.0
        kind, text, _ = self.peek()
        if kind == "op" and text in "+-":
            self.take()
            sign = -1.0 if text == "-" else 1.0
        terms.append(self.term(sign))
        while True:
            kind, text, pos = self.peek()
            if kind == "end":
                break
            if kind == "op" and text in "+-":
                self.take()
                terms.append(self.term(-1.0 if text == "-" else 1.0))
            else:
                raise ParseError(f"unexpected {text!r}", pos)
        return Expr(terms)

    def term(self, sign) -> Term:
        coeff, a, b, g = sign, 0.0, 0, 1.0
        first = True
        while True:
            if not first:
                kind, text, pos = self.peek()
                if kind == "op" and text in "*/":
                    self.take()
                    invert = text == "/"
                else:
                    break
            else:
                invert = False
            fc, fa, fb, fg = self.factor()
            if invert:
                if fc == 0.0:
                    raise ParseError("division by zero", self.tokens[self.i - 1][2], "semantic")
                fc, fa, fb, fg = 1.0 / fc, -fa, -fb, 1.0 / fg
            coeff *= fc
            a += fa
            b += fb
            g *= fg
            first = False
        if g < 1.0:
            raise ParseError(f"exponential base {g!r} is below 1", self.peek()[2], "semantic")
        return Term(coeff, a, b, g)

    def factor(self):
        """Return (coeff, a, b, g) contributed by one factor."""
        kind, text, pos = self.take()
        if kind == "t":
            exp = 1.0
            if self._peek_op("^"):
                self.take()
                exp = self.signed()
            return 1.0, exp, 0, 1.0
        if kind == "log":
            exp = 1
            if self._peek_op("^"):
                self.take()
                _, etext, epos = self.peek()
                value = self.signed()
                if value != int(value):
                    raise ParseError(f"log power must be an integer, got {etext}", epos, "semantic")
                exp = int(value)
            return 1.0, 0.0, exp, 1.0
        if kind == "num":
            value = float(text)
            if self._peek_op("^"):
                self.take()
                k2, t2, p2 = self.take()
                if k2 != "t":
                    raise ParseError("expected 't' after '<number>^'", p2)
                if value < 1.0:
                    raise ParseError(f"exponential base {text} is below 1", pos, "semantic")
                return 1.0, 0.0, 0, value
            return value, 0.0, 0, 1.0
        raise ParseError(f"expected a factor, found {text or 'end of input'!r}", pos)

    def signed(self) -> float:
        neg = False
        if self._peek_op("-"):
            self.take()
            neg = True
        kind, text, pos = self.take()
        if kind != "num":
            raise ParseError(f"expected a number, found {text or 'end of input'!r}", pos)
        return -float(text) if neg else float(text)

    def _peek_op(self, op):
        kind, text, _ = self.peek()
        return kind == "op" and text == op


def parse(src: str) -> Expr:
    """Parse text such as ``"log(t)/t"`` or ``"t^0.5 + 3*log(t)^2"``.

    Raises :class:`ParseError` with the character offset of the problem.
    """
    if not src.strip():
        raise ParseError("empty expression", 0)
    return _Parser(src).parse()
