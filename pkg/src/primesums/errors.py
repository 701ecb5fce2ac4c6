"""Exception types shared across the package."""


class PrimeSumsError(Exception):
    """Base class for package errors."""


class DomainError(PrimeSumsError, ValueError):
    """Argument outside the evaluation domain (t >= 2)."""


class RangeError(PrimeSumsError, ValueError):
    """Argument outside a configured or supported range."""


class ParseError(PrimeSumsError, ValueError):
    """Malformed expression source.

    ``offset`` is the character index where the problem was detected and
    ``kind`` is "syntax" or "semantic".
    """

    def __init__(self, message, offset, kind="syntax"):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
        self.kind = kind


class QuadratureError(PrimeSumsError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, estimate, error):
        super().__init__(f"{message}: estimate={estimate!r}, error bound={error!r}")
        self.estimate = estimate
        self.error = error


class ShapeError(PrimeSumsError, ValueError):
    """Function does not have the monotonicity shape an estimate requires."""


class InapplicableError(PrimeSumsError, ValueError):
    """Preconditions of a shortcut test do not hold."""
