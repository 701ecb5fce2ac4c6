"""Prime-argument summation workbench.

Sieve-backed exact prime sums, their ``f(k)/log k`` surrogates, the
closed-form asymptotic catalog and empirical checks of the conditions under
which the surrogate is valid.
"""

from .asym import AsymptoticForm, FormKind, closed_form, integrate, log_integral_J1, match_form
from .conditions import Verdict, abel_decompose, check_conditions
from .kernels import BACKEND
from .powerlog import Expr, Term, differentiate, divide_by_log, evaluate, parse
from .sieve import SieveConfig, pi, stream_mobius, stream_primes
from .sums import (
    CheckpointGrid,
    mean_value,
    mertens,
    mobius_value_distribution,
    prime_sum,
    quantity_density,
    summation_table,
    surrogate_sum,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticForm",
    "BACKEND",
    "CheckpointGrid",
    "Expr",
    "FormKind",
    "SieveConfig",
    "Term",
    "Verdict",
    "abel_decompose",
    "check_conditions",
    "closed_form",
    "differentiate",
    "divide_by_log",
    "evaluate",
    "integrate",
    "log_integral_J1",
    "match_form",
    "mean_value",
    "mertens",
    "mobius_value_distribution",
    "parse",
    "pi",
    "prime_sum",
    "quantity_density",
    "stream_mobius",
    "stream_primes",
    "summation_table",
    "surrogate_sum",
]
