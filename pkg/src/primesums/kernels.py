"""Kernel backend selection.

The compiled extension is preferred; setting ``PRIMESUMS_PURE=1`` in the
environment forces the NumPy fallback. Both backends are importable
side by side via :func:`load_backend` for comparison runs.
"""

import importlib
import os

__all__ = ["BACKEND", "ExactSum", "load_backend", "mobius_segment", "sieve_segment"]


def load_backend(name=None):
    """Return the kernel module for ``name`` ("cython", "numpy" or None = best available)."""
    if name == "numpy":
        return importlib.import_module("primesums._fallback")
    if name == "cython":
        return importlib.import_module("primesums._kernels")
    if name is not None:
        raise ValueError(f"unknown backend {name!r}")
    if os.environ.get("PRIMESUMS_PURE"):
        return load_backend("numpy")
    try:
        return load_backend("cython")
    except ImportError:
        return load_backend("numpy")


_impl = load_backend()

BACKEND = _impl.BACKEND
ExactSum = _impl.ExactSum
sieve_segment = _impl.sieve_segment
mobius_segment = _impl.mobius_segment
