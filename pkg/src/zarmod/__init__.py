"""Modular continued-fraction experiments: bounded-quotient sets, matrix
group measures, incidence counts, and Cayley graph diagnostics."""

__version__ = "0.1.0"

from zarmod._kernels import BACKEND as kernel_backend  # noqa: F401
