"""Kernel backend selection: compiled extension if available, else Python.

Set ZARMOD_PURE_PYTHON=1 to force the fallback (used by the benchmark).
"""

import os

if os.environ.get("ZARMOD_PURE_PYTHON") == "1":
    from zarmod._kernels.pyfallback import cf_sweep_check, max_quotient_array

    BACKEND = "python"
else:
    try:
        from zarmod._kernels.cfkern import cf_sweep_check, max_quotient_array

        BACKEND = "cython"
    except ImportError:
        from zarmod._kernels.pyfallback import cf_sweep_check, max_quotient_array

        BACKEND = "python"

__all__ = ["BACKEND", "cf_sweep_check", "max_quotient_array"]
