"""Numba acceleration switch for the hot numeric kernels.

Kernels in :mod:`urgency.kernels` are written once in numba-compatible numpy
and compiled with ``@njit`` when numba is importable. Setting the environment
variable ``URGENCY_NUMBA=0`` (or ``false``/``off``) before import selects the
pure-numpy fallback path instead; both paths run the same source and produce
bit-identical results. ``benchmarks/bench_kernels.py`` compares the two.
"""

import os


def _detect() -> bool:
    flag = os.environ.get("URGENCY_NUMBA", "").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _detect()

if NUMBA_ENABLED:
    from numba import njit as _njit

    def jit(func):
        return _njit(cache=True)(func)

else:

    def jit(func):
        return func
