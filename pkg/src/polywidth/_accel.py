"""Numba acceleration switch.

Hot kernels in :mod:`polywidth._kernels` compile with numba when it is
importable.  Setting the environment variable ``POLYWIDTH_NO_NUMBA=1``
(before import) forces the pure-numpy fallbacks, which compute identical
results.  ``benchmarks/bench_kernels.py`` times both paths.
"""

import os

NUMBA_ENV_FLAG = "POLYWIDTH_NO_NUMBA"


def _disabled() -> bool:
    return os.environ.get(NUMBA_ENV_FLAG, "").strip() not in ("", "0")


try:
    if _disabled():
        raise ImportError(f"numba disabled via {NUMBA_ENV_FLAG}")
    from numba import njit

    USING_NUMBA = True
except ImportError:
    USING_NUMBA = False

    def njit(*args, **kwargs):
        """Identity decorator standing in for numba.njit."""

        def wrap(fn):
            return fn

        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return wrap
