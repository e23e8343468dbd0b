"""Kernel backend selection: numba-jitted loops vs the pure-numpy fallback.

Two lanes exist for every hot kernel.  The environment variable
``SUMMA_NUMBA`` picks one at import time:

* ``SUMMA_NUMBA=1`` (or ``numba``) -- require the jitted kernels; raise if
  numba cannot be imported.
* ``SUMMA_NUMBA=0`` (or ``numpy``)  -- force the vectorized numpy fallback.
* unset or ``auto``                 -- use numba when importable.

``SUMMA_THREADS`` caps the thread fan-out of grid sweeps (default 1,
i.e. serial).  Results are assembled in input order either way, so the
setting never changes numeric output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["HAVE_NUMBA", "USE_NUMBA", "BACKEND", "njit", "thread_count", "parallel_map"]

try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via SUMMA_NUMBA=0 lane
    _numba_njit = None
    HAVE_NUMBA = False

_flag = os.environ.get("SUMMA_NUMBA", "auto").strip().lower()
if _flag in ("0", "no", "off", "false", "numpy"):
    USE_NUMBA = False
elif _flag in ("1", "yes", "on", "true", "numba"):
    if not HAVE_NUMBA:
        raise RuntimeError("SUMMA_NUMBA=%s but numba is not importable" % _flag)
    USE_NUMBA = True
else:
    USE_NUMBA = HAVE_NUMBA

BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(func):
    """Wrap ``func`` with numba's njit on the jitted lane, else return it as-is."""
    if USE_NUMBA:
        return _numba_njit(cache=True)(func)
    return func


def thread_count() -> int:
    raw = os.environ.get("SUMMA_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def parallel_map(fn, items):
    """Map ``fn`` over ``items`` preserving order; threads capped by SUMMA_THREADS."""
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
