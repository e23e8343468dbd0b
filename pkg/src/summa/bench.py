"""Timing of the hot kernels under the active backend.

Run as ``python -m summa.bench``; the lane is whatever SUMMA_NUMBA selected
at import.  ``benchmarks/bench_backends.py`` drives this module once per
lane and prints the side-by-side comparison.
"""

from __future__ import annotations

import json
import sys
import time

from ._backend import BACKEND
from . import _kernels
from .casimir import CasimirConfig, u_t_dimensionless
from .cutoffs import make_cutoff
from .smoothed import grandi_smoothed, smoothed_sum


def _time(fn, repeat: int = 5) -> float:
    fn()  # warm-up: first call pays any jit compilation
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_benchmarks() -> dict:
    bump = make_cutoff("bump")
    cfg = CasimirConfig(N=400.0, cutoff=bump, quad_tol=1e-9)
    cases = {
        "smoothed_sum(s=1, bump, N=1e6)": lambda: smoothed_sum(1, bump, 1e6),
        "grandi_smoothed(bump, N=1e6)": lambda: grandi_smoothed(bump, 1e6),
        "moment_quad(bump, [0, 400])": lambda: _kernels.moment_quad(
            _kernels.KIND_BUMP, 0, 2, 1.0 / 400.0, 0.0, 400.0, 1e-10),
        "u_t_dimensionless(bump, N=400)": lambda: u_t_dimensionless(cfg),
    }
    return {name: _time(fn) for name, fn in cases.items()}


def main() -> None:
    results = run_benchmarks()
    if "--json" in sys.argv[1:]:
        print(json.dumps({"backend": BACKEND, "timings": results}, sort_keys=True))
        return
    print(f"backend: {BACKEND}")
    for name, secs in results.items():
        print(f"  {name:<38s} {secs * 1e3:10.3f} ms")


if __name__ == "__main__":
    main()
