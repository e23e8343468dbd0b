#!/usr/bin/env python3
"""Compare the numba-jitted kernels against the pure-numpy fallback.

Each lane runs in its own interpreter because the backend is fixed at import
time by SUMMA_NUMBA.  Usage:  python benchmarks/bench_backends.py
"""

import json
import os
import subprocess
import sys


def lane(flag: str) -> dict:
    env = dict(os.environ, SUMMA_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-m", "summa.bench", "--json"],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout)


def main() -> None:
    lanes = {}
    for flag in ("0", "1"):
        try:
            lanes[flag] = lane(flag)
        except subprocess.CalledProcessError as exc:
            sys.stderr.write(f"SUMMA_NUMBA={flag} failed:\n{exc.stderr}\n")
            if flag == "0":
                raise
    numpy_times = lanes["0"]["timings"]
    numba_times = lanes.get("1", {}).get("timings", {})
    width = max(len(k) for k in numpy_times)
    print(f"{'kernel':<{width}}  {'numpy':>12}  {'numba':>12}  {'speedup':>8}")
    for name, t_np in numpy_times.items():
        t_nb = numba_times.get(name)
        if t_nb:
            print(f"{name:<{width}}  {t_np * 1e3:>9.3f} ms  {t_nb * 1e3:>9.3f} ms  "
                  f"{t_np / t_nb:>7.1f}x")
        else:
            print(f"{name:<{width}}  {t_np * 1e3:>9.3f} ms  {'n/a':>12}  {'':>8}")


if __name__ == "__main__":
    main()
