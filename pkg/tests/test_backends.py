"""Cross-lane consistency: the numpy fallback must agree with the jitted lane.

The lane is fixed at import time, so the opposite lane runs in a
subprocess.  Skipped cleanly when numba is unavailable.
"""

import json
import os
import subprocess
import sys

import pytest

import summa
from summa._backend import HAVE_NUMBA

PROBE = """
import json
from summa.cutoffs import make_cutoff
from summa.smoothed import grandi_smoothed, smoothed_sum
from summa.casimir import CasimirConfig, capital_F, u_t_dimensionless
import summa

eta = make_cutoff("bump")
cfg = CasimirConfig(N=200.0, cutoff=eta, quad_tol=1e-9)
print(json.dumps({
    "backend": summa.BACKEND,
    "smoothed": smoothed_sum(1, eta, 5000.0),
    "grandi": grandi_smoothed(eta, 5000.0),
    "F0": capital_F(0.0, cfg),
    "ut": u_t_dimensionless(cfg).value,
}))
"""


def lane_values(flag: str) -> dict:
    env = dict(os.environ, SUMMA_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", PROBE], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not importable")
def test_lanes_agree_numerically():
    np_vals = lane_values("0")
    nb_vals = lane_values("1")
    assert np_vals["backend"] == "numpy"
    assert nb_vals["backend"] == "numba"
    # same math, different summation orders: agreement to near roundoff,
    # quadrature-tolerance level for the adaptive pieces
    assert abs(np_vals["smoothed"] - nb_vals["smoothed"]) <= 1e-9 * abs(nb_vals["smoothed"])
    assert abs(np_vals["grandi"] - nb_vals["grandi"]) <= 1e-11
    assert abs(np_vals["F0"] - nb_vals["F0"]) <= 1e-8 * abs(nb_vals["F0"])
    assert abs(np_vals["ut"] - nb_vals["ut"]) <= 1e-6 * abs(nb_vals["ut"])


def test_thread_cap_never_changes_output():
    argv = ["casimir", "--N", "160", "--levels", "3"]
    env_base = {k: v for k, v in os.environ.items() if k != "SUMMA_THREADS"}
    outputs = []
    for threads in ("1", "4"):
        env = dict(env_base, SUMMA_THREADS=threads)
        r = subprocess.run([sys.executable, "-m", "summa.cli"] + argv, env=env,
                           capture_output=True, text=True, check=True)
        payload = json.loads(r.stdout)
        assert payload["config"]["threads"] == int(threads)
        payload["config"].pop("threads")
        outputs.append(payload)
    assert outputs[0] == outputs[1]
