"""Compare the numba and pure-numpy backends on the hot loops.

Each backend runs in a fresh interpreter because the switch is read at
import time.  numba timings exclude the first (compiling) call.

    python3 benchmarks/bench_backends.py
"""

import json
import os
import subprocess
import sys

_WORKER = r"""
import json, time
import numpy as np
from chgdet import _accel
from chgdet._kummer import series_batch
from chgdet.kernel import KernelParams
from chgdet.fredholm import build_operator
from chgdet.painleve import log_det_via_H
from chgdet.stats import poisson_binomial

def best(f, reps=3):
    f()
    out = []
    for _ in range(reps):
        t = time.perf_counter(); f(); out.append(time.perf_counter() - t)
    return min(out)

z = 2j * np.linspace(-15.0, 15.0, 2000)
lam = np.random.default_rng(0).uniform(size=400)
p = KernelParams(0.5, 0.3, 0.5)
res = {
    "numba": _accel.USE_NUMBA,
    "kummer_series_2000pts": best(lambda: series_batch(1.5 + 0.3j, 2.0, z)),
    "build_operator_n512_s5": best(lambda: build_operator(p, 5.0, 512)),
    "poisson_binomial_400": best(lambda: poisson_binomial(lam)),
    "painleve_s3": best(lambda: log_det_via_H(p, 3.0)),
}
print(json.dumps(res))
"""


def run(flag):
    env = dict(os.environ, CHGDET_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", _WORKER], env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    fast, slow = run("1"), run("0")
    keys = [k for k in fast if k != "numba"]
    print(f"{'case':28s} {'numba [s]':>12s} {'numpy [s]':>12s} {'speedup':>9s}")
    for k in keys:
        print(f"{k:28s} {fast[k]:12.5f} {slow[k]:12.5f} {slow[k] / fast[k]:9.1f}")


if __name__ == "__main__":
    main()
