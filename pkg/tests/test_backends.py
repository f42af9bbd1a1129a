"""The pure-numpy fallback must reproduce the compiled kernels."""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from chgdet import _accel
from chgdet._kummer import series_batch
from chgdet.fredholm import build_operator
from chgdet.kernel import KernelParams
from chgdet.painleve import log_det_via_H
from chgdet.stats import _pb_loop, _pb_vec, poisson_binomial

_WORKER = r"""
import json
import numpy as np
from chgdet import _accel
from chgdet._kummer import series_batch
from chgdet.fredholm import build_operator
from chgdet.kernel import KernelParams
from chgdet.painleve import log_det_via_H
from chgdet.stats import poisson_binomial

p = KernelParams(0.5, 0.3, 0.5)
m, _ = series_batch(1.5 + 0.3j, 2.0, 2j * np.linspace(-10, 10, 41))
print(json.dumps({
    "numba": _accel.USE_NUMBA,
    "kummer": [[float(v.real), float(v.imag)] for v in m],
    "op": build_operator(p, 3.0, 64).matrix.tolist(),
    "pb": poisson_binomial(np.linspace(0.05, 0.95, 30)).tolist(),
    "pv": float(log_det_via_H(p, 2.0)),
}))
"""


@pytest.fixture(scope="module")
def fallback():
    env = dict(os.environ, CHGDET_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", _WORKER], env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def test_flag_respected(fallback):
    assert fallback["numba"] is False


def test_kummer(fallback):
    m, _ = series_batch(1.5 + 0.3j, 2.0, 2j * np.linspace(-10, 10, 41))
    ref = np.array([complex(*v) for v in fallback["kummer"]])
    assert np.max(np.abs(m - ref) / np.abs(ref)) <= 1e-14


def test_operator(fallback):
    op = build_operator(KernelParams(0.5, 0.3, 0.5), 3.0, 64)
    assert np.max(np.abs(op.matrix - np.array(fallback["op"]))) <= 1e-14


def test_poisson_binomial(fallback):
    lam = np.linspace(0.05, 0.95, 30)
    assert np.max(np.abs(poisson_binomial(lam) - np.array(fallback["pb"]))) <= 1e-15
    assert np.max(np.abs(_pb_loop(lam) - _pb_vec(lam))) <= 1e-15


def test_painleve(fallback):
    assert abs(float(log_det_via_H(KernelParams(0.5, 0.3, 0.5), 2.0)) - fallback["pv"]) <= 1e-9


def test_default_backend():
    assert _accel.USE_NUMBA == (os.environ.get("CHGDET_NUMBA", "1") not in ("0", "false", "no"))
