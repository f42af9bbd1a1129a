"""Counting statistics of the determinantal point process on (-s, s).

N(s) is distributed as a sum of independent Bernoulli(lambda_i) variables,
lambda_i the eigenvalues of K_s, so everything here is arithmetic on the
spectrum of the discretised operator.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as _sp

from . import asymptotics
from ._accel import USE_NUMBA, numba_jit
from .errors import DomainError
from .fredholm import build_operator, eigenvalues, initial_nodes, log_det

__all__ = [
    "CountingSummary",
    "counting_summary",
    "genfunc_check",
    "moment_asym_gap",
    "poisson_binomial",
    "ks_distance",
    "EIG_CUTOFF",
]

EIG_CUTOFF = 1e-14


@numba_jit
def _pb_loop(lam):
    n = lam.shape[0]
    pmf = np.zeros(n + 1)
    pmf[0] = 1.0
    for i in range(n):
        p = lam[i]
        q = 1.0 - p
        for k in range(i + 1, 0, -1):
            pmf[k] = pmf[k] * q + pmf[k - 1] * p
        pmf[0] *= q
    return pmf


def _pb_vec(lam):
    pmf = np.zeros(lam.shape[0] + 1)
    pmf[0] = 1.0
    for i, p in enumerate(lam):
        pmf[1 : i + 2] = pmf[1 : i + 2] * (1.0 - p) + pmf[: i + 1] * p
        pmf[0] *= 1.0 - p
    return pmf


def poisson_binomial(lam):
    """pmf of a sum of independent Bernoulli(lam_i), support 0 .. len(lam)."""
    lam = np.clip(np.ascontiguousarray(lam, dtype=float), 0.0, 1.0)
    return _pb_loop(lam) if USE_NUMBA else _pb_vec(lam)


def ks_distance(pmf, mean, var):
    """Continuity-corrected sup-distance between the pmf's CDF and the normal law.

    The CDF at integer k is compared with Phi((k + 1/2 - mean) / sd).  Without
    the half-unit shift the distance is bounded below by half the largest
    jump of the lattice CDF, which does not vanish at any fixed s.
    """
    if var <= 0.0:
        return 1.0
    k = np.arange(pmf.shape[0])
    cdf = np.cumsum(pmf)
    z = (k + 0.5 - mean) / math.sqrt(var)
    return float(np.max(np.abs(cdf - _sp.ndtr(z))))


@dataclass(frozen=True)
class CountingSummary:
    s: float
    e_n: float
    var_n: float
    pmf: np.ndarray = field(repr=False)
    ks_normal: float
    n_eigs: int
    n_quad: int


def _spectrum(params, s, n_quad):
    n = 2 * initial_nodes(s) if n_quad is None else int(n_quad)
    op = build_operator(params.with_gamma(0.0), s, n)
    return op, eigenvalues(op), n


def counting_summary(params, s, n_quad=None):
    """Mean, variance, exact distribution and CLT distance of N(s).

    Eigenvalues at or below ``EIG_CUTOFF`` are dropped; their count is
    ``n_quad - n_eigs``.
    """
    s = float(s)
    if not s > 0.0:
        raise DomainError(f"s must be positive, got {s!r}")
    _, lam, n = _spectrum(params, s, n_quad)
    lam = np.clip(lam[lam > EIG_CUTOFF], 0.0, 1.0)
    e_n = float(np.sum(lam))
    var_n = float(np.sum(lam * (1.0 - lam)))
    pmf = poisson_binomial(lam)
    return CountingSummary(s, e_n, var_n, pmf, ks_distance(pmf, e_n, var_n), int(lam.size), n)


def genfunc_check(params, s, nu, n_quad=None):
    """Both sides of E[e^{-2 pi nu N(s)}] = det(I - gamma(nu) K_s).

    gamma(nu) = 1 - e^{-2 pi nu}; both sides use one discretisation.
    """
    if not nu >= 0.0:
        raise DomainError(f"nu must be nonnegative, got {nu!r}")
    summ = counting_summary(params, s, n_quad)
    k = np.arange(summ.pmf.shape[0])
    lhs = float(np.sum(summ.pmf * np.exp(-2.0 * math.pi * nu * k)))
    op, _, _ = _spectrum(params, s, summ.n_quad)
    rhs = math.exp(log_det(op, -math.expm1(-2.0 * math.pi * nu)))
    return {"lhs": lhs, "rhs": rhs}


def moment_asym_gap(params, s, n_quad=None):
    """Distance of the exact mean and variance from their large-s forms."""
    s = float(s)
    if not s >= 5.0:
        raise DomainError(f"s must be at least 5, got {s!r}")
    summ = counting_summary(params, s, n_quad)
    ref = asymptotics.counting_refs(params.alpha, s)
    return {
        "mean_gap": abs(summ.e_n - ref["mu"]),
        "var_gap": abs(summ.var_n - ref["sigma2"] - ref["var_const"]),
    }
