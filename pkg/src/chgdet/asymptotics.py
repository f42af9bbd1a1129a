"""Closed-form large-gap and boundary asymptotics.

* the large-s expansion of ln det(I - gamma K_s),
* the counting-statistics reference constants,
* leading terms of the Painleve V data as i*tau -> +oo and i*tau -> 0+.

All tau-powers are taken on the ray tau = -i t with the single branch
``ARG_TAU`` below.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError

__all__ = [
    "ARG_TAU",
    "AsymDetBreakdown",
    "PVRefPoint",
    "c_of_gamma",
    "log_asym_det",
    "counting_refs",
    "pv_large_t_ref",
    "pv_small_t_ref",
    "small_t_prefactor",
    "VAR_CONST",
]

# arg(tau) on the integration ray tau = -i t.  The alternative 3 pi / 2 was
# rejected numerically: it misses the integrated solution by e^{-/+4 pi c}.
ARG_TAU = -0.5 * math.pi

VAR_CONST = (1.0 + specfun.EULER_GAMMA + 2.0 * math.log(2.0)) / math.pi**2


def c_of_gamma(gamma):
    """c = -ln(1 - gamma) / (2 pi)."""
    gamma = float(gamma)
    if not 0.0 <= gamma < 1.0:
        raise DomainError(f"gamma must lie in [0, 1), got {gamma!r}")
    return -math.log1p(-gamma) / (2.0 * math.pi)


@dataclass(frozen=True)
class AsymDetBreakdown:
    """Terms of the large-s log-determinant; ``total`` is their sum."""

    c: float
    term_linear: float
    term_barnes: float
    term_log: float
    term_exp: float
    total: float


def log_asym_det(params, s):
    """Leading large-gap asymptotics of ln det(I - gamma K_s), error term dropped.

    2 alpha pi c + 2 ln[G(1+ic) G(1-ic)] + 2 c^2 ln(4s) - 4 c s.
    """
    s = float(s)
    if not s > 0.0:
        raise DomainError(f"s must be positive, got {s!r}")
    c = c_of_gamma(params.gamma)
    lin = 2.0 * params.alpha * math.pi * c
    barnes = 2.0 * specfun.barnes_g_log_pair(c)
    lg = 2.0 * c * c * math.log(4.0 * s)
    ex = -4.0 * c * s
    return AsymDetBreakdown(c, lin, barnes, lg, ex, lin + barnes + lg + ex)


def counting_refs(alpha, s):
    """Reference mean and variance of the counting function N(s).

    Returns a dict with ``mu`` = 2s/pi - alpha, ``sigma2`` = ln s / pi^2 and
    ``var_const`` = (1 + gamma_E + 2 ln 2) / pi^2.
    """
    s = float(s)
    if not s >= 1.0:
        raise DomainError(f"s must be at least 1, got {s!r}")
    return {
        "mu": 2.0 * s / math.pi - float(alpha),
        "sigma2": math.log(s) / math.pi**2,
        "var_const": VAR_CONST,
    }


@dataclass(frozen=True)
class PVRefPoint:
    t: float
    u1: complex
    u2: complex
    v1: complex
    v2: complex
    H: complex


def _tau_pow(t, p):
    # tau^p with ln tau = ln t + i ARG_TAU
    return np.exp(p * complex(math.log(t), ARG_TAU))


def _gratio(z1, z2, z3, z4):
    """Gamma(z1) Gamma(z2) / (Gamma(z3) Gamma(z4))."""
    lg = specfun.log_gamma
    return np.exp(lg(z1) + lg(z2) - lg(z3) - lg(z4))


def pv_large_t_ref(params, t):
    """Leading terms of (u1, u2, v1, v2, H) as i tau -> +oo, at tau = -i t."""
    t = float(t)
    if not t >= 1.0:
        raise DomainError(f"t must be at least 1, got {t!r}")
    c = c_of_gamma(params.gamma)
    tau = -1j * t
    if c == 0.0:
        return PVRefPoint(t, 0j, 0j, 0j, 0j, 0j)
    a, be = params.alpha, params.beta
    ic = 1j * c
    two_b = np.exp(2.0 * be * math.log(2.0))
    g1 = _gratio(1 + a + be, 1 - ic, 1 + a - be, 1 + ic)
    g2 = _gratio(1 + a + be, 1 + ic, 1 + a - be, 1 - ic)
    eh = np.exp(tau / 2.0)
    u1 = ic * g1 * two_b * np.exp(1j * math.pi * (a - be)) * math.exp(-math.pi * c) * eh * _tau_pow(t, 2 * (ic - be))
    v1 = 1.0 / g1 / two_b * np.exp(-1j * math.pi * (a - be)) * math.exp(math.pi * c) / eh * _tau_pow(t, -2 * (ic - be))
    u2 = -ic * g2 * two_b * np.exp(-1j * math.pi * (a + be)) * math.exp(math.pi * c) / eh * _tau_pow(t, -2 * (ic + be))
    v2 = 1.0 / g2 / two_b * np.exp(1j * math.pi * (a + be)) * math.exp(-math.pi * c) * eh * _tau_pow(t, 2 * (ic + be))
    h = -ic + 2.0 * c * c / tau
    return PVRefPoint(t, complex(u1), complex(u2), complex(v1), complex(v2), complex(h))


def small_t_prefactor(params):
    """gamma Gamma(1+alpha-beta) Gamma(1+alpha+beta) / (i pi 2^(2 alpha+1) Gamma(1+2 alpha)^2)."""
    a = params.alpha
    lg = specfun.log_gamma
    mag = np.exp(lg(1 + a - params.beta) + lg(1 + a + params.beta) - 2.0 * lg(1 + 2 * a))
    return complex(params.gamma * mag / (1j * math.pi * 2.0 ** (2 * a + 1)))


def pv_small_t_ref(params, t):
    """Leading terms of (u1, u2, v1, v2, H) as i tau -> 0+, with |tau| = t."""
    t = float(t)
    if not 0.0 < t <= 0.1:
        raise DomainError(f"t must lie in (0, 0.1], got {t!r}")
    a, be = params.alpha, params.beta
    p = small_t_prefactor(params) * t ** (2 * a)
    u1 = -p * np.exp(-1j * math.pi * be)
    u2 = p * np.exp(1j * math.pi * be)
    h = p * np.cos(math.pi * be) / (2 * a + 1)
    return PVRefPoint(t, complex(u1), complex(u2), 1 + 0j, 1 + 0j, complex(h))
