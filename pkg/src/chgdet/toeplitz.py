"""Toeplitz determinants with a Fisher-Hartwig symbol and their scaling limit.

The symbol on the unit circle is

    w(e^{i theta}) = (2 sin(theta/2))^(2 alpha) e^{-b (theta - pi)} f(theta),

with f = 1 - gamma on the arc |theta| < t (mod 2 pi) and 1 elsewhere.  It is
real and positive on (0, 2 pi), so the Toeplitz matrices are Hermitian
positive definite and ln D_n comes from a Cholesky factorisation.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as _la

from .errors import ConvergenceError, DiscretizationError, DomainError
from .fredholm import gauss_jacobi

__all__ = [
    "SymbolSpec",
    "SymbolCoeffs",
    "symbol",
    "fourier_coeffs",
    "log_toeplitz_det",
    "scaling_limit_check",
    "N_MAX",
]

N_MAX = 1024
# panel [0, delta] near the root singularity when there is no arc
_DELTA0 = math.pi / 512.0
_MAX_REFINE = 4


@dataclass(frozen=True)
class SymbolSpec:
    alpha: float
    b: float = 0.0
    gamma: float = 0.0
    arc_t: float = 0.0

    def __post_init__(self):
        if not self.alpha > -0.5:
            raise DomainError(f"alpha must exceed -1/2, got {self.alpha!r}")
        if not 0.0 <= self.gamma < 1.0:
            raise DomainError(f"gamma must lie in [0, 1), got {self.gamma!r}")
        if not 0.0 <= self.arc_t < math.pi:
            raise DomainError(f"arc_t must lie in [0, pi), got {self.arc_t!r}")
        if not math.isfinite(self.b):
            raise DomainError("b must be finite")


@dataclass(frozen=True)
class SymbolCoeffs:
    """c_k for k = 0 .. n-1; c_{-k} = conj(c_k) since the symbol is real."""

    n: int
    coeffs: np.ndarray = field(repr=False)
    est_err: float = 0.0

    def __getitem__(self, k):
        return self.coeffs[k] if k >= 0 else np.conj(self.coeffs[-k])

    def full(self):
        """c_{-(n-1)} .. c_{n-1}."""
        return np.concatenate([np.conj(self.coeffs[:0:-1]), self.coeffs])


def symbol(spec, theta):
    """w(e^{i theta}) for theta in (0, 2 pi)."""
    theta = np.asarray(theta, dtype=float)
    root = (2.0 * np.sin(0.5 * theta)) ** (2.0 * spec.alpha)
    arc = (theta < spec.arc_t) | (theta > 2.0 * math.pi - spec.arc_t)
    return root * np.exp(-spec.b * (theta - math.pi)) * np.where(arc, 1.0 - spec.gamma, 1.0)


def _half_panels(spec, k_max, density):
    """Nodes theta in (0, pi] with weights including |theta|^(2 alpha) and the
    regular part of the root factor; f is applied by the caller."""
    a2 = 2.0 * spec.alpha
    delta = spec.arc_t if spec.arc_t > 0.0 else _DELTA0
    # Gauss-Jacobi on [0, delta] absorbs theta^(2 alpha)
    m0 = int(density * k_max * delta) + 24
    t, w = gauss_jacobi(m0, 0.0, a2) if a2 != 0.0 else np.polynomial.legendre.leggauss(m0)
    th0 = 0.5 * delta * (1.0 + t)
    w0 = (0.5 * delta) ** (a2 + 1.0) * w
    sinc = np.where(th0 > 0, 2.0 * np.sin(0.5 * th0) / th0, 1.0)
    nodes, weights = [th0], [w0 * sinc**a2]
    # geometrically graded Gauss-Legendre panels delta, 2 delta, ..., pi
    lo = delta
    while lo < math.pi:
        hi = min(2.0 * lo, math.pi)
        if math.pi - hi < 0.5 * (hi - lo):
            hi = math.pi
        m = int(density * k_max * (hi - lo)) + 24
        x, wl = np.polynomial.legendre.leggauss(m)
        th = lo + 0.5 * (hi - lo) * (1.0 + x)
        nodes.append(th)
        weights.append(0.5 * (hi - lo) * wl * (2.0 * np.sin(0.5 * th)) ** a2)
        lo = hi
    return np.concatenate(nodes), np.concatenate(weights)


def _coeffs(spec, n, density):
    th, w = _half_panels(spec, max(n - 1, 1), density)
    f = np.where(th < spec.arc_t, 1.0 - spec.gamma, 1.0)
    # theta and its mirror 2 pi - theta share the root factor and f
    wl = w * f * np.exp(-spec.b * (th - math.pi))
    wr = w * f * np.exp(spec.b * (th - math.pi))
    k = np.arange(n)[:, None]
    ph = np.exp(-1j * k * th[None, :])
    return (ph @ wl + np.conj(ph) @ wr) / (2.0 * math.pi)


def fourier_coeffs(spec, n, tol=1e-13):
    """Fourier coefficients c_0 .. c_{n-1} of the symbol to absolute ``tol``.

    The node density is doubled until two passes agree to ``tol``.
    """
    if not 1 <= n <= N_MAX:
        raise DomainError(f"n must lie in [1, {N_MAX}], got {n}")
    density = 0.6
    prev = _coeffs(spec, n, density)
    for _ in range(_MAX_REFINE):
        density *= 2.0
        cur = _coeffs(spec, n, density)
        err = float(np.max(np.abs(cur - prev)))
        if err <= tol:
            return SymbolCoeffs(n, cur, err)
        prev = cur
    raise ConvergenceError(f"Fourier coefficients not converged to {tol:g} (last change {err:.3g})")


def log_toeplitz_det(coeffs, n=None):
    """ln D_n from the Cholesky pivots of the Hermitian Toeplitz matrix (c_{k-j})."""
    n = coeffs.n if n is None else int(n)
    if not 1 <= n <= coeffs.n:
        raise DomainError(f"n must lie in [1, {coeffs.n}], got {n}")
    c = coeffs.coeffs[:n]
    mat = _la.toeplitz(np.conj(c), c)
    try:
        chol = _la.cholesky(mat, lower=True)
    except _la.LinAlgError as exc:
        raise DiscretizationError(f"non-positive pivot in the Toeplitz factorisation: {exc}") from exc
    return float(2.0 * np.sum(np.log(np.diag(chol).real)))


def scaling_limit_check(params, s, n, tol=1e-13):
    """ln D_n(2s/n) - ln D_n(0), which tends to ln det(I - gamma K_s)."""
    if not 4 <= n <= N_MAX:
        raise DomainError(f"n must lie in [4, {N_MAX}], got {n}")
    arc = 2.0 * float(s) / n
    if not 0.0 < arc < math.pi:
        raise DomainError(f"2s/n must lie in (0, pi), got {arc!r}")
    if params.gamma == 0.0:
        return 0.0
    lds = []
    for t in (arc, 0.0):
        spec = SymbolSpec(params.alpha, params.b, params.gamma, t)
        lds.append(log_toeplitz_det(fourier_coeffs(spec, n, tol)))
    return lds[0] - lds[1]
