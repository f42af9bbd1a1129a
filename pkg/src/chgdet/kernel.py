"""The confluent hypergeometric kernel K^(alpha, beta)(x, y) and its reductions.

Throughout, beta = i*b is purely imaginary and is carried by the real number b.
The kernel is evaluated in the manifestly real form

    K(x, y) = (C / pi) Im(A(x) conj(A(y))) / (x - y),

    A(x) = chi(x)^(1/2) |2x|^alpha e^{-ix} M(1 + alpha + beta, 1 + 2 alpha, 2ix),

with C = Gamma(1+alpha+beta) Gamma(1+alpha-beta) / Gamma(1+2 alpha)^2.
Internally the factor |2x|^alpha is split off ("reduced amplitude") because
the quadrature module absorbs |x|^(2 alpha) into a Gauss-Jacobi weight.
"""

from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError

__all__ = [
    "KernelParams",
    "amplitude",
    "chg_kernel",
    "chg_kernel_diag",
    "sine_kernel",
    "bessel1_kernel_half",
    "NEAR_DIAGONAL",
]

# below this separation the ratio form is replaced by the diagonal value at the midpoint
NEAR_DIAGONAL = 4e-6


@dataclass(frozen=True)
class KernelParams:
    """Kernel parameters: alpha > -1/2, beta = i*b, thinning gamma in [0, 1)."""

    alpha: float
    b: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "b", "gamma"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if not self.alpha > -0.5:
            raise DomainError(f"alpha must exceed -1/2, got {self.alpha!r}")
        if not 0.0 <= self.gamma < 1.0:
            raise DomainError(f"gamma must lie in [0, 1), got {self.gamma!r}")

    @property
    def beta(self):
        return 1j * self.b

    @property
    def kummer_a(self):
        return 1.0 + self.alpha + 1j * self.b

    @property
    def kummer_b(self):
        return 1.0 + 2.0 * self.alpha

    def prefactor(self):
        """C = |Gamma(1 + alpha + i b)|^2 / Gamma(1 + 2 alpha)^2 (real, positive)."""
        lg = specfun.log_gamma(self.kummer_a).real
        return float(np.exp(2.0 * lg - 2.0 * specfun.log_gamma(self.kummer_b).real))

    def with_gamma(self, gamma):
        return KernelParams(self.alpha, self.b, gamma)


def _check_nonzero(x, where):
    if np.any(np.asarray(x) == 0.0):
        raise DomainError(f"{where}: x = 0 is excluded (use the dedicated limit)")


def _chi_half(params, x):
    # chi_beta^(1/2) = e^{-pi b / 2} for x < 0, e^{+pi b / 2} for x > 0
    return np.where(x < 0.0, np.exp(-0.5 * np.pi * params.b), np.exp(0.5 * np.pi * params.b))


def reduced_amplitude(params, x, deriv=False):
    """A(x) / |2x|^alpha, and optionally its x-derivative.

    ``x`` is a nonzero scalar or array.  With ``deriv=True`` returns the pair
    ``(A_red, dA_red/dx)``.
    """
    x = np.asarray(x, dtype=float)
    z = 2j * x
    a, b = params.kummer_a, params.kummer_b
    m = specfun.kummer_m(a, b, z)
    ph = _chi_half(params, x) * np.exp(-1j * x)
    val = ph * m
    if not deriv:
        return val
    dm = specfun.kummer_m_deriv(a, b, z)
    return val, ph * (-1j * m + 2j * dm)


def amplitude(params, x):
    """The function A(x) entering the kernel; B(x) is its complex conjugate."""
    _check_nonzero(x, "amplitude")
    x = np.asarray(x, dtype=float)
    out = np.abs(2.0 * x) ** params.alpha * reduced_amplitude(params, x)
    return complex(out) if out.ndim == 0 else out


def chg_kernel_diag(params, x):
    """K(x, x) = (C / pi) Im(A'(x) conj(A(x)))."""
    _check_nonzero(x, "chg_kernel_diag")
    x = np.asarray(x, dtype=float)
    val, der = reduced_amplitude(params, x, deriv=True)
    out = params.prefactor() / np.pi * np.abs(2.0 * x) ** (2.0 * params.alpha) * np.imag(der * np.conj(val))
    return float(out) if out.ndim == 0 else out


def chg_kernel(params, x, y):
    """K(x, y) off the diagonal, x, y nonzero; broadcasts over arrays."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(x == y):
        raise DomainError("chg_kernel: x = y is excluded (use chg_kernel_diag)")
    _check_nonzero(x, "chg_kernel")
    _check_nonzero(y, "chg_kernel")
    out = _kernel_values(params, x.ravel(), y.ravel()).reshape(x.shape)
    return float(out) if out.ndim == 0 else out


def _kernel_values(params, x, y):
    scale = params.prefactor() / np.pi
    ax = reduced_amplitude(params, x)
    ay = reduced_amplitude(params, y)
    d = x - y
    near = np.abs(d) < NEAR_DIAGONAL
    out = np.empty(x.shape)
    far = ~near
    # the weight product is formed first so that K(x, y) == K(y, x) bitwise
    wxy = np.abs(2.0 * x[far]) ** params.alpha * np.abs(2.0 * y[far]) ** params.alpha
    a, b = ax[far], ay[far]
    im = a.imag * b.real - a.real * b.imag  # Im(a conj b), exactly odd under a <-> b
    out[far] = scale * (im / d[far]) * wxy
    if near.any():
        out[near] = chg_kernel_diag(params, 0.5 * (x[near] + y[near]))
    return out


def reduced_kernel_matrix(params, nodes):
    """Matrix of K(x_i, x_j) / (|x_i| |x_j|)^alpha on a node set avoiding 0.

    One amplitude evaluation per node; the diagonal uses the derivative
    formula and pairs closer than ``NEAR_DIAGONAL`` use the midpoint diagonal.
    """
    x = np.asarray(nodes, dtype=float)
    scale = params.prefactor() / np.pi * 4.0 ** params.alpha
    val, der = reduced_amplitude(params, x, deriv=True)
    d = x[:, None] - x[None, :]
    np.fill_diagonal(d, 1.0)
    mat = scale * np.imag(val[:, None] * np.conj(val)[None, :]) / d
    np.fill_diagonal(mat, scale * np.imag(der * np.conj(val)))
    np.fill_diagonal(d, np.inf)
    ii, jj = np.nonzero(np.abs(d) < NEAR_DIAGONAL)
    if ii.size:
        mid = 0.5 * (x[ii] + x[jj])
        v, dv = reduced_amplitude(params, mid, deriv=True)
        mat[ii, jj] = scale * np.imag(dv * np.conj(v))
    return 0.5 * (mat + mat.T)


def sine_kernel(x, y):
    """sin(x - y) / (pi (x - y)), with value 1/pi on the diagonal."""
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    out = np.sinc(d / np.pi) / np.pi
    return float(out) if np.ndim(out) == 0 else out


def bessel1_kernel_half(x, y):
    """Type-I Bessel kernel at alpha = 1/2, where J_{alpha +- 1/2} are J_1 and J_0.

    Nonzero x != y.  sqrt(xy) is read as x^(1/2) y^(1/2), so the branch
    factors cancel to sqrt(|x y|) / 2 in every quadrant.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    pref = np.sqrt(np.abs(x * y)) / 2.0
    j1x, j0x = specfun.bessel_j01(1, x), specfun.bessel_j01(0, x)
    j1y, j0y = specfun.bessel_j01(1, y), specfun.bessel_j01(0, y)
    out = pref * (j1x * j0y - j0x * j1y) / (x - y)
    return float(out) if out.ndim == 0 else out
