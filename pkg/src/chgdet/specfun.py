"""Complex special functions: log-Gamma, Barnes G, Kummer M, Bessel J0/J1."""

import math

import numpy as np
from scipy import special as _sp

from ._kummer import MAX_TERMS as _SERIES_CAP
from ._kummer import series_batch
from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "log_gamma",
    "gamma",
    "rgamma",
    "log_barnes_g",
    "barnes_g_log_pair",
    "kummer_m",
    "kummer_m_deriv",
    "bessel_j01",
    "EULER_GAMMA",
]

EULER_GAMMA = 0.57721566490153286061
LOG_2PI = math.log(2.0 * math.pi)
# zeta'(-1) = 1/12 - ln(Glaisher's constant)
_ZETA_PRIME_M1 = -0.16542114370045092921

_LANCZOS_G = 7.0
_LANCZOS = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)

_STIRLING = np.array([_sp.bernoulli(2 * k)[-1] / (2 * k * (2 * k - 1)) for k in range(1, 13)])

# B_{2k+2} / (4 k (k + 1)) for the large-argument expansion of ln G(1 + z)
_BERNOULLI = [_sp.bernoulli(2 * k + 2)[-1] for k in range(1, 16)]
_BARNES_ASYM = np.array([_BERNOULLI[k - 1] / (4.0 * k * (k + 1)) for k in range(1, 16)])
_BARNES_SHIFT = 12.0
_BARNES_TAYLOR_RADIUS = 0.5
_ZETA = _sp.zeta(np.arange(2, 80, dtype=float))  # zeta(2) ... zeta(79)

_SERIES_RADIUS = 30.0
# fallback radius for the series when the asymptotic error estimate is too large
_SERIES_RESCUE = 40.0
_MAX_Z = 120.0
_ASYM_TARGET = 1e-10


def _is_pole(z):
    z = np.asarray(z, dtype=complex)
    return (z.imag == 0.0) & (z.real <= 0.0) & (z.real == np.round(z.real))


def _lanczos(z):
    zm = z - 1.0
    x = np.full_like(zm, _LANCZOS[0])
    for i in range(1, _LANCZOS.size):
        x = x + _LANCZOS[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return 0.5 * LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(x)


def _stirling(z):
    lz = np.log(z)
    acc = (z - 0.5) * lz - z + 0.5 * LOG_2PI
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    p = zinv
    for coef in _STIRLING:
        acc = acc + coef * p
        p = p * zinv2
    return acc


def _lgamma_right(z):
    """ln Gamma(z) for Re z >= 1/2 on the continuous branch.

    Lanczos for |z| < 10; Stirling's series beyond, where it rounds better.
    """
    z = np.asarray(z, dtype=complex)
    big = np.abs(z) >= 10.0
    out = np.empty_like(z)
    out[big] = _stirling(z[big])
    out[~big] = _lanczos(z[~big])
    return out


def _lgamma(z):
    z = np.asarray(z, dtype=complex)
    left = z.real < 0.5
    out = np.empty_like(z)
    out[~left] = _lgamma_right(z[~left])
    zl = z[left]
    # reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    out[left] = math.log(math.pi) - np.log(np.sin(np.pi * zl)) - _lgamma_right(1.0 - zl)
    return out


def log_gamma(z):
    """Principal logarithm of Gamma(z), imaginary part in [-pi, pi).

    Accepts scalars or arrays.  Raises :class:`PoleError` at nonpositive
    integers.
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(_is_pole(zz)):
        raise PoleError(f"log_gamma: pole at nonpositive integer {z!r}")
    out = _lgamma(zz)
    out = out.real + 1j * (np.mod(out.imag + np.pi, 2.0 * np.pi) - np.pi)
    return complex(out[0]) if scalar else out


def gamma(z):
    return np.exp(log_gamma(z))


def rgamma(z):
    """1 / Gamma(z), entire: zero at the poles of Gamma."""
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    pole = _is_pole(zz)
    out = np.zeros_like(zz)
    out[~pole] = np.exp(-_lgamma(zz[~pole]))
    return complex(out[0]) if scalar else out


def _log_g1_taylor(w):
    # ln G(1+w) = w/2 ln 2pi - w(w+1)/2 - gamma_E w^2/2 + sum_{k>=3} (-1)^{k-1} zeta(k-1) w^k / k
    acc = 0.5 * w * LOG_2PI - 0.5 * w * (w + 1.0) - 0.5 * EULER_GAMMA * w * w
    wk = w * w
    for k in range(3, _ZETA.size + 2):
        wk = wk * w
        term = (-1.0) ** (k - 1) * _ZETA[k - 3] * wk / k
        acc += term
        if abs(term) < 1e-18 * max(abs(acc), 1e-300):
            break
    return acc


def _log_g1_asymptotic(z):
    # valid for |z| large, |arg z| < pi
    lz = np.log(z)
    acc = 0.5 * z * z * lz - 0.75 * z * z + 0.5 * z * LOG_2PI - lz / 12.0 + _ZETA_PRIME_M1
    zinv2 = 1.0 / (z * z)
    p = zinv2
    for coef in _BARNES_ASYM:
        acc += coef * p
        p = p * zinv2
    return acc


def log_barnes_g(z):
    """ln G(z) for complex z away from the nonpositive integers.

    Uses the Taylor series of ln G(1+w) for |w| <= 1/2 and otherwise the
    large-argument expansion after shifting Re z up with G(z+1) = Gamma(z) G(z).
    The branch of the imaginary part is not normalised.
    """
    w = complex(z) - 1.0
    if abs(w) <= _BARNES_TAYLOR_RADIUS:
        return complex(_log_g1_taylor(w))
    if _is_pole(z):
        raise PoleError(f"log_barnes_g: zero of G at {z!r}")
    n_shift = max(0, int(math.ceil(_BARNES_SHIFT - w.real)))
    acc = _log_g1_asymptotic(w + n_shift)
    if n_shift:
        acc -= np.sum(_lgamma(w + np.arange(1, n_shift + 1)))
    return complex(acc)


def barnes_g_log_pair(c):
    """ln[G(1 + ic) G(1 - ic)] for real c (a real number)."""
    c = float(c)
    if abs(c) > 10.0:
        raise DomainError(f"barnes_g_log_pair: |c| = {abs(c)} exceeds 10")
    if c == 0.0:
        return 0.0
    # G(conj z) = conj G(z): the pair is twice the real part
    return 2.0 * log_barnes_g(1.0 + 1j * c).real


def _kummer_asymptotic(a, b, z):
    """Two-branch large-|z| expansion, optimally truncated.

    Returns ``(values, error_estimate)`` for the 1-d array ``z``.
    """
    g1 = complex(rgamma(a)) * complex(gamma(b))
    g2 = complex(rgamma(b - a)) * complex(gamma(b))
    s1, e1 = _asym_sum(b - a, 1.0 - a, z)
    s2, e2 = _asym_sum(a, a - b + 1.0, -z)
    lz = np.log(z)
    lmz = np.log(-z)
    p1 = g1 * np.exp(z + (a - b) * lz)
    p2 = g2 * np.exp(-a * lmz)
    val = p1 * s1 + p2 * s2
    err = np.abs(p1) * e1 + np.abs(p2) * e2
    return val, err


def _asym_sum(p, q, x):
    """sum_k (p)_k (q)_k / (k! x^k), truncated before the terms grow."""
    n = x.shape[0]
    total = np.ones(n, dtype=complex)
    term = np.ones(n, dtype=complex)
    last = np.ones(n)
    active = np.ones(n, dtype=bool)
    err = np.zeros(n)
    for k in range(300):
        nxt = term * (p + k) * (q + k) / ((k + 1) * x)
        mag = np.abs(nxt)
        grow = active & (mag >= last)
        err[grow] = last[grow]
        active &= ~grow
        total = np.where(active, total + nxt, total)
        tiny = active & (mag < 1e-17 * np.abs(total))
        err[tiny] = mag[tiny]
        active &= ~tiny
        if not active.any():
            break
        term = nxt
        last = np.where(active, mag, last)
    err[active] = last[active]
    return total, err


def kummer_m(a, b, z):
    """Kummer's confluent hypergeometric function M(a, b, z) = 1F1(a; b; z).

    ``z`` may be a scalar or an array with |z| <= 120.  The double-double
    power series is used for |z| <= 30 and the two-term asymptotic expansion
    beyond; for Re z < 0 Kummer's transformation M(a,b,z) = e^z M(b-a,b,-z)
    is applied first.
    """
    a = complex(a)
    b = complex(b)
    if _is_pole(b):
        raise PoleError(f"kummer_m: b = {b} is a nonpositive integer")
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    if zz.size and np.max(np.abs(zz)) > _MAX_Z:
        raise DomainError(f"kummer_m: |z| must not exceed {_MAX_Z}")
    out = np.empty_like(zz)
    flip = zz.real < 0.0
    for sel, aa, sign in ((~flip, a, 1.0), (flip, b - a, -1.0)):
        if not sel.any():
            continue
        w = sign * zz[sel]
        vals = np.empty_like(w)
        near = np.abs(w) <= _SERIES_RADIUS
        if near.any():
            v, n_terms = series_batch(aa, b, w[near])
            if np.any(n_terms >= _SERIES_CAP):
                raise ConvergenceError("kummer_m: power series did not converge")
            vals[near] = v
        if (~near).any():
            far = np.flatnonzero(~near)
            v, err = _kummer_asymptotic(aa, b, w[far])
            miss = err > _ASYM_TARGET * np.abs(v)
            # just past the crossover the double-double series is still accurate
            rescue = miss & (np.abs(w[far]) <= _SERIES_RESCUE)
            if rescue.any():
                vs, n_terms = series_batch(aa, b, w[far[rescue]])
                if np.any(n_terms >= _SERIES_CAP):
                    raise ConvergenceError("kummer_m: power series did not converge")
                v[rescue] = vs
            if np.any(miss & ~rescue):
                raise ConvergenceError("kummer_m: asymptotic expansion misses the 1e-10 target")
            vals[far] = v
        out[sel] = vals * np.exp(zz[sel]) if sign < 0 else vals
    if scalar:
        return complex(out[0])
    return out.reshape(np.shape(z))


def kummer_m_deriv(a, b, z):
    """d/dz M(a, b, z) = (a / b) M(a + 1, b + 1, z)."""
    a = complex(a)
    b = complex(b)
    if _is_pole(b):
        raise PoleError(f"kummer_m_deriv: b = {b} is a nonpositive integer")
    return (a / b) * kummer_m(a + 1.0, b + 1.0, z)


def bessel_j01(k, x):
    """Bessel J_0 or J_1 at real x, |x| <= 200."""
    if k not in (0, 1):
        raise DomainError("bessel_j01: order must be 0 or 1")
    if np.any(np.abs(x) > 200.0):
        raise DomainError("bessel_j01: |x| must not exceed 200")
    return _sp.j0(x) if k == 0 else _sp.j1(x)
