import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chgdet.errors import ConvergenceError, DiscretizationError, DomainError
from chgdet.fredholm import log_det_converged
from chgdet.kernel import KernelParams
from chgdet.toeplitz import SymbolCoeffs, SymbolSpec, fourier_coeffs, log_toeplitz_det, scaling_limit_check, symbol

# 40-digit determinant of the closed-form coefficients sinh(pi b)/(pi (b + ik)), frozen
LOG_D32_B03 = 0.44924182662198074163


class TestCoeffs:
    def test_identity_symbol(self):
        c = fourier_coeffs(SymbolSpec(0.0), 16)
        assert c.coeffs[0] == pytest.approx(1.0, abs=1e-14)
        assert np.max(np.abs(c.coeffs[1:])) < 1e-14

    @pytest.mark.parametrize("b", [-1.2, 0.3, 2.0])
    def test_pure_jump_closed_form(self, b):
        k = np.arange(40)
        exact = math.sinh(math.pi * b) / (math.pi * (b + 1j * k))
        c = fourier_coeffs(SymbolSpec(0.0, b), 40)
        assert np.max(np.abs(c.coeffs - exact)) <= 1e-13

    def test_root_singularity_closed_form(self):
        # |e^{i theta} - 1| has c_k = -4 / (pi (4 k^2 - 1))
        k = np.arange(200)
        c = fourier_coeffs(SymbolSpec(0.5), 200)
        assert np.max(np.abs(c.coeffs - (-4 / (math.pi * (4 * k * k - 1))))) <= 1e-13

    def test_hermitian(self):
        c = fourier_coeffs(SymbolSpec(0.5, 0.3, 0.5, 0.1), 64)
        full = c.full()
        assert np.max(np.abs(full - np.conj(full[::-1]))) <= 1e-12
        assert c[-3] == np.conj(c[3])

    @pytest.mark.parametrize("alpha", [0.5, 1.3])
    def test_decay(self, alpha):
        c = fourier_coeffs(SymbolSpec(alpha, 0.3), 257)
        for k in (32, 64, 128):
            assert abs(c.coeffs[2 * k]) / abs(c.coeffs[k]) <= 0.75

    def test_arc_integral(self):
        # c_0 of f alone: 1 - gamma t / pi
        c = fourier_coeffs(SymbolSpec(0.0, 0.0, 0.4, 0.7), 4)
        assert c.coeffs[0].real == pytest.approx(1 - 0.4 * 0.7 / math.pi, abs=1e-14)

    def test_symbol_positive(self):
        th = np.linspace(1e-6, 2 * math.pi - 1e-6, 1001)
        assert np.all(symbol(SymbolSpec(-0.3, 1.5, 0.9, 0.2), th) > 0)

    def test_nonconvergence(self):
        with pytest.raises(ConvergenceError):
            fourier_coeffs(SymbolSpec(-0.45, 0.0), 64, tol=1e-30)

    def test_domain(self):
        with pytest.raises(DomainError):
            SymbolSpec(0.0, arc_t=math.pi)
        with pytest.raises(DomainError):
            fourier_coeffs(SymbolSpec(0.0), 2000)


class TestDet:
    def test_identity(self):
        c = fourier_coeffs(SymbolSpec(0.0), 50)
        for n in (1, 10, 50):
            assert log_toeplitz_det(c, n) == pytest.approx(0.0, abs=1e-12)

    def test_one_by_one(self):
        c = fourier_coeffs(SymbolSpec(0.5, 0.3, 0.5, 0.3), 8)
        assert log_toeplitz_det(c, 1) == pytest.approx(math.log(c.coeffs[0].real))

    def test_golden(self):
        c = fourier_coeffs(SymbolSpec(0.0, 0.3), 32)
        assert log_toeplitz_det(c) == pytest.approx(LOG_D32_B03, abs=1e-12)

    def test_negative_symbol_detected(self):
        bad = SymbolCoeffs(3, np.array([1.0, 2.0, 0.0], dtype=complex))
        with pytest.raises(DiscretizationError):
            log_toeplitz_det(bad)

    @given(st.floats(-0.4, 2.0), st.floats(-1.5, 1.5), st.floats(0.0, 0.95), st.floats(0.0, 3.0))
    def test_finite(self, a, b, g, t):
        c = fourier_coeffs(SymbolSpec(a, b, g, t), 24)
        assert math.isfinite(log_toeplitz_det(c))


class TestScalingLimit:
    def test_gamma_zero(self):
        assert scaling_limit_check(KernelParams(0.5, 0.3, 0.0), 1.0, 64) == 0.0

    def test_sine_convergence(self):
        p = KernelParams(0.0, 0.0, 0.5)
        q = log_det_converged(p, 1.0, 0.5).value
        err = [abs(scaling_limit_check(p, 1.0, n) - q) for n in (64, 128, 256)]
        assert err[0] > err[1] > err[2]
        assert err[2] <= 1e-2

    def test_general_parameters(self):
        p = KernelParams(0.5, 0.3, 0.5)
        q = log_det_converged(p, 1.0, 0.5).value
        assert abs(scaling_limit_check(p, 1.0, 256) - q) <= 1e-2

    def test_domain(self):
        with pytest.raises(DomainError):
            scaling_limit_check(KernelParams(0, 0, 0.5), 10.0, 4)
