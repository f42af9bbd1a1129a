import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chgdet.errors import ConvergenceError, DomainError
from chgdet.fredholm import (
    build_operator,
    eigenvalues,
    gauss_jacobi,
    gauss_jacobi_grid,
    initial_nodes,
    log_det,
    log_det_converged,
    log_det_lu,
)
from chgdet.kernel import KernelParams

# 30-node Gauss-Legendre Nystrom of the sine kernel in 40-digit arithmetic,
# identical to 20 digits with 36 nodes
SINE_S1_G05 = -0.36980240402659642551

P0 = KernelParams(0.0, 0.0)
P1 = KernelParams(0.5, 0.3)
PN = KernelParams(-0.3, 0.5)


def _jacobi_moment(k, b):
    # int_{-1}^{1} t^k (1+t)^b dt via t = u - 1, in 120-digit arithmetic (alternating sum)
    with mpmath.workdps(120):
        b = mpmath.mpf(b)
        return mpmath.fsum(
            mpmath.binomial(k, j) * (-1) ** (k - j) * mpmath.mpf(2) ** (j + b + 1) / (j + b + 1) for j in range(k + 1)
        )


class TestGaussJacobi:
    @pytest.mark.parametrize("b", [-0.6, -0.2, 0.7, 3.0])
    def test_moments(self, b):
        t, w = gauss_jacobi(64, 0.0, b)
        for k in (0, 1, 5, 40, 127):
            exact = _jacobi_moment(k, b)
            assert np.sum(w * t**k) == pytest.approx(float(exact), rel=1e-12, abs=1e-14)

    def test_nodes_sorted_inside(self):
        t, w = gauss_jacobi(300, 0.0, -0.6)
        assert np.all(np.diff(t) > 0) and -1 < t[0] and t[-1] < 1 and np.all(w > 0)

    def test_grid_invariants(self):
        g = gauss_jacobi_grid(3.0, 64, 0.0)
        assert g.weights.sum() == pytest.approx(6.0, rel=1e-12)
        assert np.all(np.diff(g.nodes) > 0)
        assert np.array_equal(g.nodes, -g.nodes[::-1])
        for a in (-0.3, 0.5):
            g = gauss_jacobi_grid(3.0, 64, a)
            # the rule is exact for |x|^(2 alpha); plain weights only approximate 2s
            assert g.jacobi_weights.sum() == pytest.approx(2 * 3.0 ** (2 * a + 1) / (2 * a + 1), rel=1e-12)
            assert np.all(g.nodes != 0.0)

    @pytest.mark.parametrize("n", [6, 9, 8194])
    def test_size_limits(self, n):
        with pytest.raises(DomainError):
            gauss_jacobi_grid(1.0, n)


class TestOperator:
    def test_trace_sine(self):
        op = build_operator(P0, 1.0, 64)
        assert op.trace == pytest.approx(2 / math.pi, abs=1e-10)

    def test_symmetric(self):
        op = build_operator(P1, 2.0, 128)
        assert np.array_equal(op.matrix, op.matrix.T)

    def test_largest_eigenvalue(self):
        lam = eigenvalues(build_operator(P1, 2.0, 128))
        assert 0 < lam[0] < 1
        assert np.all(np.diff(lam) <= 0)

    @pytest.mark.parametrize("p", [P0, P1, PN])
    def test_spectrum_in_unit_interval(self, p):
        lam = eigenvalues(build_operator(p, 8.0, 256))
        assert lam.min() >= -1e-8 and lam.max() <= 1 + 1e-8

    def test_small_s_rank_one(self):
        lam = eigenvalues(build_operator(P0, 0.01, 64))
        s = 0.01
        assert lam[0] == pytest.approx(2 * s / math.pi, rel=1e-4)
        # next eigenvalue comes from the -(x - y)^2 / (6 pi) term of the kernel
        assert lam[1] == pytest.approx(2 * s**3 / (9 * math.pi), rel=1e-3)
        assert abs(lam[2]) < 1e-10

    def test_trace_equals_eigensum(self):
        op = build_operator(P1, 4.0, 128)
        assert eigenvalues(op).sum() == pytest.approx(op.trace, abs=1e-10)

    @pytest.mark.parametrize("p", [P0, P1, PN])
    def test_eigenvalue_refinement(self, p):
        a = eigenvalues(build_operator(p, 10.0, 256))[:5]
        b = eigenvalues(build_operator(p, 10.0, 512))[:5]
        assert np.max(np.abs(a - b)) <= 1e-9


class TestLogDet:
    def test_zero_gamma(self):
        assert log_det(build_operator(P1, 1.0, 32), 0.0) == 0.0

    def test_golden_sine(self):
        assert log_det(build_operator(P0, 1.0, 64), 0.5) == pytest.approx(SINE_S1_G05, abs=1e-13)

    def test_small_s(self):
        # -gamma tr K - gamma^2 tr K^2 / 2 with tr K^2 ~ (2s/pi)^2
        t = 0.02 / math.pi
        val = log_det(build_operator(P0, 0.01, 64), 0.5)
        assert val == pytest.approx(-0.5 * t, abs=1e-5)
        assert val == pytest.approx(-0.5 * t - 0.125 * t * t, abs=1e-7)

    @pytest.mark.parametrize("p", [P0, P1, PN])
    def test_lu_cross_check(self, p):
        op = build_operator(p, 6.0, 192)
        assert log_det(op, 0.7) == pytest.approx(log_det_lu(op, 0.7), abs=1e-10)

    def test_product_form(self):
        op = build_operator(P1, 3.0, 96)
        lam = eigenvalues(op)
        assert math.log(np.prod(1 - 0.4 * lam)) == pytest.approx(log_det(op, 0.4), abs=1e-10)

    def test_thinning_bilinearity(self):
        op = build_operator(P1, 3.0, 96)
        scaled = np.linalg.eigvalsh(0.6 * op.matrix)
        assert log_det(op, 0.6) == pytest.approx(np.sum(np.log1p(-scaled)), abs=1e-13)

    @given(st.floats(0.01, 0.98), st.floats(0.01, 0.98))
    def test_monotone_in_gamma(self, g1, g2):
        op = _OP
        lo, hi = sorted((g1, g2))
        if hi - lo < 1e-9:
            return
        assert log_det(op, hi) < log_det(op, lo) < 0

    def test_bad_gamma(self):
        op = build_operator(P0, 1.0, 16)
        for g in (-0.1, 1.0):
            with pytest.raises(DomainError):
                log_det(op, g)


_OP = build_operator(P1, 2.0, 64)


class TestConverged:
    def test_gamma_zero(self):
        r = log_det_converged(P1, 3.0, 0.0)
        assert (r.value, r.n_used) == (0.0, 64)

    def test_initial_nodes(self):
        assert initial_nodes(1.0) == 64
        assert initial_nodes(20.3) == 164

    def test_spectral_decay(self):
        vals = [log_det(build_operator(P0, 5.0, n), 0.5) for n in (16, 32, 64)]
        d1, d2 = abs(vals[1] - vals[0]), abs(vals[2] - vals[1])
        assert d2 / d1 < 0.1

    @pytest.mark.parametrize("p", [P0, P1, PN])
    def test_restart_independence(self, p):
        a = log_det_converged(p, 5.0, 0.5, tol=1e-10)
        b = log_det_converged(p, 5.0, 0.5, tol=1e-10, n_start=96)
        assert abs(a.value - b.value) <= 2e-10

    def test_tol_floor(self):
        with pytest.raises(DomainError):
            log_det_converged(P0, 1.0, 0.5, tol=1e-13)

    def test_nonconvergence(self, monkeypatch):
        import chgdet.fredholm as fr

        monkeypatch.setattr(fr, "N_MAX", 128)
        with pytest.raises(ConvergenceError):
            fr.log_det_converged(P0, 14.0, 0.5, tol=1e-12)
