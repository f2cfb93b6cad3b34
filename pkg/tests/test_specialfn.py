"""Tests for Laguerre polynomials and the radial normalization."""

import math

import numpy as np
import pytest
from scipy import integrate, special

from src.physics.specialfn import (
    laguerre,
    log_gamma,
    log_normalization_constant,
    normalization_constant,
)
from src.utils.error_handler import ComputeError, DomainError


class TestLaguerre:
    """Test the three-term recurrence."""

    def test_low_degrees(self):
        """Test closed forms of L_0, L_1 and L_2."""
        x, alpha = 0.8, 2.5

        assert laguerre(0, alpha, x) == 1.0
        assert laguerre(1, alpha, x) == pytest.approx(1.0 + alpha - x)
        assert laguerre(2, alpha, x) == pytest.approx(
            (x * x - 2 * (alpha + 2) * x + (alpha + 1) * (alpha + 2)) / 2
        )

    def test_against_scipy(self):
        """Test agreement with scipy's evaluation."""
        x = np.linspace(0.0, 40.0, 81)
        for n in range(11):
            for alpha in (0.0, 1.0, 3.7, 51.2):
                expected = special.eval_genlaguerre(n, alpha, x)
                scale = np.max(np.abs(expected))
                assert np.allclose(
                    laguerre(n, alpha, x), expected, rtol=1e-9, atol=1e-12 * scale
                )

    @pytest.mark.parametrize("alpha", [0.0, 1.5, 4.732])
    def test_orthogonality(self, alpha: float):
        """Test the weighted inner products against delta_mn Gamma(n+alpha+1)/n!."""

        def integrand(x: float, m: int, n: int) -> float:
            weight = x**alpha * math.exp(-x)
            return weight * laguerre(m, alpha, x) * laguerre(n, alpha, x)

        for m in range(5):
            for n in range(m, 5):
                value, _ = integrate.quad(
                    integrand, 0.0, np.inf, args=(m, n), epsabs=1e-11, limit=200
                )
                norm = math.exp(math.lgamma(n + alpha + 1) - math.lgamma(n + 1))
                expected = norm if m == n else 0.0
                assert value == pytest.approx(expected, abs=1e-8 * norm)

    def test_value_at_origin(self):
        """Test L_n^alpha(0) = binom(n + alpha, n)."""
        n, alpha = 5, 7.25
        expected = special.binom(n + alpha, n)
        assert laguerre(n, alpha, 0.0) == pytest.approx(expected, rel=1e-13)

    def test_scalar_and_array(self):
        """Test output shape follows the input."""
        assert isinstance(laguerre(3, 1.0, 0.5), float)
        assert laguerre(3, 1.0, np.zeros(4)).shape == (4,)

    def test_invalid_arguments(self):
        """Test degree and order validation."""
        with pytest.raises(DomainError, match="degree"):
            laguerre(-1, 0.0, 1.0)
        with pytest.raises(DomainError, match="order"):
            laguerre(2, -1.0, 1.0)
        with pytest.raises(DomainError, match="finite"):
            laguerre(2, 0.0, float("inf"))


class TestNormalization:
    """Test C_n for R = C r^Lambda e^{-kappa r} L_n(2 kappa r)."""

    def test_hydrogen_ground(self):
        """Test C = 2 for Lambda = 0, kappa = 1."""
        assert normalization_constant(0, 0.0, 1.0) == pytest.approx(2.0, rel=1e-14)

    @pytest.mark.parametrize("n", range(6))
    def test_unit_norm(self, n: int):
        """Test int |R|^2 r^2 dr = 1 by adaptive quadrature."""
        lam, kappa = 1.3, 0.7
        c = normalization_constant(n, lam, kappa)

        def density(r: float) -> float:
            poly = laguerre(n, 2 * lam + 1, 2 * kappa * r)
            value = c * r**lam * math.exp(-kappa * r) * poly
            return value * value * r * r

        total, _ = integrate.quad(
            density, 0.0, np.inf, limit=200, epsabs=1e-12, epsrel=1e-12
        )
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_large_lambda_in_log_space(self):
        """Test molecular Lambda stays finite in log form."""
        log_c = log_normalization_constant(5, 500.0, 3.0)
        assert math.isfinite(log_c)

    def test_overflow_reported(self):
        """Test an unrepresentable C_n is a compute error."""
        with pytest.raises(ComputeError, match="overflows"):
            normalization_constant(0, 500.0, 1e3)

    def test_invalid_arguments(self):
        """Test parameter validation."""
        with pytest.raises(DomainError):
            log_normalization_constant(0, -0.5, 1.0)
        with pytest.raises(DomainError):
            log_normalization_constant(0, 0.5, 0.0)
        with pytest.raises(DomainError):
            log_gamma(0.0)

    def test_log_gamma(self):
        """Test log_gamma against factorials."""
        assert log_gamma(6.0) == pytest.approx(math.log(120.0), rel=1e-14)
