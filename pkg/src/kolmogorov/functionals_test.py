"""
Tests for the Lyapunov and quadratic functionals
"""

import numpy as np
import pytest

from src.core.exceptions import SpectralDomainError
from src.spectral import SpectralField, Truncation, random_field, l2_inner, sobolev_norm
from .functionals import (
    LyapunovFunctional,
    QuadraticFunctional,
    CombinedFunctional,
    lyapunov_value,
    lyapunov_gradient,
    lyapunov_hessian_quadform,
)


@pytest.fixture
def truncation():
    return Truncation(3)


def sample_pair(truncation: Truncation, seed: int):
    rng = np.random.default_rng(seed)
    x = random_field(truncation, lambda k: 0.4 * k ** -2.5, rng)
    h = random_field(truncation, lambda k: k ** -2.5, rng)
    return x, h * (1.0 / sobolev_norm(h, 0.0))


class TestLyapunovFunctional:
    """Test value and derivatives of (1 + ||x||_p^2)^{-eps_p}"""

    def test_zero_field(self, truncation):
        lf = LyapunovFunctional(2)
        zero = SpectralField.zeros(truncation)
        assert lyapunov_value(zero, lf) == 1.0
        assert np.all(lyapunov_gradient(zero, lf).coefficients == 0)

    def test_exponents(self):
        assert LyapunovFunctional(1).eps == 1.0
        assert LyapunovFunctional(2).eps == pytest.approx(1.0 / 3.0)
        with pytest.raises(SpectralDomainError):
            LyapunovFunctional(0)

    def test_value_in_unit_interval(self, truncation):
        x, _ = sample_pair(truncation, 0)
        assert 0.0 < lyapunov_value(x * 10.0, LyapunovFunctional(1)) < 1.0

    @pytest.mark.parametrize("p", [1, 2])
    def test_gradient_matches_finite_differences(self, truncation, p):
        lf = LyapunovFunctional(p)
        for seed in range(5):
            x, h = sample_pair(truncation, seed)
            step = 1e-5
            numeric = (lf.value(x + h * step) - lf.value(x - h * step)) / (2.0 * step)
            assert l2_inner(lyapunov_gradient(x, lf), h) == pytest.approx(numeric, rel=1e-6)

    @pytest.mark.parametrize("p", [1, 2])
    def test_hessian_matches_finite_differences(self, truncation, p):
        lf = LyapunovFunctional(p)
        for seed in range(5):
            x, h = sample_pair(truncation, 10 + seed)
            step = 1e-3
            numeric = (lf.value(x + h * step) - 2.0 * lf.value(x) + lf.value(x - h * step)) / step ** 2
            assert lyapunov_hessian_quadform(x, lf, h) == pytest.approx(numeric, rel=1e-6)


class TestOtherFunctionals:
    """Test the quadratic and combined functionals"""

    def test_quadratic(self, truncation):
        x, h = sample_pair(truncation, 3)
        f = QuadraticFunctional()
        assert f.value(x) == pytest.approx(sobolev_norm(x, 0.0) ** 2)
        assert l2_inner(f.gradient(x), h) == pytest.approx(2.0 * l2_inner(x, h))
        assert f.hessian_quadform(x, h) == pytest.approx(2.0)

    def test_combination_is_linear(self, truncation):
        x, h = sample_pair(truncation, 4)
        lf, quadratic = LyapunovFunctional(1), QuadraticFunctional()
        combined = CombinedFunctional([(2.0, lf), (-0.5, quadratic)])
        assert combined.value(x) == pytest.approx(2.0 * lf.value(x) - 0.5 * quadratic.value(x))
        assert l2_inner(combined.gradient(x), h) == pytest.approx(
            2.0 * l2_inner(lf.gradient(x), h) - 0.5 * l2_inner(quadratic.gradient(x), h)
        )
        assert combined.hessian_quadform(x, h) == pytest.approx(
            2.0 * lf.hessian_quadform(x, h) - 0.5 * quadratic.hessian_quadform(x, h)
        )

    def test_empty_combination_rejected(self):
        with pytest.raises(SpectralDomainError):
            CombinedFunctional([])
