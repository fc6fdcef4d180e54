"""
Tests for the dealiased nonlinear term and the Galerkin drift
"""

import numpy as np
import pytest

from src.core.models import ForcingFamily
from src.spectral import (
    Truncation,
    SpectralField,
    sobolev_norm,
    l2_inner,
    divergence_max,
    random_field,
    apply_A_power,
)
from src.oracle import bilinear_B_direct
from .forcing import ForcingSpec
from .nonlinear import bilinear_B, galerkin_drift


def relative_difference(a: SpectralField, b: SpectralField) -> float:
    scale = max(float(np.max(np.abs(b.coefficients))), 1e-300)
    return float(np.max(np.abs(a.coefficients - b.coefficients))) / scale


class TestBilinearB:
    """Test B(u) = P_N pi((u . grad) u)"""

    def test_zero_field(self):
        """Test B(0) = 0"""
        assert np.all(bilinear_B(SpectralField.zeros(Truncation(3))).coefficients == 0)

    def test_single_mode_vanishes(self):
        """Test u = 2cos(k.xi)a with a orthogonal to k has no advection"""
        u = SpectralField.from_modes(Truncation(4), {(1, 2, 0): [2.0, -1.0, 0.0]})
        assert np.max(np.abs(bilinear_B(u).coefficients)) < 1e-13

    def test_two_mode_field_matches_direct_convolution(self):
        """Test k_max=4 two-mode field against the direct triad sum"""
        truncation = Truncation(4)
        u = SpectralField.from_modes(truncation, {
            (1, 0, 0): [0.0, 1.0, 1.0j],
            (0, 1, 1): [1.0, 1.0j, -1.0j],
        })
        pseudo = bilinear_B(u)
        direct = bilinear_B_direct(u)
        assert np.max(np.abs(direct.coefficients)) > 0.1
        assert relative_difference(pseudo, direct) < 1e-10

    @pytest.mark.parametrize("seed", range(5))
    def test_random_fields_match_direct_convolution(self, seed):
        """Test random k_max=6 fields agree with the direct triad sum"""
        u = random_field(Truncation(6), lambda r: r ** -1.0, np.random.default_rng(seed))
        assert relative_difference(bilinear_B(u), bilinear_B_direct(u)) < 1e-10

    @pytest.mark.parametrize("seed", range(10))
    def test_energy_orthogonality(self, seed):
        """Test <B(u), u> = 0 up to 1e-10 ||u||_0 ||u||_1^2"""
        u = random_field(Truncation(6), lambda r: r ** -0.5, np.random.default_rng(100 + seed))
        bound = 1e-10 * sobolev_norm(u, 0.0) * sobolev_norm(u, 1.0) ** 2
        assert abs(l2_inner(bilinear_B(u), u)) <= bound

    def test_output_is_divergence_free(self):
        """Test the projection is applied last"""
        u = random_field(Truncation(5), lambda r: np.ones_like(r), np.random.default_rng(7))
        b = bilinear_B(u)
        assert divergence_max(b) <= 1e-12 * max(1.0, float(np.max(np.abs(b.coefficients))))

    def test_galerkin_consistency(self):
        """Test modes of a low-band field see the same triads in a larger truncation"""
        small = Truncation(2)
        u_small = random_field(small, lambda r: r ** -1.0, np.random.default_rng(11))
        large = Truncation(6)
        u_large = SpectralField.from_modes(
            large, {tuple(k): c for k, c in zip(small.modes, u_small.coefficients)}, project=True
        )
        b_small = bilinear_B(u_small)
        b_large = bilinear_B(u_large)
        for k, value in zip(small.modes, b_small.coefficients):
            assert np.allclose(b_large.coeff(k), value, rtol=1e-10, atol=1e-13)

    def test_deterministic(self):
        """Test repeated evaluation is bitwise identical"""
        u = random_field(Truncation(4), lambda r: r ** -1.0, np.random.default_rng(3))
        assert np.array_equal(bilinear_B(u).coefficients, bilinear_B(u).coefficients)


class TestGalerkinDrift:
    """Test -nu A u - B(u) + g"""

    def make_spec(self, truncation, g_field=None):
        return ForcingSpec(ForcingFamily.POWER_LAW, 1.0, 2.0, truncation, g_field=g_field)

    def test_zero_state_zero_forcing(self):
        """Test u=0, g=0 gives zero drift"""
        truncation = Truncation(3)
        drift = galerkin_drift(SpectralField.zeros(truncation), self.make_spec(truncation), 0.5)
        assert np.all(drift.coefficients == 0)

    def test_single_mode_stokes_drift(self):
        """Test single-mode data decays at -nu |k|^2 per mode"""
        truncation = Truncation(3)
        u = SpectralField.from_modes(truncation, {(1, 1, 0): [1.0, -1.0, 0.5]})
        drift = galerkin_drift(u, self.make_spec(truncation), 0.3)
        assert np.allclose(drift.coefficients, -0.3 * 2.0 * u.coefficients, atol=1e-13)

    def test_sum_of_parts(self):
        """Test the drift equals independently computed parts to 1e-14"""
        truncation = Truncation(4)
        rng = np.random.default_rng(5)
        u = random_field(truncation, lambda r: r ** -1.0, rng)
        g = random_field(truncation, lambda r: r ** -3.0, rng)
        nu = 0.4
        drift = galerkin_drift(u, self.make_spec(truncation, g), nu)
        expected = -nu * apply_A_power(u, 1.0) - bilinear_B(u) + g
        assert np.max(np.abs(drift.coefficients - expected.coefficients)) <= \
            1e-14 * max(1.0, float(np.max(np.abs(expected.coefficients))))

    def test_linear_drift(self):
        """Test nonlinear=False drops B"""
        truncation = Truncation(4)
        u = random_field(truncation, lambda r: r ** -1.0, np.random.default_rng(9))
        drift = galerkin_drift(u, self.make_spec(truncation), 0.5, nonlinear=False)
        assert np.allclose(drift.coefficients, -0.5 * apply_A_power(u, 1.0).coefficients, rtol=1e-15, atol=1e-15)
