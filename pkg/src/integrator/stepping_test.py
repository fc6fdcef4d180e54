"""
Tests for SimConfig and the single-step schemes
"""

import logging
import math

import numpy as np
import pytest

from src.core.exceptions import BlowUpError, ConfigurationError
from src.core.models import ForcingFamily, IntegrationScheme
from src.dynamics import ForcingSpec
from src.spectral import Truncation, SpectralField, sobolev_norm, divergence_max
from .stepping import SimConfig, TrajectoryState, make_stream, initial_state, step, draw_noise


def make_config(**overrides) -> SimConfig:
    params = dict(nu=0.5, truncation=Truncation(3), dt=0.01, t_sample=1.0, t_burn=0.0)
    params.update(overrides)
    return SimConfig(**params)


def make_spec(truncation: Truncation, amplitude: float = 1.0) -> ForcingSpec:
    return ForcingSpec(ForcingFamily.POWER_LAW, amplitude, 2.0, truncation)


class TestSimConfig:
    """Test run configuration validation and identity"""

    def test_default_burn_in(self):
        """Test t_burn defaults to 10 / nu"""
        cfg = SimConfig(nu=0.25, truncation=Truncation(2), dt=0.1, t_sample=1.0)
        assert cfg.t_burn == 40.0
        assert cfg.burn_steps == 400

    @pytest.mark.parametrize("key, value", [
        ("nu", 1.5), ("nu", 0.0), ("dt", 0.0), ("t_sample", -1.0), ("sample_stride", 0), ("seed", -1)
    ])
    def test_invalid_values(self, key, value):
        with pytest.raises(ConfigurationError):
            make_config(**{key: value})

    def test_config_hash_tracks_dynamics(self):
        """Test the hash changes with dt but not with the seed"""
        base = make_config()
        assert base.config_hash == make_config(seed=99).config_hash
        assert base.config_hash != make_config(dt=0.02).config_hash
        assert base.config_hash != make_config(nonlinear=False).config_hash
        assert 0 <= base.config_hash < 2 ** 64

    def test_round_trip_dict(self):
        cfg = make_config(scheme=IntegrationScheme.SEMI_IMPLICIT, seed=7, sample_stride=3)
        assert SimConfig.from_dict(cfg.to_dict()) == cfg

    def test_semi_implicit_stability_warning(self, caplog):
        """Test stiff semi-implicit settings are logged"""
        with caplog.at_level(logging.WARNING):
            make_config(scheme=IntegrationScheme.SEMI_IMPLICIT, dt=1.0, nu=1.0)
        assert "semi-implicit budget" in caplog.text


class TestStreams:
    """Test the splittable random streams"""

    def test_same_seed_same_stream(self):
        assert np.array_equal(make_stream(3, 1).standard_normal(10), make_stream(3, 1).standard_normal(10))

    def test_members_differ(self):
        assert not np.array_equal(make_stream(3, 0).standard_normal(10), make_stream(3, 1).standard_normal(10))

    def test_noise_is_solenoidal(self):
        truncation = Truncation(4)
        noise = draw_noise(truncation, make_stream(0))
        assert np.max(np.abs(np.einsum('mi,mi->m', truncation.modes.astype(float), noise))) < 1e-13


class TestStep:
    """Test both time discretizations"""

    def single_mode(self, truncation: Truncation) -> SpectralField:
        return SpectralField.from_modes(truncation, {(1, 1, 0): [1.0, -1.0, 0.5]})

    def test_exact_stokes_decay(self):
        """Test sigma=0 single-mode data decays as exp(-nu |k|^2 t) under exp_euler"""
        cfg = make_config()
        state = initial_state(cfg, field=self.single_mode(cfg.truncation))
        start = sobolev_norm(state.field, 0.0)
        for _ in range(100):
            state = step(state, cfg, make_spec(cfg.truncation, amplitude=0.0))
        assert math.isclose(state.time, 1.0, rel_tol=1e-12)
        expected = math.exp(-0.5 * 2.0 * state.time) * start
        assert math.isclose(sobolev_norm(state.field, 0.0), expected, rel_tol=1e-12)

    def test_semi_implicit_decay(self):
        """Test sigma=0 single-mode data is divided by 1 + nu |k|^2 dt each step"""
        cfg = make_config(scheme=IntegrationScheme.SEMI_IMPLICIT)
        state = initial_state(cfg, field=self.single_mode(cfg.truncation))
        start = sobolev_norm(state.field, 0.0)
        for _ in range(20):
            state = step(state, cfg, make_spec(cfg.truncation, amplitude=0.0))
        assert math.isclose(sobolev_norm(state.field, 0.0), start / (1.0 + 0.5 * 2.0 * 0.01) ** 20, rel_tol=1e-12)

    def test_zero_stays_zero(self):
        cfg = make_config()
        state = initial_state(cfg)
        for _ in range(10):
            state = step(state, cfg, make_spec(cfg.truncation, amplitude=0.0))
        assert np.all(state.field.coefficients == 0)

    @pytest.mark.parametrize("scheme", list(IntegrationScheme))
    def test_invariants_preserved(self, scheme):
        """Test noisy nonlinear steps stay divergence-free"""
        cfg = make_config(scheme=scheme, truncation=Truncation(4))
        state = initial_state(cfg)
        for _ in range(50):
            state = step(state, cfg, make_spec(cfg.truncation, amplitude=2.0))
        scale = max(1.0, float(np.max(np.abs(state.field.coefficients))))
        assert divergence_max(state.field) < 1e-13 * scale
        assert state.steps == 50

    def test_deterministic(self):
        cfg = make_config()
        spec = make_spec(cfg.truncation)
        a, b = initial_state(cfg), initial_state(cfg)
        for _ in range(5):
            a, b = step(a, cfg, spec), step(b, cfg, spec)
        assert np.array_equal(a.field.coefficients, b.field.coefficients)

    def test_blow_up_detected(self):
        """Test non-finite coefficients raise with time and snapshot"""
        cfg = make_config()
        spec = make_spec(cfg.truncation, amplitude=float('inf'))
        with pytest.raises(BlowUpError) as excinfo:
            step(initial_state(cfg), cfg, spec)
        assert math.isclose(excinfo.value.time, cfg.dt)
        assert excinfo.value.norm_snapshot['energy'] == 0.0

    def test_noise_gain_scales_increments(self):
        """Test a zero gain switches the noise off"""
        cfg = make_config()
        spec = ForcingSpec(ForcingFamily.POWER_LAW, 1.0, 2.0, cfg.truncation, gain=lambda norm: 0.0)
        state = step(initial_state(cfg), cfg, spec)
        assert np.all(state.field.coefficients == 0)

    def test_time_advances(self):
        cfg = make_config(dt=0.25)
        state = TrajectoryState(SpectralField.zeros(cfg.truncation), 1.0, make_stream(0))
        assert step(state, cfg, make_spec(cfg.truncation)).time == 1.25
