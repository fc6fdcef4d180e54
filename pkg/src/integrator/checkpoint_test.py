"""
Tests for checkpoint persistence
"""

import numpy as np
import pytest

from src.core.exceptions import CheckpointFormatError
from src.core.models import ForcingFamily, IntegrationScheme
from src.dynamics import ForcingSpec
from src.spectral import Truncation
from .stepping import SimConfig, initial_state, step
from .checkpoint import save_checkpoint, load_checkpoint, HEADER


@pytest.fixture
def cfg():
    return SimConfig(nu=0.5, truncation=Truncation(3), dt=0.01, t_sample=1.0, t_burn=0.0,
                     scheme=IntegrationScheme.SEMI_IMPLICIT, seed=42)


@pytest.fixture
def spec(cfg):
    return ForcingSpec(ForcingFamily.POWER_LAW, 1.0, 1.5, cfg.truncation)


@pytest.fixture
def advanced_state(cfg, spec):
    state = initial_state(cfg)
    for _ in range(7):
        state = step(state, cfg, spec)
    return state


class TestCheckpoint:
    """Test save/load round trips and format errors"""

    def test_round_trip(self, tmp_path, cfg, advanced_state):
        """Test field, time and stream survive bit-exactly"""
        path = save_checkpoint(advanced_state, cfg, tmp_path / "state.chk")
        loaded, loaded_cfg = load_checkpoint(path)
        assert loaded_cfg == cfg
        assert loaded.time == advanced_state.time
        assert loaded.steps == 7
        assert np.array_equal(loaded.field.coefficients, advanced_state.field.coefficients)
        assert np.array_equal(loaded.rng.standard_normal(5), advanced_state.rng.standard_normal(5))

    def test_resume_matches_uninterrupted(self, tmp_path, cfg, spec, advanced_state):
        """Test resume then 10 steps equals 10 uninterrupted steps"""
        path = save_checkpoint(advanced_state, cfg, tmp_path / "state.chk")
        resumed, _ = load_checkpoint(path, expected=cfg)
        original = advanced_state
        for _ in range(10):
            original = step(original, cfg, spec)
            resumed = step(resumed, cfg, spec)
        assert np.array_equal(original.field.coefficients, resumed.field.coefficients)
        assert original.time == resumed.time

    def test_header_layout(self, tmp_path, cfg, advanced_state):
        """Test the fixed little-endian header"""
        path = save_checkpoint(advanced_state, cfg, tmp_path / "state.chk")
        magic, version, config_hash, nu, k_max, scheme, time = HEADER.unpack(path.read_bytes()[:HEADER.size])
        assert magic == b"SNS3" and version == 1
        assert config_hash == cfg.config_hash
        assert (nu, k_max, scheme) == (0.5, 3, 1)
        assert time == advanced_state.time

    def test_corrupted_magic(self, tmp_path, cfg, advanced_state):
        path = save_checkpoint(advanced_state, cfg, tmp_path / "state.chk")
        data = bytearray(path.read_bytes())
        data[:4] = b"XXXX"
        path.write_bytes(bytes(data))
        with pytest.raises(CheckpointFormatError) as excinfo:
            load_checkpoint(path)
        assert excinfo.value.details['field'] == 'magic'

    def test_wrong_version(self, tmp_path, cfg, advanced_state):
        path = save_checkpoint(advanced_state, cfg, tmp_path / "state.chk")
        data = bytearray(path.read_bytes())
        data[4:6] = (99).to_bytes(2, 'little')
        path.write_bytes(bytes(data))
        with pytest.raises(CheckpointFormatError):
            load_checkpoint(path)

    def test_truncated_file(self, tmp_path, cfg, advanced_state):
        path = save_checkpoint(advanced_state, cfg, tmp_path / "state.chk")
        path.write_bytes(path.read_bytes()[:-40])
        with pytest.raises(CheckpointFormatError):
            load_checkpoint(path)

    def test_config_hash_mismatch(self, tmp_path, cfg, advanced_state):
        """Test resuming under different dynamics is refused"""
        path = save_checkpoint(advanced_state, cfg, tmp_path / "state.chk")
        other = SimConfig(nu=0.25, truncation=Truncation(3), dt=0.01, t_sample=1.0, t_burn=0.0,
                          scheme=IntegrationScheme.SEMI_IMPLICIT)
        with pytest.raises(CheckpointFormatError) as excinfo:
            load_checkpoint(path, expected=other)
        assert excinfo.value.details['field'] == 'config_hash'

    def test_missing_file(self, tmp_path):
        with pytest.raises(CheckpointFormatError):
            load_checkpoint(tmp_path / "absent.chk")
