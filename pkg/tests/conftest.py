"""
Shared fixtures: small configurations that run in well under a second
"""

import pytest

from src.core.config import ExperimentConfig, build_config

TINY_VALUES = {
    'nu': 0.5,
    'k_max': 2,
    'dt': 0.01,
    't_burn': 0.5,
    't_sample': 2.0,
    'sample_stride': 5,
    'forcing_family': 'gevrey',
    'forcing_r': 1.0,
    'forcing_alpha': 0.3,
    'forcing_beta': 1.0,
    'forcing_amplitude': 0.5,
    'ensemble_size': 2,
    'seed': 1,
    'analysis_p': [1, 2],
    'threads': 1,
}


@pytest.fixture
def tiny_values(tmp_path):
    """Raw values of a tiny Gevrey-forced run writing into tmp_path"""
    return {**TINY_VALUES, 'output_dir': str(tmp_path / "output")}


@pytest.fixture
def tiny_config(tiny_values) -> ExperimentConfig:
    return build_config(tiny_values)


@pytest.fixture
def tiny_config_file(tmp_path):
    """The tiny run as a dotted key-value file"""
    path = tmp_path / "tiny.conf"
    path.write_text(
        "\n".join([
            "# tiny Gevrey-forced run",
            "nu = 0.5",
            "truncation.k_max = 2",
            "dt = 0.01",
            "t_burn = 0.5",
            "t_sample = 2.0",
            "sample_stride = 5",
            "forcing.family = gevrey",
            "forcing.r = 1",
            "forcing.alpha = 0.3",
            "forcing.beta = 1",
            "forcing.amplitude = 0.5",
            "ensemble.size = 2",
            "rng.seed = 1",
            "analysis.p = 1, 2",
            f"output.dir = {tmp_path / 'output'}",
        ]) + "\n",
        encoding='utf-8',
    )
    return path
