"""
Tests for the experiment configuration parser
"""

from pathlib import Path

import pytest

from .config import ExperimentConfig, KEY_MAP, build_config, load_config, parse_config_text
from .exceptions import ConfigurationError
from .models import ForcingFamily, IntegrationScheme

GEVREY_TEXT = """
# stationary NS run
nu = 0.5
truncation.k_max = 8
dt = 0.005
forcing.family = gevrey
forcing.r = 1
forcing.alpha = 0.3
forcing.beta = 1   # analytic
forcing.amplitude = 1.0
ensemble.size = 4
rng.seed = 7
analysis.p = 1, 2
analysis.gevrey.alpha_prime = 0.1
analysis.gevrey.beta_prime = 0.5
analysis.gamma = 0.25
t_burn = none
"""


class TestParseConfig:
    """Test the flat dotted key-value format"""

    def test_full_file(self):
        cfg = parse_config_text(GEVREY_TEXT)
        assert cfg.nu == 0.5
        assert cfg.k_max == 8
        assert cfg.forcing_family == ForcingFamily.GEVREY
        assert cfg.gevrey.alpha == 0.3 and cfg.gevrey.beta == 1.0
        assert cfg.analysis_p == [1, 2]
        assert cfg.seed == 7
        assert cfg.t_burn is None
        assert cfg.interpolation_params == (0.1, 0.5)

    def test_defaults(self):
        cfg = parse_config_text("")
        assert cfg.scheme == IntegrationScheme.EXP_EULER
        assert cfg.forcing_family == ForcingFamily.POWER_LAW
        assert cfg.analysis_p == [1]
        assert cfg.gevrey is None

    def test_unknown_key_reports_line(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config_text("nu = 0.5\nviscosity = 0.1\n")
        assert exc_info.value.details == {'config_key': 'viscosity', 'line': 2}

    def test_duplicate_key(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config_text("nu = 0.5\n\nnu = 0.4\n")
        assert exc_info.value.details['line'] == 3

    def test_missing_equals(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config_text("nu 0.5")
        assert exc_info.value.details['line'] == 1

    def test_bad_type_names_key_and_line(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config_text("nu = 0.5\ntruncation.k_max = eight\n")
        details = exc_info.value.details
        assert details['config_key'] == 'truncation.k_max'
        assert details['line'] == 2
        assert 'expected_type' in details

    def test_out_of_range_viscosity(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config_text("nu = 1.5")
        assert exc_info.value.details['config_key'] == 'nu'

    def test_order_below_one_rejected(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config_text("analysis.p = 1, 0")
        assert exc_info.value.details['config_key'] == 'analysis.p'

    def test_beta_prime_not_below_beta_rejected(self):
        text = "forcing.family = gevrey\nforcing.alpha = 0.3\nforcing.beta = 0.5\nanalysis.gevrey.beta_prime = 0.5\n"
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config_text(text)
        assert exc_info.value.details['config_key'] == 'analysis.gevrey.beta_prime'
        assert exc_info.value.details['line'] == 4

    def test_gevrey_family_needs_class(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config_text("forcing.family = gevrey\nforcing.beta = 1\n")
        assert exc_info.value.details['config_key'] == 'forcing.family'
        assert exc_info.value.details['line'] == 1

    def test_every_key_maps_to_a_field(self):
        assert set(KEY_MAP.values()) <= set(ExperimentConfig.model_fields)


class TestExperimentConfig:
    """Test conversions and overrides"""

    def test_overrides_revalidate(self):
        cfg = parse_config_text("rng.seed = 3")
        assert cfg.with_overrides(seed=11).seed == 11
        assert cfg.with_overrides(seed=None).seed == 3
        with pytest.raises(ConfigurationError):
            cfg.with_overrides(seed=-1)

    def test_environment_defaults(self, monkeypatch):
        monkeypatch.setenv('SNS_THREADS', '3')
        monkeypatch.setenv('SNS_OUTPUT_DIR', '/tmp/sns')
        cfg = build_config({})
        assert cfg.threads == 3
        assert cfg.output_dir == '/tmp/sns'

    def test_sim_config_and_forcing(self):
        cfg = parse_config_text(GEVREY_TEXT)
        sim = cfg.to_sim_config()
        spec = cfg.to_forcing_spec()
        assert sim.truncation.k_max == 8
        assert sim.t_burn == pytest.approx(20.0)
        assert sim.ensemble_size == 4
        assert spec.truncation == sim.truncation
        assert spec.gevrey == cfg.gevrey

    def test_require_gevrey(self):
        with pytest.raises(ConfigurationError):
            build_config({}).require_gevrey()

    def test_dotted_echo(self):
        echo = parse_config_text(GEVREY_TEXT).to_dict()
        assert echo['truncation.k_max'] == 8
        assert echo['forcing.family'] == 'gevrey'
        assert echo['rng.seed'] == 7

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_config(tmp_path / "absent.conf")

    def test_load_file(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text(GEVREY_TEXT, encoding='utf-8')
        assert load_config(path) == parse_config_text(GEVREY_TEXT)


SHIPPED_CONFIGS = sorted((Path(__file__).resolve().parents[2] / 'configs').glob('*.conf'))


@pytest.mark.parametrize("path", SHIPPED_CONFIGS, ids=lambda p: p.name)
def test_shipped_configs_parse(path):
    cfg = load_config(path)
    assert cfg.to_sim_config().truncation.k_max == cfg.k_max
