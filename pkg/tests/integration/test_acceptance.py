"""
Monte-Carlo acceptance runs of the full engine

Each test runs a real stationary simulation and checks the reported
verdicts; they take minutes and are marked slow.
"""

import numpy as np
import pytest

from src.application import ExperimentRunner
from src.core.config import build_config
from src.dynamics import bilinear_B, forcing_constants
from src.integrator import run_ensemble
from src.measure import StoppingTimeObserver
from src.oracle import bilinear_B_direct
from src.spectral import Truncation, divergence_max, l2_inner, random_field, sobolev_norm

pytestmark = [pytest.mark.integration, pytest.mark.slow]

NS_GEVREY = {
    'nu': 0.5,
    'dt': 0.01,
    'forcing_family': 'gevrey',
    'forcing_r': 1.0,
    'forcing_alpha': 0.3,
    'forcing_beta': 1.0,
    'forcing_amplitude': 1.0,
    'seed': 2024,
}


def checks_of(result):
    return {check.name: check for check in result.report.checks}


class TestOrnsteinUhlenbeckExactness:
    """Linear system against the exact Gaussian invariant law"""

    def test_second_moments(self, tmp_path):
        experiment = build_config({
            'nu': 0.5, 'k_max': 4, 'dt': 0.01, 't_burn': 20.0, 't_sample': 2000.0,
            'forcing_family': 'power_law', 'forcing_r': 2.5, 'forcing_amplitude': 1.0,
            'nonlinear': False, 'seed': 7, 'output_dir': str(tmp_path),
        })
        result = ExperimentRunner(experiment).run('ou-validate')
        checks = checks_of(result)
        for m in (0, 1, 2):
            assert checks[f'ou_moment_h{m}_stderr'].passed, checks[f'ou_moment_h{m}_stderr'].to_dict()
            assert checks[f'ou_moment_h{m}_relative'].passed, checks[f'ou_moment_h{m}_relative'].to_dict()
        assert checks['ou_kolmogorov_quadratic'].passed
        assert result.exit_code == 0


class TestNavierStokesMoments:
    """Energy balance and Sobolev moments of the forced nonlinear system"""

    def test_energy_balance_and_theorem1(self, tmp_path):
        experiment = build_config({**NS_GEVREY, 'k_max': 8, 't_sample': 400.0, 'sample_stride': 5,
                                   'analysis_p': [1, 2], 'output_dir': str(tmp_path)})
        result = ExperimentRunner(experiment).run('moments')
        checks = checks_of(result)
        assert checks['no_blow_up'].passed
        assert checks['energy_balance'].passed, checks['energy_balance'].details
        assert checks['energy_bound'].passed
        for p in (1, 2):
            assert checks[f'theorem1_p{p}_stability'].passed
            assert checks[f'holder_recursion_p{p}'].passed

    def test_kolmogorov_stationarity(self, tmp_path):
        experiment = build_config({**NS_GEVREY, 'k_max': 4, 't_sample': 1000.0, 'sample_stride': 10,
                                   'analysis_p': [1], 'output_dir': str(tmp_path)})
        result = ExperimentRunner(experiment).run('kolmogorov')
        assert checks_of(result)['stationarity_lyapunov_p1'].passed
        block = result.summary['kolmogorov']['lyapunov_p1']
        assert block['window_samples'] > 1000

    def test_dissipation_fit(self, tmp_path):
        experiment = build_config({**NS_GEVREY, 'k_max': 8, 't_sample': 200.0, 'sample_stride': 10,
                                   'output_dir': str(tmp_path)})
        result = ExperimentRunner(experiment).run('dissipation')
        fit = result.summary['dissipation_fit']
        assert fit['decay_rate'] > 0
        assert fit['r_squared'] >= 0.9


class TestStoppingTimes:
    """Stopping-time ensemble of the Gevrey machinery"""

    def test_tau_ensemble(self, tmp_path):
        experiment = build_config({**NS_GEVREY, 'k_max': 4, 't_burn': 20.0, 't_sample': 4.0,
                                   'ensemble_size': 64, 'threads': 4, 'output_dir': str(tmp_path)})
        result = ExperimentRunner(experiment).run('gevrey')
        checks = checks_of(result)
        assert checks['tau_threshold_identity'].passed
        assert checks['tau_sup_mean_bound'].passed
        assert checks['tau_sqrt_fit'].passed
        assert checks['interpolation_inequality'].passed
        assert result.summary['tau']['clocks'] == 64

    def test_threshold_identity_on_every_sampled_point(self, tmp_path):
        experiment = build_config({**NS_GEVREY, 'k_max': 4, 't_burn': 10.0, 't_sample': 20.0,
                                   'ensemble_size': 8, 'output_dir': str(tmp_path)})
        cfg = experiment.to_sim_config()
        spec = experiment.to_forcing_spec(cfg.truncation)
        Bbar0 = forcing_constants(spec, 0, cfg.nu).Bbar_p
        result = run_ensemble(
            cfg, spec,
            lambda member: [StoppingTimeObserver(cfg.nu, 1.0, horizon=2.0, restart=2.0, Bbar0=Bbar0, alpha_cap=0.3)],
        )
        record = result.observers[0].finish()
        assert len(record.tau_samples) >= 8 * 9
        for sample in record.tau_samples:
            assert sample.sup_gevrey_sq <= sample.threshold
        assert all(0 < a <= 0.3 for a in record.alpha_nu_samples)


class TestNonlinearity:
    """Pseudo-spectral B against its identities and the direct triad sum"""

    def test_hundred_random_fields(self):
        truncation = Truncation(6)
        rng = np.random.default_rng(2024)
        for _ in range(100):
            u = random_field(truncation, lambda r: r ** -1.0, rng)
            b = bilinear_B(u)
            direct = bilinear_B_direct(u)
            assert abs(l2_inner(b, u)) <= 1e-10 * sobolev_norm(u, 0.0) * sobolev_norm(u, 1.0) ** 2
            assert divergence_max(b) <= 1e-12 * max(1.0, float(np.max(np.abs(b.coefficients))))
            difference = np.linalg.norm(b.coefficients - direct.coefficients)
            assert difference <= 1e-10 * np.linalg.norm(direct.coefficients)
