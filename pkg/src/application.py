"""
Experiment runner orchestrating simulation, statistics and checks
"""

import os
import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np
import pandas as pd
from dotenv import load_dotenv

from src.core.base import BaseComponent, SampleObserver
from src.core.config import ExperimentConfig, load_config
from src.core.exceptions import BlowUpError, ConfigurationError, SimulationError
from src.core.models import CheckReport, CheckResult
from src.dynamics import bilinear_B, forcing_constants
from src.integrator import (
    EnsembleResult,
    SimulationSummary,
    load_checkpoint,
    make_stream,
    run_ensemble,
    save_checkpoint,
    simulate as simulate_trajectory,
)
from src.kolmogorov import KolmogorovObserver, LyapunovFunctional, QuadraticFunctional, stationarity_residual
from src.measure import (
    FunctionalObserver,
    GevreyBudgetObserver,
    ModeSpectrum,
    SpectrumAccumulator,
    StoppingTimeObserver,
    check_interpolation,
    dissipation_scale_fit,
    energy_balance_residual,
    foias_temam_ratio,
    gevrey_budget,
    holder_recursion_bound,
    log_plus_moment,
    m_p_statistic,
    r_p_statistic,
    shell_spectrum,
    tau_probability_bound_fit,
    theorem1_statistic,
    theorem2_statistics,
)
from src.oracle import (
    MAX_DIRECT_MODES,
    OuSpec,
    bilinear_B_direct,
    ou_exact_second_moment,
    ou_sample_stationary,
)
from src.reporting import RunHeader, RunReporter
from src.spectral import Truncation, divergence_max, l2_inner, random_field, sobolev_norm

load_dotenv()

WORKFLOWS = ('simulate', 'ou-validate', 'moments', 'gevrey', 'kolmogorov', 'dissipation')

# acceptance tolerances
OU_STDERR_FACTOR = 3.0
OU_RELATIVE_TOLERANCE = 0.05
OU_EXACT_SAMPLES = 10000
ORACLE_FIELDS = 10
ENERGY_RELATIVE_TOLERANCE = 0.05
STABILITY_TOLERANCE = 0.10
HOLDER_SLACK = 0.02
KOLMOGOROV_STDERR_FACTOR = 3.0
TAU_FIT_MIN_R_SQUARED = 0.8
DISSIPATION_MIN_R_SQUARED = 0.9


@dataclass
class WorkflowResult:
    """Checks, files and summary of one workflow run"""
    workflow: str
    report: CheckReport
    summary: Dict[str, Any]
    files: List[Path] = field(default_factory=list)
    blow_up: bool = False

    @property
    def passed(self) -> bool:
        return self.report.passed and not self.blow_up

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1


class ExperimentRunner(BaseComponent):
    """
    Runs the CLI workflows for one experiment configuration
    """

    def __init__(self, experiment: Optional[ExperimentConfig] = None, name: str = "ExperimentRunner",
                 progress: bool = False):
        """
        Initialize the runner

        Args:
            experiment: Validated configuration, loaded from SNS_CONFIG (or defaults) when omitted
            name: Component name
            progress: Show tqdm progress bars
        """
        experiment = experiment or load_config(os.getenv('SNS_CONFIG'))
        super().__init__(name, experiment.to_dict())
        self.experiment = experiment
        self.progress = progress
        self.sim_config = None
        self.forcing = None
        self.state = RunnerState()
        self._output_dir = Path(experiment.output_dir)
        self._resume: Optional[Path] = None
        self._checkpoint: Optional[Path] = None
        self._setup_logging()

    def _setup_logging(self) -> None:
        log_level = os.getenv('LOG_LEVEL', 'INFO')
        logging.basicConfig(
            level=getattr(logging, log_level.upper(), logging.INFO),
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

    def initialize(self) -> None:
        self.log_info("Initializing experiment runner")
        try:
            self.sim_config = self.experiment.to_sim_config()
            self.forcing = self.experiment.to_forcing_spec(self.sim_config.truncation)
        except SimulationError as e:
            self.state.status = 'error'
            self.state.last_error = str(e)
            raise
        self._initialized = True
        self.state.status = 'ready'
        self.log_info(f"Ready: k_max={self.experiment.k_max}, nu={self.experiment.nu}, "
                      f"members={self.experiment.ensemble_size}, seed={self.experiment.seed}")

    def validate_config(self, workflow: Optional[str] = None) -> bool:
        if workflow is not None and workflow not in WORKFLOWS:
            self.log_error(f"Unknown workflow: {workflow}")
            return False
        if workflow == 'gevrey' and self.experiment.gevrey is None:
            self.log_error("The gevrey workflow needs forcing.alpha and forcing.beta")
            return False
        return True

    def get_status(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'initialized': self._initialized,
            'state': self.state.to_dict(),
            'config': self.config,
            'simulation': self.sim_config.to_dict() if self.sim_config else None,
            'forcing': self.forcing.to_dict() if self.forcing else None,
        }

    def run(self, workflow: str, output_dir: Optional[Union[str, Path]] = None,
            resume: Optional[Union[str, Path]] = None,
            checkpoint: Optional[Union[str, Path]] = None) -> WorkflowResult:
        """
        Run one workflow and write its files

        Args:
            workflow: One of WORKFLOWS
            output_dir: Output directory, ``output.dir`` of the config by default
            resume: Continue member 0 from this checkpoint
            checkpoint: Write the final state (and periodic states) here

        Returns:
            WorkflowResult whose exit_code is nonzero on a failed check or blow-up
        """
        if not self.validate_config(workflow):
            raise ConfigurationError(f"Workflow '{workflow}' cannot run with this configuration",
                                     config_key='forcing.family' if workflow in WORKFLOWS else None)
        if not self._initialized:
            self.initialize()

        handlers: Dict[str, Callable[..., WorkflowResult]] = {
            'simulate': self._simulate,
            'ou-validate': self._ou_validate,
            'moments': self._moments,
            'gevrey': self._gevrey,
            'kolmogorov': self._kolmogorov,
            'dissipation': self._dissipation,
        }
        self.state.current_operation = workflow
        self._output_dir = Path(output_dir or self.experiment.output_dir)
        self._resume = Path(resume) if resume else None
        self._checkpoint = Path(checkpoint) if checkpoint else None
        self.log_info(f"Running workflow '{workflow}' into {self._output_dir}")
        try:
            result = handlers[workflow]()
        except SimulationError as e:
            self.state.last_error = str(e)
            self.state.current_operation = None
            raise
        self.state.record(result)
        self.state.current_operation = None
        level = self.log_info if result.passed else self.log_warning
        level(f"Workflow '{workflow}' {'passed' if result.passed else 'failed'}: "
              f"{len(result.report.checks)} checks, failed {result.report.failed_checks()}")
        return result

    # ------------------------------------------------------------------
    # shared plumbing

    def _reporter(self, workflow: str, functionals: List[str], cfg=None) -> RunReporter:
        cfg = cfg or self.sim_config
        header = RunHeader(workflow=workflow, config_hash=cfg.config_hash, seed=cfg.seed,
                           functionals=functionals)
        reporter = RunReporter(self._output_dir, header)
        reporter.initialize()
        return reporter

    def _run_members(self, observer_factory: Callable[[int], List[SampleObserver]], cfg=None,
                     spec=None) -> EnsembleResult:
        """Ensemble run, or a single resumed trajectory when a checkpoint was given"""
        cfg = cfg or self.sim_config
        spec = spec or self.forcing
        if self._resume is None:
            result = run_ensemble(cfg, spec, observer_factory, threads=self.experiment.threads,
                                  blowup_dir=self._output_dir, progress=self.progress)
        else:
            state, _ = load_checkpoint(self._resume, expected=cfg)
            self.log_info(f"Resuming from {self._resume} at t={state.time:.6g}")
            observers = observer_factory(0)
            try:
                summary = simulate_trajectory(cfg, spec, observers, state=state,
                                              checkpoint_path=self._checkpoint,
                                              blowup_dir=self._output_dir, progress=self.progress)
            except BlowUpError as e:
                summary = SimulationSummary(0, cfg.burn_steps, cfg.sample_steps,
                                            observers[0].samples_seen if observers else 0,
                                            0.0, None, blow_up=e)
            result = EnsembleResult(observers=observers, summaries=[summary])
        final = result.summaries[0].final_state
        if self._checkpoint is not None and final is not None:
            save_checkpoint(final, cfg, self._checkpoint)
            self.log_info(f"Saved final state of member 0 to {self._checkpoint}")
        return result

    def _ensemble_checks(self, report: CheckReport, result: EnsembleResult) -> bool:
        report.add(CheckResult('no_blow_up', not result.blow_up_members, result.blow_up_fraction, 0.0,
                               {'members': result.blow_up_members}))
        return bool(result.blow_up_members)

    def _base_summary(self, result: EnsembleResult, cfg=None) -> Dict[str, Any]:
        return {
            'config': self.experiment.to_dict(),
            'simulation': (cfg or self.sim_config).to_dict(),
            'forcing': self.forcing.to_dict(),
            'ensemble': result.to_dict(),
        }

    def _finish(self, workflow: str, report: CheckReport, summary: Dict[str, Any],
                reporter: RunReporter, blow_up: bool) -> WorkflowResult:
        summary['checks'] = [check.to_dict() for check in report.checks]
        summary['passed'] = report.passed and not blow_up
        reporter.write_summary(summary)
        return WorkflowResult(workflow, report, summary, list(reporter.written), blow_up)

    def _spectrum_frame(self, accumulator: SpectrumAccumulator) -> pd.DataFrame:
        return shell_spectrum(ModeSpectrum(self.sim_config.truncation, accumulator.mean_amplitudes()))

    @staticmethod
    def _half_window_deviation(frame: pd.DataFrame, column: str, midpoint: float) -> float:
        full = frame[column].mean()
        last_half = frame.loc[frame['time'] >= midpoint, column].mean()
        return abs(last_half - full) / abs(full) if full else 0.0

    # ------------------------------------------------------------------
    # workflows

    def _simulate(self) -> WorkflowResult:
        orders = self.experiment.analysis_p
        functionals: Dict[str, Callable] = {
            'energy': lambda x: sobolev_norm(x, 0.0) ** 2,
            'enstrophy': lambda x: sobolev_norm(x, 1.0) ** 2,
        }
        for p in orders:
            functionals[f'theorem1_p{p}'] = lambda x, p=p: theorem1_statistic(x, p)
            functionals[f'lyapunov_p{p}'] = LyapunovFunctional(p).value

        def factory(member: int) -> List[SampleObserver]:
            return [FunctionalObserver(functionals, member=member),
                    SpectrumAccumulator(self.sim_config.truncation)]

        result = self._run_members(factory)
        observer, spectrum = result.observers
        report = CheckReport('simulate')
        blow_up = self._ensemble_checks(report, result)

        reporter = self._reporter('simulate', list(functionals))
        reporter.write_samples(observer.series())
        if spectrum.samples_seen:
            reporter.write_spectrum(self._spectrum_frame(spectrum))
        summary = self._base_summary(result)
        summary['statistics'] = observer.summary()
        if observer.accumulators['enstrophy'].count >= 2:
            balance = energy_balance_residual(observer.accumulators['enstrophy'],
                                              forcing_constants(self.forcing, 0, self.experiment.nu),
                                              self.experiment.nu)
            summary['energy_balance'] = balance.to_dict()
        return self._finish('simulate', report, summary, reporter, blow_up)

    def _ou_validate(self) -> WorkflowResult:
        experiment = self.experiment
        cfg = self.sim_config
        if cfg.nonlinear:
            self.log_info("ou-validate runs the linear system (nonlinear term disabled)")
            cfg = experiment.with_overrides(nonlinear=False).to_sim_config()
        ou = OuSpec(experiment.nu, self.forcing)
        orders = (0, 1, 2)
        functionals = {f'h{m}': (lambda x, m=m: sobolev_norm(x, float(m)) ** 2) for m in orders}

        result = self._run_members(lambda member: [FunctionalObserver(functionals, member=member)], cfg=cfg)
        observer = result.observers[0]
        report = CheckReport('ou-validate')
        blow_up = self._ensemble_checks(report, result)

        rows = []
        for m in orders:
            acc = observer.accumulators[f'h{m}']
            exact = ou_exact_second_moment(ou, float(m))
            deviation = acc.mean - exact
            stderr = acc.stderr if acc.count >= 2 else float('inf')
            rows.append({'m': m, 'empirical': acc.mean, 'stderr': stderr, 'exact': exact,
                         'relative_error': deviation / exact})
            report.add(CheckResult(f'ou_moment_h{m}_stderr', abs(deviation) <= OU_STDERR_FACTOR * stderr,
                                   abs(deviation) / stderr if stderr > 0 else 0.0, OU_STDERR_FACTOR))
            report.add(CheckResult(f'ou_moment_h{m}_relative', abs(deviation) <= OU_RELATIVE_TOLERANCE * exact,
                                   abs(deviation) / exact, OU_RELATIVE_TOLERANCE))

        rng = make_stream(experiment.seed, experiment.ensemble_size)
        samples = (ou_sample_stationary(ou, rng) for _ in range(OU_EXACT_SAMPLES))
        mean, stderr = stationarity_residual(samples, QuadraticFunctional(), self.forcing, experiment.nu,
                                             nonlinear=False)
        report.add(CheckResult('ou_kolmogorov_quadratic', abs(mean) <= KOLMOGOROV_STDERR_FACTOR * stderr,
                               abs(mean) / stderr if stderr > 0 else 0.0, KOLMOGOROV_STDERR_FACTOR,
                               {'mean': mean, 'stderr': stderr, 'samples': OU_EXACT_SAMPLES}))

        oracle = self._nonlinear_oracles(report, rng)

        reporter = self._reporter('ou-validate', list(functionals), cfg)
        reporter.write_table(pd.DataFrame(rows), 'ou_moments.csv')
        reporter.write_samples(observer.series())
        summary = self._base_summary(result, cfg)
        summary['ou_moments'] = rows
        summary['nonlinear_oracle'] = oracle
        return self._finish('ou-validate', report, summary, reporter, blow_up)

    def _nonlinear_oracles(self, report: CheckReport, rng: np.random.Generator) -> Dict[str, Any]:
        """Orthogonality, incompressibility and direct-convolution agreement of B"""
        truncation = self.sim_config.truncation
        if truncation.mode_count > MAX_DIRECT_MODES:
            truncation = Truncation(6)
        orthogonality = divergence = difference = 0.0
        for _ in range(ORACLE_FIELDS):
            u = random_field(truncation, lambda k: k ** -2.0, rng)
            b = bilinear_B(u)
            scale = sobolev_norm(u, 0.0) * sobolev_norm(u, 1.0) ** 2
            orthogonality = max(orthogonality, abs(l2_inner(b, u)) / scale)
            divergence = max(divergence, divergence_max(b) / max(1.0, float(np.max(np.abs(b.coefficients)))))
            direct = bilinear_B_direct(u)
            difference = max(difference, sobolev_norm(b - direct, 0.0) / sobolev_norm(direct, 0.0))
        report.add(CheckResult('nonlinear_orthogonality', orthogonality <= 1e-10, orthogonality, 1e-10))
        report.add(CheckResult('nonlinear_divergence', divergence <= 1e-12, divergence, 1e-12))
        report.add(CheckResult('nonlinear_direct_convolution', difference <= 1e-10, difference, 1e-10))
        return {'k_max': truncation.k_max, 'fields': ORACLE_FIELDS, 'orthogonality': orthogonality,
                'divergence': divergence, 'relative_difference': difference}

    def _moments(self) -> WorkflowResult:
        nu = self.experiment.nu
        orders = self.experiment.analysis_p
        functionals: Dict[str, Callable] = {'enstrophy': lambda x: sobolev_norm(x, 1.0) ** 2}
        for p in sorted(set(orders) | {p + 1 for p in orders}):
            functionals[f'm_p{p}'] = lambda x, p=p: m_p_statistic(x, p, nu)
        for p in orders:
            functionals[f'theorem1_p{p}'] = lambda x, p=p: theorem1_statistic(x, p)
            functionals[f'r_p{p}'] = lambda x, p=p: r_p_statistic(x, p, nu)

        result = self._run_members(lambda member: [FunctionalObserver(functionals, member=member)])
        observer = result.observers[0]
        acc = observer.accumulators
        report = CheckReport('moments')
        blow_up = self._ensemble_checks(report, result)

        frame = observer.series()
        midpoint = self.sim_config.t_burn + 0.5 * self.sim_config.t_sample
        rows = []
        for p in orders:
            deviation = self._half_window_deviation(frame, f'theorem1_p{p}', midpoint) if len(frame) else 0.0
            bound = holder_recursion_bound(acc[f'r_p{p}'].mean, acc[f'm_p{p}'].mean, p)
            lhs = acc[f'm_p{p + 1}'].mean
            rows.append({
                'p': p,
                'theorem1_mean': acc[f'theorem1_p{p}'].mean,
                'theorem1_stderr': acc[f'theorem1_p{p}'].stderr if acc[f'theorem1_p{p}'].count >= 2 else None,
                'half_window_deviation': deviation,
                'm_p_mean': acc[f'm_p{p}'].mean,
                'r_p_mean': acc[f'r_p{p}'].mean,
                'm_p_next_mean': lhs,
                'holder_bound': bound,
            })
            report.add(CheckResult(f'theorem1_p{p}_stability', deviation <= STABILITY_TOLERANCE,
                                   deviation, STABILITY_TOLERANCE))
            report.add(CheckResult(f'holder_recursion_p{p}', lhs <= bound * (1.0 + HOLDER_SLACK),
                                   lhs / bound if bound else 0.0, 1.0 + HOLDER_SLACK))

        balance = energy_balance_residual(acc['enstrophy'], forcing_constants(self.forcing, 0, nu), nu)
        report.add(CheckResult('energy_balance', balance.within(ENERGY_RELATIVE_TOLERANCE),
                               abs(balance.relative_residual), ENERGY_RELATIVE_TOLERANCE, balance.to_dict()))
        report.add(CheckResult('energy_bound', balance.bound_holds,
                               nu * balance.mean_dissipation, balance.bound_value))

        reporter = self._reporter('moments', list(functionals))
        reporter.write_table(pd.DataFrame(rows), 'moments.csv')
        reporter.write_samples(frame)
        summary = self._base_summary(result)
        summary['statistics'] = observer.summary()
        summary['moments'] = rows
        summary['energy_balance'] = balance.to_dict()
        return self._finish('moments', report, summary, reporter, blow_up)

    def _gevrey(self) -> WorkflowResult:
        experiment = self.experiment
        nu = experiment.nu
        gevrey = experiment.require_gevrey()
        alpha_prime, beta_prime = experiment.interpolation_params
        gamma = experiment.gamma
        Bbar0 = forcing_constants(self.forcing, 0, nu).Bbar_p
        horizon = experiment.tau_horizon or self.sim_config.t_sample
        budget_period = experiment.tau_restart or horizon
        spec = self.forcing

        def member_functionals() -> Dict[str, Callable]:
            functionals: Dict[str, Callable] = {
                'log_plus_moment': lambda x: log_plus_moment(x, alpha_prime, beta_prime, gamma),
                'interpolation_violation': lambda x: 0.0 if check_interpolation(
                    x, gevrey.alpha, alpha_prime, gevrey.beta, beta_prime) else 1.0,
                'foias_temam_ratio': lambda x: foias_temam_ratio(gevrey_budget(x, 0.0, nu, gevrey.beta, spec)),
            }
            if experiment.alpha_nu:
                latest: Dict[str, Any] = {'field': None, 'sample': None}

                def sample(x):
                    if latest['field'] is not x:
                        latest['field'] = x
                        latest['sample'] = theorem2_statistics(x, nu, gevrey.beta, Bbar0, gevrey.alpha, gamma)
                    return latest['sample']

                functionals['alpha_nu'] = lambda x: sample(x).alpha_nu
                functionals['gevrey_moment'] = lambda x: sample(x).gevrey_moment
                functionals['radius_moment'] = lambda x: sample(x).radius_moment
            return functionals

        def factory(member: int) -> List[SampleObserver]:
            observers: List[SampleObserver] = [
                FunctionalObserver(member_functionals(), member=member),
                GevreyBudgetObserver(nu, gevrey.beta, spec, budget_period, nonlinear=self.sim_config.nonlinear),
            ]
            if experiment.tau:
                alpha_kwargs = {'Bbar0': Bbar0, 'alpha_cap': gevrey.alpha} if experiment.alpha_nu else {}
                observers.append(StoppingTimeObserver(nu, gevrey.beta, horizon, experiment.tau_restart,
                                                      **alpha_kwargs))
            return observers

        result = self._run_members(factory)
        observer = result.observers[0]
        report = CheckReport('gevrey')
        blow_up = self._ensemble_checks(report, result)

        flags = observer.accumulators['interpolation_violation']
        violations = int(round(flags.mean * flags.count)) if flags.count else 0
        report.add(CheckResult('interpolation_inequality', violations == 0, violations, 0.0,
                               {'alpha_prime': alpha_prime, 'beta_prime': beta_prime}))

        frame = observer.series()
        reporter = self._reporter('gevrey', list(observer.functionals))
        reporter.write_samples(frame)
        summary = self._base_summary(result)
        summary['statistics'] = observer.summary()
        summary['Bbar0'] = Bbar0
        summary['log_plus_half_window_deviation'] = (
            self._half_window_deviation(frame, 'log_plus_moment',
                                        self.sim_config.t_burn + 0.5 * self.sim_config.t_sample)
            if len(frame) else None
        )

        if experiment.tau:
            record = result.observers[2].finish()
            summary['tau'] = record.to_dict()
            if record.tau_samples:
                self._tau_checks(report, record, Bbar0, summary)
                reporter.write_table(pd.DataFrame([s.to_dict() for s in record.tau_samples]), 'tau.csv')

        summary['gevrey_budget'] = result.observers[1].summary()
        return self._finish('gevrey', report, summary, reporter, blow_up)

    def _tau_checks(self, report: CheckReport, record, Bbar0: float, summary: Dict[str, Any]) -> None:
        nu = self.experiment.nu
        ratios = [(1.0 + s.sup_gevrey_sq) / s.threshold for s in record.tau_samples]
        report.add(CheckResult('tau_threshold_identity', max(ratios) <= 1.0, max(ratios), 1.0))

        sups = np.array([s.sup_gevrey_sq for s in record.tau_samples])
        sup_stderr = float(np.std(sups, ddof=1) / np.sqrt(len(sups))) if len(sups) > 1 else 0.0
        bound = 4.0 / nu * (Bbar0 + 1.0)
        report.add(CheckResult('tau_sup_mean_bound', sups.mean() - 3.0 * sup_stderr <= bound,
                               float(sups.mean()), bound, {'stderr': sup_stderr}))

        fit = tau_probability_bound_fit(record, nu=nu, Bbar0=Bbar0)
        summary['tau_fit'] = fit.to_dict()
        report.add(CheckResult('tau_sqrt_fit', fit.identically_zero or fit.r_squared >= TAU_FIT_MIN_R_SQUARED,
                               fit.r_squared, TAU_FIT_MIN_R_SQUARED, {'identically_zero': fit.identically_zero}))

    def _kolmogorov(self) -> WorkflowResult:
        nu = self.experiment.nu
        functionals = [LyapunovFunctional(p) for p in self.experiment.analysis_p] + [QuadraticFunctional()]
        nonlinear = self.sim_config.nonlinear

        result = self._run_members(
            lambda member: [KolmogorovObserver(functionals, self.forcing, nu, nonlinear)]
        )
        observer = result.observers[0]
        report = CheckReport('kolmogorov')
        blow_up = self._ensemble_checks(report, result)

        block = observer.summary()['kolmogorov']
        rows = []
        for f in functionals:
            entry = block[f.name]
            rows.append({'functional': f.name, **entry})
            if 'residual_mean' not in entry:
                continue
            ratio = entry['residual_over_stderr']
            report.add(CheckResult(f'stationarity_{f.name}',
                                   (ratio is not None and ratio <= KOLMOGOROV_STDERR_FACTOR)
                                   or entry['residual_mean'] == 0.0,
                                   ratio or 0.0, KOLMOGOROV_STDERR_FACTOR))

        reporter = self._reporter('kolmogorov', [f.name for f in functionals])
        reporter.write_table(pd.DataFrame(rows), 'kolmogorov.csv')
        summary = self._base_summary(result)
        summary['kolmogorov'] = block
        return self._finish('kolmogorov', report, summary, reporter, blow_up)

    def _dissipation(self) -> WorkflowResult:
        gevrey = self.experiment.gevrey
        beta = gevrey.beta if gevrey else 1.0
        result = self._run_members(lambda member: [SpectrumAccumulator(self.sim_config.truncation)])
        accumulator = result.observers[0]
        report = CheckReport('dissipation')
        blow_up = self._ensemble_checks(report, result)

        spectrum = ModeSpectrum(self.sim_config.truncation, accumulator.mean_amplitudes())
        fit = dissipation_scale_fit(spectrum, beta)
        report.add(CheckResult('dissipation_decay_positive', fit.is_gevrey, fit.decay_rate, 0.0))
        report.add(CheckResult('dissipation_fit_quality', fit.r_squared >= DISSIPATION_MIN_R_SQUARED,
                               fit.r_squared, DISSIPATION_MIN_R_SQUARED))

        reporter = self._reporter('dissipation', ['mean_amplitude'])
        reporter.write_spectrum(shell_spectrum(spectrum))
        summary = self._base_summary(result)
        summary['dissipation_fit'] = fit.to_dict()
        return self._finish('dissipation', report, summary, reporter, blow_up)


class RunnerState:
    """Track runner state across workflows"""

    def __init__(self):
        self.status = 'initializing'
        self.current_operation = None
        self.last_error = None
        self.last_workflow = None
        self.workflows_run = 0
        self.workflows_passed = 0
        self.start_time = datetime.now()

    def record(self, result: WorkflowResult) -> None:
        self.workflows_run += 1
        self.workflows_passed += int(result.passed)
        self.last_workflow = result.workflow

    def to_dict(self) -> Dict[str, Any]:
        return {
            'status': self.status,
            'current_operation': self.current_operation,
            'last_error': self.last_error,
            'last_workflow': self.last_workflow,
            'statistics': {
                'workflows_run': self.workflows_run,
                'workflows_passed': self.workflows_passed,
                'pass_rate': (self.workflows_passed / self.workflows_run * 100) if self.workflows_run else 0.0,
            },
            'uptime_seconds': (datetime.now() - self.start_time).total_seconds(),
        }
