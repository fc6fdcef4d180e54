"""
Gevrey-class diagnostics: the analyticity-radius functional alpha_nu,
the Ito budget of ||X(t)||^2_{G(nu t, beta)} and the stopping time tau
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from src.core.base import SampleObserver
from src.core.exceptions import DiagnosticError, SpectralDomainError
from src.dynamics import ForcingSpec, bilinear_B
from src.dynamics.forcing import MODE_MULTIPLICITY
from src.spectral import DEFAULT_EXPONENT_CAP, SpectralField, sobolev_norm, weighted_gevrey_sq
from .accumulators import MomentAccumulator

logger = logging.getLogger(__name__)

ALPHA_NU_TOLERANCE = 1e-10


def _check_viscosity(nu: float) -> None:
    if not 0 < nu <= 1:
        raise SpectralDomainError(f"Viscosity must lie in (0, 1], got {nu}", operation="gevrey")


def alpha_nu_gap(x: SpectralField, s: float, nu: float, beta: float, Bbar0: float) -> float:
    """||x||^2_{G(nu s, beta)} - 4 (Bbar0 + 1) / (nu sqrt(s)), increasing in s"""
    if s <= 0:
        return -math.inf
    gevrey_sq = weighted_gevrey_sq(x, nu * s, beta).value
    return gevrey_sq - 4.0 * (Bbar0 + 1.0) / (nu * math.sqrt(s))


def estimate_alpha_nu(x: SpectralField, nu: float, beta: float, Bbar0: float, alpha_cap: float,
                      rel_tol: float = ALPHA_NU_TOLERANCE) -> float:
    """
    alpha_nu(x) = inf{s >= 0 : ||x||^2_{G(nu s, beta)} > 4 (Bbar0 + 1) / (nu s^{1/2})}

    Located by bisection and clamped to (0, alpha_cap]; fields whose
    Gevrey energy never crosses the threshold below the cap return the cap.
    """
    _check_viscosity(nu)
    if not alpha_cap > 0:
        raise SpectralDomainError(f"alpha_cap must be positive, got {alpha_cap}", operation="estimate_alpha_nu")
    if alpha_nu_gap(x, alpha_cap, nu, beta, Bbar0) <= 0:
        return alpha_cap
    lower, upper = 0.0, alpha_cap
    for _ in range(1000):
        if upper - lower <= rel_tol * upper:
            break
        middle = 0.5 * (lower + upper)
        if alpha_nu_gap(x, middle, nu, beta, Bbar0) > 0:
            upper = middle
        else:
            lower = middle
    return upper


class Theorem2Sample(NamedTuple):
    """The two integrands bounded by the Gevrey moment theorem"""
    gevrey_moment: float
    radius_moment: float
    alpha_nu: float


def theorem2_statistics(x: SpectralField, nu: float, beta: float, Bbar0: float,
                        alpha_cap: float, gamma: float) -> Theorem2Sample:
    """(||x||^{2 gamma}_{G(nu alpha_nu(x), beta)}, alpha_nu(x)^{-gamma/2})"""
    if not 0 < gamma < 1:
        raise SpectralDomainError(f"gamma must lie in (0, 1), got {gamma}", operation="theorem2_statistics")
    alpha_nu = estimate_alpha_nu(x, nu, beta, Bbar0, alpha_cap)
    energy = weighted_gevrey_sq(x, nu * alpha_nu, beta)
    gevrey_moment = math.exp(gamma * energy.log_value) if energy.value > 0 else 0.0
    return Theorem2Sample(gevrey_moment, alpha_nu ** (-gamma / 2.0), alpha_nu)


@dataclass
class GevreyBudget:
    """
    Terms of the Ito differential of ||X(t)||^2_{G(nu t, beta)} at one state

    Every sum is divided by exp(log_scale). The scale is 0 unless some
    exponent 2 nu t |k|^beta exceeds the cap, in which case it is the
    largest exponent and ``overflowed`` is set.
    """
    t: float
    I_B: float
    I_g: float
    I_phi: float
    gevrey_sq: float
    dissipation: float
    radius_growth: float
    nu: float
    overflowed: bool = False
    log_scale: float = 0.0

    @property
    def drift(self) -> float:
        """dt-coefficient: -2 nu dissipation + radius growth + 2 I_B + 2 I_g + I_phi"""
        return -2.0 * self.nu * self.dissipation + self.radius_growth + 2.0 * self.I_B + 2.0 * self.I_g + self.I_phi

    def to_dict(self) -> Dict[str, Any]:
        return {
            't': self.t,
            'I_B': self.I_B,
            'I_g': self.I_g,
            'I_phi': self.I_phi,
            'gevrey_sq': self.gevrey_sq,
            'dissipation': self.dissipation,
            'radius_growth': self.radius_growth,
            'drift': self.drift,
            'overflowed': self.overflowed,
            'log_scale': self.log_scale,
        }


def _scaled_sum(log_weights: np.ndarray, values: np.ndarray, log_scale: float) -> float:
    """sum exp(log_weights) * values / exp(log_scale), accumulated in the log domain"""
    support = values != 0
    if not np.any(support):
        return 0.0
    log_abs, sign = logsumexp(log_weights[support], b=values[support], return_sign=True)
    if sign == 0:
        return 0.0
    return float(sign * np.exp(log_abs - log_scale))


def gevrey_budget(x: SpectralField, t: float, nu: float, beta: float, spec: ForcingSpec,
                  nonlinear: bool = True, exponent_cap: float = DEFAULT_EXPONENT_CAP) -> GevreyBudget:
    """
    Budget terms at radius nu t

    I_B = -(x, B(x))_G, I_g = (g, x)_G, I_phi = sum |k|^2 e^{2 nu t |k|^beta} sigma_k^2,
    dissipation = ||A^{1/2} x||^2_G, radius_growth = 2 nu sum |k|^{2+beta} e^{2 nu t |k|^beta} |x(k)|^2.
    """
    if t < 0:
        raise SpectralDomainError(f"Time must be nonnegative, got {t}", operation="gevrey_budget")
    radius = nu * t
    truncation = x.truncation
    exponents = 2.0 * radius * truncation.wavenumber ** beta
    largest = float(np.max(exponents, initial=0.0))
    overflowed = largest > exponent_cap
    log_scale = largest if overflowed else 0.0

    log_k_sq = np.log(truncation.wavenumber_sq)
    log_gevrey = exponents + log_k_sq
    mode_energy = np.einsum('mi,mi->m', x.coefficients, x.coefficients.conj()).real

    def pairing(y: SpectralField) -> np.ndarray:
        return np.einsum('mi,mi->m', x.coefficients, y.coefficients.conj()).real

    # factor 2 sums the representatives over the full symmetric set
    gevrey_sq = 2.0 * _scaled_sum(log_gevrey, mode_energy, log_scale)
    dissipation = 2.0 * _scaled_sum(log_gevrey + log_k_sq, mode_energy, log_scale)
    radius_growth = 2.0 * nu * 2.0 * _scaled_sum(log_gevrey + beta * np.log(truncation.wavenumber),
                                                 mode_energy, log_scale)
    I_B = -2.0 * _scaled_sum(log_gevrey, pairing(bilinear_B(x)), log_scale) if nonlinear else 0.0
    I_g = 2.0 * _scaled_sum(log_gevrey, pairing(spec.g_field), log_scale)
    gain = spec.gain_at(x)
    I_phi = gain ** 2 * MODE_MULTIPLICITY * _scaled_sum(log_gevrey, spec.mode_amplitudes ** 2, log_scale)
    if overflowed:
        logger.warning(f"Gevrey budget at radius {radius:.6g} exceeds the exponent cap; "
                       f"terms scaled by exp(-{log_scale:.6g})")
    return GevreyBudget(t=t, I_B=I_B, I_g=I_g, I_phi=I_phi, gevrey_sq=gevrey_sq,
                        dissipation=dissipation, radius_growth=radius_growth, nu=nu,
                        overflowed=overflowed, log_scale=log_scale)


def foias_temam_ratio(budget: GevreyBudget) -> float:
    """(2 I_B - nu dissipation) nu^3 / ||x||^6_G; bounded above by the nonlinear-estimate constant"""
    if budget.gevrey_sq == 0:
        return 0.0
    ratio = (2.0 * budget.I_B - budget.nu * budget.dissipation) * budget.nu ** 3 / budget.gevrey_sq ** 3
    return ratio * math.exp(-2.0 * budget.log_scale)


class GevreyBudgetObserver(SampleObserver):
    """
    Online means of the Ito budget terms along a trajectory

    Each sample is evaluated at t = elapsed time since the current clock
    origin. The first sampled state opens a clock and a new one opens
    every ``period`` time units. Samples past the exponent cap carry a
    per-sample scale and are counted instead of averaged.
    """

    TERMS = ('I_B', 'I_g', 'I_phi', 'gevrey_sq', 'dissipation', 'radius_growth', 'drift')

    def __init__(self, nu: float, beta: float, spec: ForcingSpec, period: float,
                 nonlinear: bool = True, max_batches: int = 64):
        super().__init__()
        _check_viscosity(nu)
        if not period > 0:
            raise SpectralDomainError(f"Clock period must be positive, got {period}", operation="gevrey_budget")
        self.nu = nu
        self.beta = beta
        self.spec = spec
        self.period = period
        self.nonlinear = nonlinear
        self.accumulators = {name: MomentAccumulator(f"budget_{name}", max_batches) for name in self.TERMS}
        self.overflowed_samples = 0
        self._origin: Optional[float] = None

    def observe(self, state) -> None:
        time = float(state.time)
        if self._origin is None or time - self._origin >= self.period * (1.0 - 1e-9):
            self._origin = time
        budget = gevrey_budget(state.field, max(time - self._origin, 0.0), self.nu, self.beta,
                               self.spec, nonlinear=self.nonlinear)
        if budget.overflowed:
            self.overflowed_samples += 1
            return
        for name in self.TERMS:
            self.accumulators[name].add(getattr(budget, name))

    def merge(self, other: "GevreyBudgetObserver") -> "GevreyBudgetObserver":
        for name, accumulator in self.accumulators.items():
            accumulator.merge(other.accumulators[name])
        self.overflowed_samples += other.overflowed_samples
        self.samples_seen += other.samples_seen
        return self

    def summary(self) -> Dict[str, Any]:
        result = super().summary()
        result.update({
            'period': self.period,
            'overflowed_samples': self.overflowed_samples,
            'terms': {name: acc.to_dict() for name, acc in self.accumulators.items()},
        })
        return result


@dataclass
class TauSample:
    """One stopping-time clock"""
    tau: float
    censored: bool
    sup_gevrey_sq: float
    threshold: float
    origin: float
    reached_horizon: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            'tau': self.tau,
            'censored': self.censored,
            'sup_gevrey_sq': self.sup_gevrey_sq,
            'threshold': self.threshold,
            'origin': self.origin,
            'reached_horizon': self.reached_horizon,
        }


@dataclass
class StoppingRecord:
    """tau and alpha_nu samples of one or more trajectories"""
    horizon: float
    tau_samples: List[TauSample] = field(default_factory=list)
    alpha_nu_samples: List[float] = field(default_factory=list)

    def empirical_cdf(self, t_grid: Sequence[float]) -> np.ndarray:
        """P(tau < t) over clocks; censored clocks count as tau >= horizon"""
        if not self.tau_samples:
            raise DiagnosticError("No stopping-time samples", diagnostic="tau", available=0)
        stopped = np.array([s.tau for s in self.tau_samples if not s.censored])
        t_grid = np.asarray(t_grid, dtype=float)
        return np.array([np.sum(stopped < t) for t in t_grid], dtype=float) / len(self.tau_samples)

    def sup_mean(self) -> float:
        return float(np.mean([s.sup_gevrey_sq for s in self.tau_samples]))

    def to_dict(self) -> Dict[str, Any]:
        censored = sum(1 for s in self.tau_samples if s.censored)
        result = {
            'horizon': self.horizon,
            'clocks': len(self.tau_samples),
            'censored': censored,
            'sup_sampled_on_grid': True,
            'tau_samples': [s.to_dict() for s in self.tau_samples],
            'alpha_nu_samples': list(self.alpha_nu_samples),
        }
        if self.alpha_nu_samples:
            result['alpha_nu_mean'] = float(np.mean(self.alpha_nu_samples))
        return result


class StoppingTimeObserver(SampleObserver):
    """
    Samples tau = inf{t : 1 + ||X(t)||^2_{G(nu t, beta)} > 4 (||X(0)||^2 + 1)}

    Times are measured from the state that opens a clock, where the
    Gevrey weight is the plain H^1 norm. With ``restart`` set, a new clock
    opens at the first sampled state at least ``restart`` after the
    previous origin once the previous clock has closed. The recorded sup
    excludes the triggering point.
    """

    def __init__(self, nu: float, beta: float, horizon: float, restart: Optional[float] = None,
                 Bbar0: Optional[float] = None, alpha_cap: Optional[float] = None):
        super().__init__()
        _check_viscosity(nu)
        if not horizon > 0:
            raise SpectralDomainError(f"Horizon must be positive, got {horizon}", operation="tau")
        self.nu = nu
        self.beta = beta
        self.horizon = horizon
        self.restart = restart
        self.Bbar0 = Bbar0
        self.alpha_cap = alpha_cap
        self.record = StoppingRecord(horizon)
        self._clock: Optional[Dict[str, float]] = None
        self._next_origin: Optional[float] = 0.0
        self._last_time: Optional[float] = None

    def _open(self, state) -> None:
        x0_sq = sobolev_norm(state.field, 1.0) ** 2
        self._clock = {
            'origin': float(state.time),
            'threshold': 4.0 * (x0_sq + 1.0),
            'sup': x0_sq,
            'last': 0.0,
        }
        if self.Bbar0 is not None and self.alpha_cap is not None:
            self.record.alpha_nu_samples.append(
                estimate_alpha_nu(state.field, self.nu, self.beta, self.Bbar0, self.alpha_cap)
            )

    def _close(self, tau: float, censored: bool, reached_horizon: bool = True) -> None:
        clock = self._clock
        self.record.tau_samples.append(TauSample(
            tau=tau, censored=censored, sup_gevrey_sq=clock['sup'],
            threshold=clock['threshold'], origin=clock['origin'], reached_horizon=reached_horizon
        ))
        self._clock = None
        self._next_origin = clock['origin'] + self.restart if self.restart else None

    def observe(self, state) -> None:
        self._last_time = float(state.time)
        if self._clock is not None:
            elapsed = float(state.time) - self._clock['origin']
            gevrey_sq = weighted_gevrey_sq(state.field, self.nu * elapsed, self.beta).value
            if 1.0 + gevrey_sq > self._clock['threshold']:
                self._close(elapsed, censored=False)
            elif elapsed >= self.horizon:
                self._clock['sup'] = max(self._clock['sup'], gevrey_sq)
                self._close(self.horizon, censored=True)
            else:
                self._clock['sup'] = max(self._clock['sup'], gevrey_sq)
                self._clock['last'] = elapsed
        if self._clock is None and self._next_origin is not None:
            if state.time >= self._next_origin:
                self._open(state)

    def finish(self) -> StoppingRecord:
        """Close an open clock as censored at its last sampled time"""
        if self._clock is not None:
            self._close(self._clock['last'], censored=True, reached_horizon=False)
            self._next_origin = None
        return self.record

    def merge(self, other: "StoppingTimeObserver") -> "StoppingTimeObserver":
        self.finish()
        other_record = other.finish()
        self.record.tau_samples.extend(other_record.tau_samples)
        self.record.alpha_nu_samples.extend(other_record.alpha_nu_samples)
        self.samples_seen += other.samples_seen
        return self

    def summary(self) -> Dict[str, Any]:
        result = super().summary()
        result.update(self.finish().to_dict())
        return result


def estimate_tau(states: Iterable, nu: float, beta: float, horizon: float) -> TauSample:
    """tau of a single clock opened at the first state of ``states``"""
    observer = StoppingTimeObserver(nu, beta, horizon)
    for state in states:
        observer(state)
        if observer.record.tau_samples:
            break
    record = observer.finish()
    if not record.tau_samples:
        raise DiagnosticError("No states supplied", diagnostic="tau", available=0)
    return record.tau_samples[0]


@dataclass
class TauFit:
    """Least-squares fit P(tau < t) ~ a t^{1/2}"""
    a: float
    r_squared: float
    implied_K: Optional[float]
    identically_zero: bool
    t_grid: List[float]
    cdf: List[float]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'a': self.a,
            'r_squared': self.r_squared,
            'implied_K': self.implied_K,
            'identically_zero': self.identically_zero,
            't_grid': self.t_grid,
            'cdf': self.cdf,
        }


def tau_probability_bound_fit(record: StoppingRecord, t_grid: Optional[Sequence[float]] = None,
                              nu: Optional[float] = None, Bbar0: Optional[float] = None) -> TauFit:
    """
    Fit the empirical P(tau < t) by a t^{1/2} on the small-t range

    The default grid covers the first half of the horizon. The implied
    constant K = a nu^{5/2} / (Bbar0 + 1) is reported when nu and Bbar0
    are known.
    """
    if t_grid is None:
        t_grid = np.linspace(record.horizon / 40.0, record.horizon / 2.0, 20)
    t_grid = np.asarray(t_grid, dtype=float)
    cdf = record.empirical_cdf(t_grid)
    root_t = np.sqrt(t_grid)
    if not np.any(cdf > 0):
        return TauFit(0.0, 1.0, 0.0 if nu is not None and Bbar0 is not None else None, True,
                      t_grid.tolist(), cdf.tolist())
    a = float(root_t @ cdf / (root_t @ root_t))
    residual = cdf - a * root_t
    total = float(np.sum((cdf - cdf.mean()) ** 2))
    r_squared = 1.0 - float(residual @ residual) / total if total > 0 else 1.0
    implied = a * nu ** 2.5 / (Bbar0 + 1.0) if nu is not None and Bbar0 is not None else None
    return TauFit(a, r_squared, implied, False, t_grid.tolist(), cdf.tolist())
