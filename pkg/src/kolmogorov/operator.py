"""
Kolmogorov operator of the Galerkin system and the stationarity identity
"""

import logging
import math
from typing import Any, Dict, Iterable, NamedTuple, Optional, Tuple

import numpy as np

from src.core.base import SampleObserver
from src.dynamics import ForcingSpec, galerkin_drift
from src.measure import MomentAccumulator
from src.spectral import SpectralField, l2_inner, polarization_basis
from .functionals import SmoothFunctional

logger = logging.getLogger(__name__)


def _forcing_scale(x: SpectralField, spec: ForcingSpec) -> np.ndarray:
    return spec.mode_amplitudes * spec.gain_at(x)


def noise_trace(x: SpectralField, f: SmoothFunctional, spec: ForcingSpec, rotation: float = 0.0) -> float:
    """
    1/2 tr(phi phi* D^2 f(x)) in closed form

    Every real basis direction at (k, pol) has ||v||_s^2 = |k|^{2s}; the
    cosine and sine directions together give <w, v>^2 summed to
    2 |w(k) . e_pol|^2, which halves against the 1/2 of the trace.
    """
    truncation = x.truncation
    sigma_sq = _forcing_scale(x, spec) ** 2
    basis = polarization_basis(truncation.modes, rotation)
    total = 0.0
    for form in f.hessian_forms(x):
        if form.c:
            total += 2.0 * form.c * float(np.sum(sigma_sq * truncation.wavenumber_sq ** form.s))
        if form.d and form.w is not None:
            projections = np.einsum('mi,mpi->mp', form.w.coefficients, basis)
            total += form.d * float(np.sum(sigma_sq * np.sum(np.abs(projections) ** 2, axis=1)))
    return total


def noise_trace_explicit(x: SpectralField, f: SmoothFunctional, spec: ForcingSpec,
                         rotation: float = 0.0) -> float:
    """1/2 sum over an orthonormal real basis of sigma^2 D^2 f(x)[v, v], built direction by direction"""
    truncation = x.truncation
    sigma = _forcing_scale(x, spec)
    basis = polarization_basis(truncation.modes, rotation)
    total = 0.0
    for index in range(truncation.mode_count):
        if sigma[index] == 0:
            continue
        for pol in range(2):
            for phase in (1.0, 1j):
                coefficients = np.zeros((truncation.mode_count, 3), dtype=complex)
                coefficients[index] = phase * basis[index, pol] / math.sqrt(2.0)
                direction = SpectralField(truncation, coefficients)
                total += sigma[index] ** 2 * f.hessian_quadform(x, direction)
    return 0.5 * total


class KolmogorovTerms(NamedTuple):
    """L_N f(x) split into its noise trace and drift pairing"""
    trace: float
    drift: float

    @property
    def total(self) -> float:
        return self.trace + self.drift


def kolmogorov_terms(x: SpectralField, f: SmoothFunctional, spec: ForcingSpec, nu: float,
                     nonlinear: bool = True) -> KolmogorovTerms:
    drift = l2_inner(galerkin_drift(x, spec, nu, nonlinear), f.gradient(x))
    return KolmogorovTerms(noise_trace(x, f, spec), drift)


def apply_LN(x: SpectralField, f: SmoothFunctional, spec: ForcingSpec, nu: float,
             nonlinear: bool = True) -> float:
    """L_N f(x) = 1/2 tr(phi phi* D^2 f) - (nu A x + B(x) - g, Df)"""
    return kolmogorov_terms(x, f, spec, nu, nonlinear).total


def stationarity_residual(samples: Iterable[SpectralField], f: SmoothFunctional, spec: ForcingSpec,
                          nu: float, nonlinear: bool = True, max_batches: int = 64) -> Tuple[float, float]:
    """Mean and batch-means standard error of L_N f along stationary samples"""
    acc = MomentAccumulator(f.name, max_batches)
    for x in samples:
        acc.add(apply_LN(x, f, spec, nu, nonlinear))
    logger.info(f"Stationarity residual of {f.name}: {acc.mean:.6g} over {acc.count} samples")
    return acc.mean, acc.stderr


class KolmogorovObserver(SampleObserver):
    """
    Accumulates L_N f and its trace and drift parts for several functionals

    The separate parts are integrability diagnostics; the total is the
    stationarity residual.
    """

    def __init__(self, functionals: Iterable[SmoothFunctional], spec: ForcingSpec, nu: float,
                 nonlinear: bool = True, max_batches: int = 64):
        super().__init__()
        self.functionals = {f.name: f for f in functionals}
        self.spec = spec
        self.nu = nu
        self.nonlinear = nonlinear
        self.accumulators: Dict[str, Dict[str, MomentAccumulator]] = {
            name: {part: MomentAccumulator(f"{name}.{part}", max_batches) for part in ('total', 'trace', 'drift')}
            for name in self.functionals
        }

    def observe(self, state) -> None:
        for name, f in self.functionals.items():
            terms = kolmogorov_terms(state.field, f, self.spec, self.nu, self.nonlinear)
            parts = self.accumulators[name]
            parts['total'].add(terms.total)
            parts['trace'].add(terms.trace)
            parts['drift'].add(terms.drift)

    def merge(self, other: "KolmogorovObserver") -> "KolmogorovObserver":
        for name, parts in self.accumulators.items():
            for part, acc in parts.items():
                acc.merge(other.accumulators[name][part])
        self.samples_seen += other.samples_seen
        return self

    def residual(self, name: str) -> Tuple[float, float]:
        total = self.accumulators[name]['total']
        return total.mean, total.stderr

    def summary(self) -> Dict[str, Any]:
        result = super().summary()
        block: Dict[str, Any] = {}
        for name, parts in self.accumulators.items():
            entry: Dict[str, Optional[float]] = {'window_samples': parts['total'].count}
            if parts['total'].count >= 2:
                mean, stderr = self.residual(name)
                entry.update({
                    'residual_mean': mean,
                    'residual_stderr': stderr,
                    'trace_mean': parts['trace'].mean,
                    'drift_mean': parts['drift'].mean,
                    'residual_over_stderr': abs(mean) / stderr if stderr > 0 else None,
                })
            block[name] = entry
        result['kolmogorov'] = block
        return result
