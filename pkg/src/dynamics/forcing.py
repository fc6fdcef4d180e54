"""
Noise covariance and deterministic forcing of the Galerkin system

The noise is additive and diagonal in the solenoidal Fourier basis:
every representative k receives the same amplitude sigma_k on both
polarizations. Sums "over k and pol" below run over the full symmetric
mode set, so they are four times the sum over representatives.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np

from src.core.exceptions import SpectralDomainError
from src.core.models import ForcingFamily, GevreyParams
from src.spectral import (
    Truncation,
    SpectralField,
    sobolev_norm,
    weighted_gevrey_sq,
)

logger = logging.getLogger(__name__)

# Full-set lattice modes times polarizations per representative
MODE_MULTIPLICITY = 4.0


def amplitude_rule(family: ForcingFamily, amplitude: float, r: float,
                   gevrey: Optional[GevreyParams], wavenumber: np.ndarray,
                   cutoff: Optional[float] = None) -> np.ndarray:
    """sigma(|k|) for an array of wavenumbers"""
    wavenumber = np.asarray(wavenumber, dtype=float)
    sigma = amplitude * wavenumber ** (-r)
    if family == ForcingFamily.GEVREY:
        sigma = sigma * np.exp(-gevrey.alpha * wavenumber ** gevrey.beta)
    if cutoff is not None:
        sigma = np.where(wavenumber <= cutoff + 1e-12, sigma, 0.0)
    return sigma


@dataclass(frozen=True, eq=False)
class ForcingSpec:
    """
    Diagonal noise covariance phi and deterministic forcing g

    Args:
        family: Spectral decay family of sigma_k
        amplitude: Overall noise amplitude (>= 0)
        r: Algebraic decay exponent (> 0)
        truncation: Mode set the forcing lives on
        gevrey: Gevrey class of the noise, required for the gevrey family
        g_field: Deterministic divergence-free forcing, zero when omitted
        cutoff: Optional band limit, sigma_k = 0 for |k| > cutoff
        gain: Optional scalar gain m(||x||_0) in [0, 1] multiplying the noise
    """
    family: ForcingFamily
    amplitude: float
    r: float
    truncation: Truncation
    gevrey: Optional[GevreyParams] = None
    g_field: Optional[SpectralField] = None
    cutoff: Optional[float] = None
    gain: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.amplitude < 0:
            raise SpectralDomainError(f"Noise amplitude must be nonnegative, got {self.amplitude}",
                                      operation="ForcingSpec")
        if not self.r > 0:
            raise SpectralDomainError(f"Decay exponent r must be positive, got {self.r}",
                                      operation="ForcingSpec")
        if self.family == ForcingFamily.GEVREY and self.gevrey is None:
            raise SpectralDomainError("Gevrey forcing family requires Gevrey parameters",
                                      operation="ForcingSpec")
        if self.g_field is None:
            object.__setattr__(self, 'g_field', SpectralField.zeros(self.truncation))
        elif self.g_field.truncation != self.truncation:
            raise SpectralDomainError(
                f"Forcing field truncation k_max={self.g_field.truncation.k_max} "
                f"does not match k_max={self.truncation.k_max}",
                operation="ForcingSpec"
            )
        else:
            self.g_field.validate()

    @cached_property
    def mode_amplitudes(self) -> np.ndarray:
        """sigma_k per representative"""
        sigma = amplitude_rule(self.family, self.amplitude, self.r, self.gevrey,
                               self.truncation.wavenumber, self.cutoff)
        sigma.setflags(write=False)
        return sigma

    @property
    def has_forcing_field(self) -> bool:
        return bool(np.any(self.g_field.coefficients))

    def gain_at(self, x: SpectralField) -> float:
        """Noise gain m(||x||_0), 1 for purely additive noise"""
        if self.gain is None:
            return 1.0
        value = float(self.gain(sobolev_norm(x, 0.0)))
        if not 0.0 <= value <= 1.0:
            raise SpectralDomainError(f"Noise gain must lie in [0, 1], got {value}",
                                      operation="gain")
        return value

    def with_truncation(self, truncation: Truncation) -> "ForcingSpec":
        """Same covariance rule on another mode set (forcing field dropped)"""
        return ForcingSpec(self.family, self.amplitude, self.r, truncation,
                           gevrey=self.gevrey, cutoff=self.cutoff, gain=self.gain)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'family': self.family.value,
            'amplitude': self.amplitude,
            'r': self.r,
            'alpha': self.gevrey.alpha if self.gevrey else None,
            'beta': self.gevrey.beta if self.gevrey else None,
            'cutoff': self.cutoff,
            'k_max': self.truncation.k_max,
            'forcing_field': self.has_forcing_field,
        }


@dataclass(frozen=True)
class ForcingConstants:
    """B_p, Bbar_p and the Gevrey injection constant B0' of a forcing"""
    p: int
    B_p: float
    Bbar_p: float
    B0_prime: Optional[float]
    nu: float
    noise_sum: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'p': self.p,
            'B_p': self.B_p,
            'Bbar_p': self.Bbar_p,
            'B0_prime': self.B0_prime,
            'nu': self.nu,
            'noise_sum': self.noise_sum,
        }


def noise_amplitude(spec: ForcingSpec, k: Sequence[int]) -> float:
    """sigma_k for any wavevector of the truncation"""
    spec.truncation.locate(k)
    wavenumber = float(np.linalg.norm(np.asarray(k, dtype=float)))
    return float(amplitude_rule(spec.family, spec.amplitude, spec.r, spec.gevrey,
                                np.array([wavenumber]), spec.cutoff)[0])


def noise_power_sum(spec: ForcingSpec, p: float) -> float:
    """sum over k and pol of |k|^{2p} sigma_k^2"""
    sigma = spec.mode_amplitudes
    return MODE_MULTIPLICITY * float(np.sum(spec.truncation.wavenumber_sq ** p * sigma ** 2))


def gevrey_noise_sum(spec: ForcingSpec, radius: float, beta: float) -> float:
    """sum over k and pol of |k|^2 exp(2 radius |k|^beta) sigma_k^2"""
    truncation = spec.truncation
    weights = truncation.wavenumber_sq * np.exp(2.0 * radius * truncation.wavenumber ** beta)
    return MODE_MULTIPLICITY * float(np.sum(weights * spec.mode_amplitudes ** 2))


def forcing_constants(spec: ForcingSpec, p: int, nu: float,
                      gevrey: Optional[GevreyParams] = None) -> ForcingConstants:
    """
    Evaluate B_p, Bbar_p and B0' for a forcing

    Args:
        spec: Forcing specification
        p: Sobolev order (>= 0)
        nu: Viscosity
        gevrey: Gevrey class for B0', defaults to the forcing's own class

    Returns:
        ForcingConstants; B0_prime is None when no Gevrey class is known
    """
    if p < 0:
        raise SpectralDomainError(f"Order p must be nonnegative, got {p}", operation="forcing_constants")
    noise_sum = noise_power_sum(spec, p)
    g_sq = sobolev_norm(spec.g_field, p - 1.0) ** 2
    gevrey = gevrey or spec.gevrey
    b0_prime = None
    if gevrey is not None:
        g_gevrey = weighted_gevrey_sq(spec.g_field, gevrey.alpha, gevrey.beta).value
        b0_prime = gevrey_noise_sum(spec, gevrey.alpha, gevrey.beta) + g_gevrey
    if spec.gain is not None:
        logger.debug("Forcing constants evaluated for the gain-1 envelope")
    return ForcingConstants(
        p=p,
        B_p=noise_sum + g_sq,
        Bbar_p=noise_sum + g_sq / nu,
        B0_prime=b0_prime,
        nu=nu,
        noise_sum=noise_sum,
    )
