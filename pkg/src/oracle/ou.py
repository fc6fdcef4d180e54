"""
Stochastic Stokes system (B disabled, g = 0): every polarized mode is an
independent Ornstein-Uhlenbeck process

    d x = -nu |k|^2 x dt + sigma_k dW

with stationary variance sigma_k^2 / (2 nu |k|^2).
"""

from dataclasses import dataclass

import numpy as np

from src.core.exceptions import OracleError
from src.dynamics import ForcingSpec, noise_amplitude
from src.spectral import SpectralField, Truncation

# Irrational direction, never parallel to an integer wavevector
_REFERENCE_DIRECTION = np.array([1.0, np.sqrt(2.0), np.sqrt(3.0)])


@dataclass(frozen=True)
class OuSpec:
    """Linear stochastic Stokes system with zero deterministic forcing"""
    nu: float
    forcing: ForcingSpec

    def __post_init__(self):
        if not 0 < self.nu:
            raise OracleError(f"Viscosity must be positive, got {self.nu}", oracle="OuSpec")
        if self.forcing.has_forcing_field:
            raise OracleError("Ornstein-Uhlenbeck reference requires g = 0", oracle="OuSpec")

    @property
    def truncation(self) -> Truncation:
        return self.forcing.truncation


def ou_exact_second_moment(spec: OuSpec, m: float) -> float:
    """E||X||_m^2 = sum over k and pol of |k|^{2m} sigma_k^2 / (2 nu |k|^2)"""
    total = 0.0
    for k in spec.truncation.full_modes():
        k_sq = float(np.dot(k, k))
        sigma = noise_amplitude(spec.forcing, k)
        total += 2.0 * k_sq ** m * sigma ** 2 / (2.0 * spec.nu * k_sq)
    return total


def _independent_basis(k: np.ndarray) -> np.ndarray:
    k_hat = k / np.linalg.norm(k)
    e1 = np.cross(k_hat, _REFERENCE_DIRECTION)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(k_hat, e1)
    return np.stack([e1, e2])


def ou_sample_stationary(spec: OuSpec, rng: np.random.Generator) -> SpectralField:
    """One exact draw from the Gaussian invariant law"""
    truncation = spec.truncation
    coefficients = np.zeros((truncation.mode_count, 3), dtype=np.complex128)
    for row, k in enumerate(truncation.modes):
        k_float = k.astype(float)
        k_sq = float(k_float @ k_float)
        std = noise_amplitude(spec.forcing, k) / np.sqrt(2.0 * spec.nu * k_sq)
        draws = (rng.standard_normal(2) + 1j * rng.standard_normal(2)) / np.sqrt(2.0)
        coefficients[row] = std * (draws @ _independent_basis(k_float))
    return SpectralField(truncation, coefficients)
