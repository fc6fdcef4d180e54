"""
Divergence-free, mean-zero, real velocity fields in Fourier representation,
together with the Sobolev and Gevrey norms of the Stokes operator A.

All sums run over the full symmetric mode set; since the stored
representative and its conjugate partner have equal modulus, every
quadratic sum is twice the sum over representatives.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Mapping, NamedTuple, Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from src.core.exceptions import SpectralDomainError
from src.core.models import GevreyParams
from .truncation import Truncation, project_modes

logger = logging.getLogger(__name__)

DEFAULT_EXPONENT_CAP = 700.0
INCOMPRESSIBILITY_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients x(k) of a real solenoidal field, one row per representative"""
    truncation: Truncation
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=np.complex128)
        expected = (self.truncation.mode_count, 3)
        if coefficients.shape != expected:
            raise SpectralDomainError(
                f"Coefficient array has shape {coefficients.shape}, expected {expected}",
                operation="SpectralField"
            )
        coefficients.setflags(write=False)
        object.__setattr__(self, 'coefficients', coefficients)

    @classmethod
    def zeros(cls, truncation: Truncation) -> "SpectralField":
        return cls(truncation, np.zeros((truncation.mode_count, 3), dtype=np.complex128))

    @classmethod
    def from_modes(cls, truncation: Truncation, modes: Mapping[Sequence[int], Sequence[complex]],
                   project: bool = False) -> "SpectralField":
        """
        Build a field from a {wavevector: coefficient} mapping

        Either member of a +/-k pair may be given; the partner receives
        the conjugate. Without ``project`` the data must already be
        divergence-free.
        """
        coefficients = np.zeros((truncation.mode_count, 3), dtype=np.complex128)
        for k, value in modes.items():
            index, conjugate = truncation.locate(k)
            value = np.asarray(value, dtype=np.complex128)
            coefficients[index] = np.conj(value) if conjugate else value
        if project:
            coefficients = project_modes(coefficients, truncation.modes)
        field = cls(truncation, coefficients)
        if not project:
            field.validate()
        return field

    def validate(self, tolerance: float = INCOMPRESSIBILITY_TOLERANCE) -> None:
        """Raise when k . x(k) does not vanish relative to the field size"""
        scale = max(float(np.max(np.abs(self.coefficients), initial=0.0)), 1.0)
        worst = divergence_max(self)
        if worst > tolerance * scale * self.truncation.k_max:
            raise SpectralDomainError(
                f"Field is not divergence-free: max |k.x(k)| = {worst:.3e}",
                operation="validate"
            )

    def coeff(self, k: Sequence[int]) -> np.ndarray:
        """Coefficient at any wavevector of the full set"""
        index, conjugate = self.truncation.locate(k)
        value = self.coefficients[index]
        return np.conj(value) if conjugate else value.copy()

    def _check_compatible(self, other: "SpectralField", operation: str) -> None:
        if other.truncation != self.truncation:
            raise SpectralDomainError(
                f"Truncation mismatch: k_max {self.truncation.k_max} vs {other.truncation.k_max}",
                operation=operation
            )

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_compatible(other, "add")
        return SpectralField(self.truncation, self.coefficients + other.coefficients)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_compatible(other, "subtract")
        return SpectralField(self.truncation, self.coefficients - other.coefficients)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.truncation, self.coefficients * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.truncation, -self.coefficients)

    def __repr__(self) -> str:
        return f"SpectralField(k_max={self.truncation.k_max}, modes={self.truncation.mode_count})"


class GevreyEnergy(NamedTuple):
    """Gevrey energy sum with its logarithm and the log-domain flag"""
    value: float
    log_value: float
    overflowed: bool


def _mode_energy(x: SpectralField) -> np.ndarray:
    return np.einsum('mi,mi->m', x.coefficients, x.coefficients.conj()).real


def weighted_energy(x: SpectralField, weights: np.ndarray) -> float:
    """Sum over the full set of weights(k) |x(k)|^2"""
    return 2.0 * float(weights @ _mode_energy(x))


def sobolev_norm(x: SpectralField, m: float) -> float:
    """||x||_m = |A^{m/2} x| = sqrt(sum |k|^{2m} |x(k)|^2)"""
    return float(np.sqrt(weighted_energy(x, x.truncation.wavenumber_sq ** m)))


def l2_inner(x: SpectralField, y: SpectralField) -> float:
    """Real inner product of H: sum over the full set of Re(x(k) . conj(y(k)))"""
    x._check_compatible(y, "l2_inner")
    return 2.0 * float(np.sum(x.coefficients * y.coefficients.conj()).real)


def weighted_gevrey_sq(x: SpectralField, radius: float, beta: float,
                       exponent_cap: float = DEFAULT_EXPONENT_CAP) -> GevreyEnergy:
    """
    Gevrey energy sum |k|^2 exp(2 radius |k|^beta) |x(k)|^2 at any radius >= 0

    When some exponent exceeds ``exponent_cap`` the sum is accumulated in
    the log domain and the result is flagged.
    """
    if radius < 0:
        raise SpectralDomainError(f"Gevrey radius must be nonnegative, got {radius}",
                                  operation="weighted_gevrey_sq")
    truncation = x.truncation
    exponents = 2.0 * radius * truncation.wavenumber ** beta
    energy = _mode_energy(x)
    if float(np.max(exponents, initial=0.0)) <= exponent_cap:
        value = weighted_energy(x, truncation.wavenumber_sq * np.exp(exponents))
        log_value = float(np.log(value)) if value > 0 else float('-inf')
        return GevreyEnergy(value, log_value, False)

    support = energy > 0
    if not np.any(support):
        return GevreyEnergy(0.0, float('-inf'), True)
    log_terms = exponents[support] + np.log(truncation.wavenumber_sq[support]) + np.log(energy[support])
    log_value = float(np.log(2.0) + logsumexp(log_terms))
    with np.errstate(over='ignore'):
        value = float(np.exp(log_value))
    return GevreyEnergy(value, log_value, True)


def gevrey_norm(x: SpectralField, g: GevreyParams,
                exponent_cap: float = DEFAULT_EXPONENT_CAP) -> float:
    """||x||_{G(alpha, beta)}"""
    energy = weighted_gevrey_sq(x, g.alpha, g.beta, exponent_cap)
    if energy.overflowed:
        logger.warning(
            f"Gevrey exponent above cap {exponent_cap} for alpha={g.alpha}, beta={g.beta}; "
            f"log-domain value ln||x||^2 = {energy.log_value:.6g}"
        )
    return float(np.sqrt(energy.value))


def gevrey_inner(x: SpectralField, y: SpectralField, g: GevreyParams) -> float:
    """(x, y)_{G(alpha, beta)}"""
    return gevrey_inner_at(x, y, g.alpha, g.beta)


def gevrey_inner_at(x: SpectralField, y: SpectralField, radius: float, beta: float) -> float:
    """Gevrey inner product at an arbitrary radius >= 0"""
    x._check_compatible(y, "gevrey_inner")
    truncation = x.truncation
    weights = truncation.wavenumber_sq * np.exp(2.0 * radius * truncation.wavenumber ** beta)
    pairing = np.einsum('mi,mi->m', x.coefficients, y.coefficients.conj()).real
    return 2.0 * float(weights @ pairing)


def apply_A_power(x: SpectralField, s: float) -> SpectralField:
    """A^s x: every coefficient scaled by |k|^{2s}"""
    scale = x.truncation.wavenumber_sq ** s
    return SpectralField(x.truncation, x.coefficients * scale[:, None])


def divergence_max(x: SpectralField) -> float:
    """max over modes of |k . x(k)|"""
    if x.truncation.mode_count == 0:
        return 0.0
    return float(np.max(np.abs(np.einsum('mi,mi->m', x.truncation.modes.astype(float), x.coefficients))))


def random_field(truncation: Truncation, spectrum: Callable[[np.ndarray], np.ndarray],
                 rng: np.random.Generator, polarizations: Optional[np.ndarray] = None) -> SpectralField:
    """
    Random solenoidal field with E|x(k)|^2 = spectrum(|k|)^2

    Args:
        truncation: Mode set
        spectrum: Maps the array of |k| to per-mode amplitudes
        rng: Random stream
        polarizations: Optional (M, 2, 3) basis, defaults to the truncation basis
    """
    basis = truncation.polarizations if polarizations is None else polarizations
    amplitude = np.asarray(spectrum(truncation.wavenumber), dtype=float)
    amplitude = np.broadcast_to(amplitude, (truncation.mode_count,))
    shape = (truncation.mode_count, 2)
    draws = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    coefficients = np.einsum('mp,mpi->mi', draws, basis) * (amplitude / np.sqrt(2.0))[:, None]
    return SpectralField(truncation, coefficients)
