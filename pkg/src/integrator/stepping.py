"""
Time discretization of the Galerkin system

Both schemes treat the viscous term per mode and the nonlinear and
stochastic terms by explicit Euler-Maruyama increments. Noise is drawn
per representative and polarization as a standard complex Gaussian
(E|eta|^2 = 1); the conjugate partner is implied.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from src.core.exceptions import BlowUpError, ConfigurationError, SpectralDomainError
from src.core.models import IntegrationScheme
from src.dynamics import ForcingSpec, bilinear_B
from src.spectral import SpectralField, Truncation, sobolev_norm

logger = logging.getLogger(__name__)

SEMI_IMPLICIT_STABILITY_BUDGET = 2.0


@dataclass(frozen=True)
class SimConfig:
    """Run parameters of one Galerkin trajectory or ensemble"""
    nu: float
    truncation: Truncation
    dt: float
    t_sample: float
    t_burn: Optional[float] = None
    sample_stride: int = 1
    scheme: IntegrationScheme = IntegrationScheme.EXP_EULER
    seed: int = 0
    ensemble_size: int = 1
    nonlinear: bool = True
    checkpoint_every: int = 0

    def __post_init__(self):
        if not 0 < self.nu <= 1:
            raise ConfigurationError(f"Viscosity must lie in (0, 1], got {self.nu}", config_key="nu")
        if not self.dt > 0:
            raise ConfigurationError(f"Time step must be positive, got {self.dt}", config_key="dt")
        if not self.t_sample > 0:
            raise ConfigurationError(f"Sampling window must be positive, got {self.t_sample}",
                                     config_key="t_sample")
        if self.t_burn is None:
            object.__setattr__(self, 't_burn', 10.0 / self.nu)
        if self.t_burn < 0:
            raise ConfigurationError(f"Burn-in must be nonnegative, got {self.t_burn}", config_key="t_burn")
        if self.sample_stride < 1:
            raise ConfigurationError(f"Sample stride must be positive, got {self.sample_stride}",
                                     config_key="sample_stride")
        if self.ensemble_size < 1:
            raise ConfigurationError(f"Ensemble size must be positive, got {self.ensemble_size}",
                                     config_key="ensemble.size")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(f"Seed must be a 64-bit unsigned integer, got {self.seed}",
                                     config_key="rng.seed")
        if self.checkpoint_every < 0:
            raise ConfigurationError(f"Checkpoint interval must be nonnegative, got {self.checkpoint_every}",
                                     config_key="checkpoint.every")
        stiffness = self.dt * self.nu * self.truncation.k_max ** 2
        if self.scheme == IntegrationScheme.SEMI_IMPLICIT and stiffness > SEMI_IMPLICIT_STABILITY_BUDGET:
            logger.warning(
                f"dt * nu * k_max^2 = {stiffness:.3g} exceeds the semi-implicit budget "
                f"{SEMI_IMPLICIT_STABILITY_BUDGET}"
            )

    @property
    def burn_steps(self) -> int:
        return int(round(self.t_burn / self.dt))

    @property
    def sample_steps(self) -> int:
        return int(round(self.t_sample / self.dt))

    @property
    def total_steps(self) -> int:
        return self.burn_steps + self.sample_steps

    @property
    def config_hash(self) -> int:
        """64-bit digest of the fields that determine the dynamics"""
        identity = {
            'nu': self.nu,
            'k_max': self.truncation.k_max,
            'dt': self.dt,
            'scheme': self.scheme.value,
            'nonlinear': self.nonlinear,
        }
        digest = hashlib.blake2b(json.dumps(identity, sort_keys=True).encode('utf-8'), digest_size=8)
        return int.from_bytes(digest.digest(), 'little')

    def to_dict(self) -> Dict[str, Any]:
        return {
            'nu': self.nu,
            'k_max': self.truncation.k_max,
            'dt': self.dt,
            't_sample': self.t_sample,
            't_burn': self.t_burn,
            'sample_stride': self.sample_stride,
            'scheme': self.scheme.value,
            'seed': self.seed,
            'ensemble_size': self.ensemble_size,
            'nonlinear': self.nonlinear,
            'checkpoint_every': self.checkpoint_every,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SimConfig":
        return cls(
            nu=float(data['nu']),
            truncation=Truncation(int(data['k_max'])),
            dt=float(data['dt']),
            t_sample=float(data['t_sample']),
            t_burn=float(data['t_burn']),
            sample_stride=int(data.get('sample_stride', 1)),
            scheme=IntegrationScheme(data.get('scheme', IntegrationScheme.EXP_EULER.value)),
            seed=int(data.get('seed', 0)),
            ensemble_size=int(data.get('ensemble_size', 1)),
            nonlinear=bool(data.get('nonlinear', True)),
            checkpoint_every=int(data.get('checkpoint_every', 0)),
        )


@dataclass
class TrajectoryState:
    """Field, time and random stream of one trajectory"""
    field: SpectralField
    time: float
    rng: np.random.Generator = field(repr=False)
    steps: int = 0


def make_stream(seed: int, member: int = 0) -> np.random.Generator:
    """Independent stream for ensemble member ``member`` of a seeded run"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(member)])))


def initial_state(cfg: SimConfig, member: int = 0,
                  field: Optional[SpectralField] = None) -> TrajectoryState:
    """Zero (or given) initial data at t = 0 with the member's stream"""
    if field is None:
        field = SpectralField.zeros(cfg.truncation)
    elif field.truncation != cfg.truncation:
        raise SpectralDomainError("Initial data truncation does not match the run", operation="initial_state")
    return TrajectoryState(field, 0.0, make_stream(cfg.seed, member))


def draw_noise(truncation: Truncation, rng: np.random.Generator) -> np.ndarray:
    """Standard complex Gaussian increments on the solenoidal basis, shape (M, 3)"""
    shape = (truncation.mode_count, 2)
    draws = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return np.einsum('mp,mpi->mi', draws, truncation.polarizations)


def norm_snapshot(x: SpectralField) -> Dict[str, float]:
    return {
        'energy': sobolev_norm(x, 0.0) ** 2,
        'enstrophy': sobolev_norm(x, 1.0) ** 2,
    }


def step(state: TrajectoryState, cfg: SimConfig, spec: ForcingSpec) -> TrajectoryState:
    """
    Advance one time step

    Raises:
        BlowUpError: when the new coefficients are not finite
    """
    u = state.field
    truncation = cfg.truncation
    if u.truncation != truncation:
        raise SpectralDomainError("State truncation does not match the run configuration", operation="step")

    rate = cfg.nu * truncation.wavenumber_sq
    explicit = spec.g_field.coefficients
    if cfg.nonlinear:
        explicit = explicit - bilinear_B(u).coefficients
    sigma = spec.mode_amplitudes * spec.gain_at(u)
    noise = draw_noise(truncation, state.rng)
    dt = cfg.dt

    with np.errstate(over='ignore', invalid='ignore'):
        if cfg.scheme == IntegrationScheme.EXP_EULER:
            decay = np.exp(-rate * dt)
            spread = sigma * np.sqrt(-np.expm1(-2.0 * rate * dt) / (2.0 * rate))
            coefficients = decay[:, None] * (u.coefficients + dt * explicit) + spread[:, None] * noise
        else:
            kick = sigma * np.sqrt(dt)
            coefficients = (u.coefficients + dt * explicit + kick[:, None] * noise) / (1.0 + rate * dt)[:, None]

    new_time = state.time + dt
    if not np.all(np.isfinite(coefficients)):
        snapshot = norm_snapshot(u)
        logger.error(f"Non-finite coefficients at t={new_time:.6g}; last finite energy {snapshot['energy']:.6g}")
        raise BlowUpError(f"Trajectory blew up at t={new_time:.6g}", time=new_time, norm_snapshot=snapshot)
    return TrajectoryState(SpectralField(truncation, coefficients), new_time, state.rng, state.steps + 1)
