"""
Fourier-space representation of periodic, mean-zero, divergence-free fields on (0, 2 pi)^3
"""

from .truncation import Truncation, leray_project, polarization_basis, project_modes, is_representative
from .field import (
    SpectralField,
    GevreyEnergy,
    DEFAULT_EXPONENT_CAP,
    sobolev_norm,
    gevrey_norm,
    gevrey_inner,
    gevrey_inner_at,
    weighted_gevrey_sq,
    weighted_energy,
    apply_A_power,
    l2_inner,
    divergence_max,
    random_field,
)
from .transforms import (
    transform_to_physical,
    transform_to_spectral,
    dealiased_grid_size,
    minimum_grid_size,
)

__all__ = [
    'Truncation',
    'leray_project',
    'polarization_basis',
    'project_modes',
    'is_representative',
    'SpectralField',
    'GevreyEnergy',
    'DEFAULT_EXPONENT_CAP',
    'sobolev_norm',
    'gevrey_norm',
    'gevrey_inner',
    'gevrey_inner_at',
    'weighted_gevrey_sq',
    'weighted_energy',
    'apply_A_power',
    'l2_inner',
    'divergence_max',
    'random_field',
    'transform_to_physical',
    'transform_to_spectral',
    'dealiased_grid_size',
    'minimum_grid_size',
]
