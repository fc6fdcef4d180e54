"""
Transforms between stored coefficients and collocation samples on an
n x n x n grid of D = (0, 2 pi)^3, normalized so that

    u(xi) = sum_k x(k) exp(i k . xi)

The last axis is stored in real-to-complex layout; the kz = 0 plane is
filled on both halves so the inverse transform sees a Hermitian array.
"""

import math
from functools import lru_cache
from typing import Tuple

import numpy as np

from src.core.exceptions import SpectralDomainError
from .field import SpectralField
from .truncation import Truncation, project_modes


def minimum_grid_size(k_max: int) -> int:
    """Smallest grid resolving every retained mode without aliasing"""
    return 2 * k_max + 1


def dealiased_grid_size(k_max: int) -> int:
    """Even grid size n > 3 k_max, enough for exact quadratic products on the retained modes"""
    return 2 * math.ceil((3 * k_max + 1) / 2)


@lru_cache(maxsize=32)
def _grid_indices(k_max: int, n: int) -> Tuple[Tuple[np.ndarray, ...], Tuple[np.ndarray, ...], np.ndarray]:
    modes = Truncation(k_max).modes
    direct = (modes[:, 0] % n, modes[:, 1] % n, modes[:, 2])
    in_plane = modes[:, 2] == 0
    mirrored = ((-modes[in_plane, 0]) % n, (-modes[in_plane, 1]) % n, np.zeros(int(in_plane.sum()), dtype=int))
    return direct, mirrored, in_plane


def _check_grid(truncation: Truncation, n: int) -> None:
    if n < minimum_grid_size(truncation.k_max):
        raise SpectralDomainError(
            f"Grid size {n} cannot carry k_max={truncation.k_max}; "
            f"need at least {minimum_grid_size(truncation.k_max)}",
            operation="transform"
        )


def scatter_coefficients(truncation: Truncation, coefficients: np.ndarray, n: int) -> np.ndarray:
    """Place (M, ...) per-mode values into a real-to-complex spectral array (..., n, n, n//2+1)"""
    _check_grid(truncation, n)
    direct, mirrored, in_plane = _grid_indices(truncation.k_max, n)
    trailing = coefficients.shape[1:]
    spectral = np.zeros(trailing + (n, n, n // 2 + 1), dtype=np.complex128)
    values = np.moveaxis(coefficients, 0, -1)
    spectral[(Ellipsis,) + direct] = values
    spectral[(Ellipsis,) + mirrored] = np.conj(values[..., in_plane])
    return spectral


def gather_coefficients(truncation: Truncation, spectral: np.ndarray) -> np.ndarray:
    """Read per-mode values (M, ...) out of a real-to-complex spectral array"""
    n = spectral.shape[-3]
    _check_grid(truncation, n)
    direct, _, _ = _grid_indices(truncation.k_max, n)
    return np.moveaxis(spectral[(Ellipsis,) + direct], -1, 0)


def to_physical_components(truncation: Truncation, coefficients: np.ndarray, n: int) -> np.ndarray:
    """Samples of sum_k c(k) exp(i k . xi) for (M, ...) per-mode data"""
    spectral = scatter_coefficients(truncation, coefficients, n)
    return np.fft.irfftn(spectral, s=(n, n, n), axes=(-3, -2, -1)) * float(n ** 3)


def from_physical_components(truncation: Truncation, samples: np.ndarray) -> np.ndarray:
    """Per-mode Fourier coefficients (M, ...) of real samples (..., n, n, n)"""
    n = samples.shape[-1]
    spectral = np.fft.rfftn(samples, axes=(-3, -2, -1)) / float(n ** 3)
    return gather_coefficients(truncation, spectral)


def transform_to_physical(x: SpectralField, grid: int) -> np.ndarray:
    """
    Real velocity samples on the collocation grid

    Returns:
        Array of shape (3, grid, grid, grid)
    """
    return to_physical_components(x.truncation, x.coefficients, grid)


def transform_to_spectral(samples: np.ndarray, truncation: Truncation,
                          project: bool = False) -> SpectralField:
    """
    Inverse of transform_to_physical restricted to the truncation

    Args:
        samples: Real array of shape (3, n, n, n)
        truncation: Target mode set
        project: Apply the Leray projection to the gathered coefficients
    """
    samples = np.asarray(samples)
    if samples.ndim != 4 or samples.shape[0] != 3 or len(set(samples.shape[1:])) != 1:
        raise SpectralDomainError(
            f"Velocity samples must have shape (3, n, n, n), got {samples.shape}",
            operation="transform_to_spectral"
        )
    coefficients = from_physical_components(truncation, samples)
    if project:
        coefficients = project_modes(coefficients, truncation.modes)
    return SpectralField(truncation, coefficients)
