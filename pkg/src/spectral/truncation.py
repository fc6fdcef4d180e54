"""
Wavevector lattice, Galerkin truncation and the solenoidal polarization basis
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Sequence, Tuple

import numpy as np

from src.core.exceptions import SpectralDomainError


def is_representative(k: Sequence[int]) -> bool:
    """True for the member of a +/-k pair whose last nonzero component is positive"""
    kx, ky, kz = (int(c) for c in k)
    if kz != 0:
        return kz > 0
    if ky != 0:
        return ky > 0
    return kx > 0


def leray_project(c: np.ndarray, k: Sequence[int]) -> np.ndarray:
    """
    Project a complex 3-vector onto the plane orthogonal to k

    Args:
        c: Complex (or real) 3-vector
        k: Nonzero wavevector

    Returns:
        c - (k.c) k / |k|^2
    """
    k_vec = np.asarray(k, dtype=float)
    k_sq = float(k_vec @ k_vec)
    if k_sq == 0.0:
        raise SpectralDomainError(
            "Leray projection is undefined at the zero wavevector",
            operation="leray_project", wavevector=tuple(np.asarray(k, dtype=int))
        )
    c = np.asarray(c)
    return c - (k_vec @ c) * k_vec / k_sq


def project_modes(coefficients: np.ndarray, modes: np.ndarray) -> np.ndarray:
    """Vectorized Leray projection of an (M, 3) coefficient array"""
    k = modes.astype(float)
    k_sq = np.einsum('mi,mi->m', k, k)
    k_dot_c = np.einsum('mi,mi->m', k, coefficients)
    return coefficients - (k_dot_c / k_sq)[:, None] * k


def polarization_basis(modes: np.ndarray, rotation: float = 0.0) -> np.ndarray:
    """
    Two real unit vectors orthogonal to each wavevector

    The first vector is obtained by Gram-Schmidt of the axis carrying the
    smallest |k_i| (lowest index on ties) against k; the second completes
    the right-handed frame k/|k| x e1. A nonzero ``rotation`` turns the
    pair by that angle inside the plane orthogonal to k.

    Returns:
        Array of shape (M, 2, 3)
    """
    k = modes.astype(float)
    k_hat = k / np.linalg.norm(k, axis=1)[:, None]
    axis = np.argmin(np.abs(modes), axis=1)
    seed_vectors = np.eye(3)[axis]
    e1 = seed_vectors - np.einsum('mi,mi->m', seed_vectors, k_hat)[:, None] * k_hat
    e1 /= np.linalg.norm(e1, axis=1)[:, None]
    e2 = np.cross(k_hat, e1)
    if rotation:
        cos_r, sin_r = np.cos(rotation), np.sin(rotation)
        e1, e2 = cos_r * e1 + sin_r * e2, -sin_r * e1 + cos_r * e2
    return np.stack([e1, e2], axis=1)


@dataclass(frozen=True)
class Truncation:
    """
    Galerkin truncation P_N: all nonzero integer wavevectors with |k|^2 <= k_max^2

    Only one representative of every +/-k pair is stored; the partner
    carries the conjugate coefficient.
    """
    k_max: int

    def __post_init__(self):
        if int(self.k_max) != self.k_max or self.k_max < 1:
            raise SpectralDomainError(
                f"Truncation k_max must be a positive integer, got {self.k_max}",
                operation="Truncation"
            )

    @cached_property
    def modes(self) -> np.ndarray:
        """Representative wavevectors, shape (M, 3), ordered by |k|^2 then lexicographically"""
        r = np.arange(-self.k_max, self.k_max + 1)
        grid = np.stack(np.meshgrid(r, r, r, indexing='ij'), axis=-1).reshape(-1, 3)
        norm_sq = np.einsum('mi,mi->m', grid, grid)
        inside = grid[(norm_sq <= self.k_max ** 2) & (norm_sq > 0)]
        kept = np.array([k for k in inside if is_representative(k)], dtype=np.int64)
        order = np.lexsort((kept[:, 2], kept[:, 1], kept[:, 0], np.einsum('mi,mi->m', kept, kept)))
        kept = kept[order]
        kept.setflags(write=False)
        return kept

    @property
    def mode_count(self) -> int:
        """Number of stored representatives"""
        return len(self.modes)

    @property
    def eigenvalue_count(self) -> int:
        """Dimension N of P_N H: two polarizations for every lattice mode of the full set"""
        return 4 * self.mode_count

    @cached_property
    def wavenumber_sq(self) -> np.ndarray:
        """|k|^2 per representative"""
        values = np.einsum('mi,mi->m', self.modes, self.modes).astype(float)
        values.setflags(write=False)
        return values

    @cached_property
    def wavenumber(self) -> np.ndarray:
        """|k| per representative"""
        values = np.sqrt(self.wavenumber_sq)
        values.setflags(write=False)
        return values

    @cached_property
    def polarizations(self) -> np.ndarray:
        """Default solenoidal basis, shape (M, 2, 3)"""
        basis = polarization_basis(self.modes)
        basis.setflags(write=False)
        return basis

    @cached_property
    def shell_index(self) -> np.ndarray:
        """Integer shell n with |k| in [n - 1/2, n + 1/2)"""
        shells = np.floor(self.wavenumber + 0.5).astype(int)
        shells.setflags(write=False)
        return shells

    @cached_property
    def _index(self) -> Dict[Tuple[int, int, int], int]:
        return {tuple(int(c) for c in k): i for i, k in enumerate(self.modes)}

    def contains(self, k: Sequence[int]) -> bool:
        """True when k belongs to the full symmetric mode set"""
        k = tuple(int(c) for c in k)
        norm_sq = sum(c * c for c in k)
        return 0 < norm_sq <= self.k_max ** 2

    def locate(self, k: Sequence[int]) -> Tuple[int, bool]:
        """
        Find the storage slot of any wavevector of the full set

        Returns:
            (representative index, True when k is the conjugate partner)
        """
        key = tuple(int(c) for c in k)
        if not self.contains(key):
            raise SpectralDomainError(
                f"Wavevector {key} lies outside the truncation |k| <= {self.k_max}",
                operation="locate", wavevector=key
            )
        if key in self._index:
            return self._index[key], False
        return self._index[tuple(-c for c in key)], True

    def full_modes(self) -> np.ndarray:
        """All wavevectors of the symmetric set: representatives followed by their negatives"""
        return np.concatenate([self.modes, -self.modes])
