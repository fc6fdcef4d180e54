"""
Pseudo-spectral nonlinear term and the Galerkin drift

B(u) = pi((u . grad) u) is evaluated in divergence form
(u . grad) u_i = d_j (u_i u_j) from the six distinct products u_i u_j,
computed on a grid of n > 3 k_max points per axis so every quadratic
product is exact on the retained modes.
"""

import numpy as np

from src.spectral import SpectralField, dealiased_grid_size, project_modes
from src.spectral.transforms import to_physical_components, from_physical_components
from .forcing import ForcingSpec

# (i, j) pairs of the symmetric product tensor, in storage order
PRODUCT_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
_PAIR_SLOT = {pair: slot for slot, pair in enumerate(PRODUCT_PAIRS)}
_PAIR_SLOT.update({(j, i): slot for (i, j), slot in list(_PAIR_SLOT.items())})


def nonlinear_coefficients(u: SpectralField) -> np.ndarray:
    """Unprojected (u . grad) u per representative, shape (M, 3)"""
    truncation = u.truncation
    n = dealiased_grid_size(truncation.k_max)
    velocity = to_physical_components(truncation, u.coefficients, n)
    products = np.stack([velocity[i] * velocity[j] for i, j in PRODUCT_PAIRS])
    product_hat = from_physical_components(truncation, products)

    ik = 1j * truncation.modes.astype(float)
    advection = np.zeros((truncation.mode_count, 3), dtype=np.complex128)
    for i in range(3):
        for j in range(3):
            advection[:, i] += ik[:, j] * product_hat[:, _PAIR_SLOT[(i, j)]]
    return advection


def bilinear_B(u: SpectralField) -> SpectralField:
    """P_N pi((u . grad) u), dealiased and Leray-projected"""
    advection = nonlinear_coefficients(u)
    return SpectralField(u.truncation, project_modes(advection, u.truncation.modes))


def galerkin_drift(u: SpectralField, spec: ForcingSpec, nu: float,
                   nonlinear: bool = True) -> SpectralField:
    """
    Drift of the Galerkin system: -nu A u - P_N B(u) + P_N g

    Args:
        u: Current field
        spec: Forcing supplying g
        nu: Viscosity
        nonlinear: Include B; False gives the stochastic Stokes drift
    """
    coefficients = -nu * u.truncation.wavenumber_sq[:, None] * u.coefficients
    if nonlinear:
        coefficients = coefficients - bilinear_B(u).coefficients
    coefficients = coefficients + spec.g_field.coefficients
    return SpectralField(u.truncation, coefficients)
