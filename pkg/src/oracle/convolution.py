"""
Direct-convolution reference for the nonlinear term

Sums (u . grad) u over all triads h + q = k explicitly in Fourier space,
without transforms, then projects each mode orthogonally to k.
"""

import numpy as np

from src.core.exceptions import OracleError
from src.spectral import SpectralField

MAX_DIRECT_MODES = 1000


def bilinear_B_direct(u: SpectralField, max_modes: int = MAX_DIRECT_MODES) -> SpectralField:
    """
    Exact truncated convolution

        B(k) = pi_k sum_h i (u(h) . (k - h)) u(k - h)

    restricted to |h|, |k - h| <= k_max.

    Raises:
        OracleError: when the truncation holds more than ``max_modes`` representatives
    """
    truncation = u.truncation
    if truncation.mode_count > max_modes:
        raise OracleError(
            f"Direct convolution refuses {truncation.mode_count} modes (limit {max_modes})",
            oracle="bilinear_B_direct"
        )
    k_max = truncation.k_max
    full_modes = np.concatenate([truncation.modes, -truncation.modes])
    full_coeffs = np.concatenate([u.coefficients, np.conj(u.coefficients)])

    width = 2 * k_max + 1
    cube = np.zeros((width, width, width, 3), dtype=np.complex128)
    for k, c in zip(full_modes, full_coeffs):
        cube[k[0] + k_max, k[1] + k_max, k[2] + k_max] = c

    result = np.zeros((truncation.mode_count, 3), dtype=np.complex128)
    for row, k in enumerate(truncation.modes):
        q = k[None, :] - full_modes
        q_sq = np.sum(q * q, axis=1)
        valid = (q_sq > 0) & (q_sq <= k_max * k_max)
        q = q[valid]
        u_h = full_coeffs[valid]
        u_q = cube[q[:, 0] + k_max, q[:, 1] + k_max, q[:, 2] + k_max]
        transport = 1j * np.sum(u_h * q, axis=1)
        total = np.sum(transport[:, None] * u_q, axis=0)

        k_float = k.astype(float)
        total = total - k_float * (np.dot(k_float, total) / np.dot(k_float, k_float))
        result[row] = total
    return SpectralField(truncation, result)
