"""
Dissipation-scale estimate from the exponential tail of the velocity spectrum
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
import pandas as pd
from scipy import stats

from src.core.exceptions import DiagnosticError, SpectralDomainError
from src.spectral import SpectralField, Truncation

logger = logging.getLogger(__name__)

MIN_FIT_SHELLS = 4
NOISE_FLOOR = 1e-13
GEVREY_RATE_THRESHOLD = 1e-6


@dataclass
class ModeSpectrum:
    """Amplitude |x(k)| per representative mode"""
    truncation: Truncation
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=float)
        if self.amplitudes.shape != (self.truncation.mode_count,):
            raise SpectralDomainError(
                f"Spectrum needs {self.truncation.mode_count} amplitudes, got {self.amplitudes.shape}",
                operation="ModeSpectrum"
            )

    @classmethod
    def from_field(cls, x: SpectralField) -> "ModeSpectrum":
        return cls(x.truncation, np.linalg.norm(x.coefficients, axis=1))


def shell_spectrum(spectrum: ModeSpectrum) -> pd.DataFrame:
    """Shell-averaged amplitude with integer shells [n - 1/2, n + 1/2)"""
    frame = pd.DataFrame({
        'shell': spectrum.truncation.shell_index,
        'amplitude': spectrum.amplitudes,
    })
    grouped = frame.groupby('shell')['amplitude']
    return pd.DataFrame({
        'shell': grouped.mean().index.astype(int),
        'mean_amplitude': grouped.mean().values,
        'mode_count': grouped.size().values,
    })


@dataclass
class DissipationFit:
    """Fitted exponential decay rate and the derived dissipation scale"""
    decay_rate: float
    scale: float
    intercept: float
    r_squared: float
    shells_used: int
    beta: float
    is_gevrey: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'decay_rate': self.decay_rate,
            'scale': self.scale,
            'intercept': self.intercept,
            'r_squared': self.r_squared,
            'shells_used': self.shells_used,
            'beta': self.beta,
            'is_gevrey': self.is_gevrey,
        }


def dissipation_scale_fit(spectrum: ModeSpectrum, beta: float, floor: float = NOISE_FLOOR) -> DissipationFit:
    """
    Least-squares fit of ln|x(k)| + ln|k| = c - alpha |k|^beta

    Both sides are averaged per shell over modes above ``floor`` times the
    peak amplitude, then regressed. The scale is alpha^{-1/beta}; a rate
    at or below zero means no exponential tail was resolved and the
    scale is reported as infinite.
    """
    if not 0 < beta <= 1:
        raise SpectralDomainError(f"beta must lie in (0, 1], got {beta}", operation="dissipation_scale_fit")
    amplitudes = spectrum.amplitudes
    peak = float(np.max(amplitudes, initial=0.0))
    keep = amplitudes > floor * peak if peak > 0 else np.zeros_like(amplitudes, dtype=bool)
    truncation = spectrum.truncation
    frame = pd.DataFrame({
        'shell': truncation.shell_index[keep],
        'log_scaled': np.log(amplitudes[keep]) + np.log(truncation.wavenumber[keep]),
        'weight': truncation.wavenumber[keep] ** beta,
    })
    shells = frame.groupby('shell')[['log_scaled', 'weight']].mean()
    if len(shells) < MIN_FIT_SHELLS:
        raise DiagnosticError(
            f"Dissipation fit needs {MIN_FIT_SHELLS} shells above the noise floor, got {len(shells)}",
            diagnostic="dissipation_scale_fit",
            available=len(shells)
        )

    result = stats.linregress(shells['weight'].to_numpy(), shells['log_scaled'].to_numpy())
    decay_rate = -float(result.slope)
    is_gevrey = decay_rate > GEVREY_RATE_THRESHOLD
    scale = decay_rate ** (-1.0 / beta) if is_gevrey else float('inf')
    if not is_gevrey:
        logger.info(f"No exponential tail resolved (decay rate {decay_rate:.3g}); spectrum flagged non-Gevrey")
    return DissipationFit(
        decay_rate=decay_rate,
        scale=scale,
        intercept=float(result.intercept),
        r_squared=float(result.rvalue ** 2),
        shells_used=len(shells),
        beta=beta,
        is_gevrey=bool(is_gevrey),
    )
