"""
Galerkin drift and noise model of the stochastic Navier-Stokes system
"""

from .forcing import (
    ForcingSpec,
    ForcingConstants,
    noise_amplitude,
    noise_power_sum,
    gevrey_noise_sum,
    forcing_constants,
    amplitude_rule,
)
from .nonlinear import bilinear_B, galerkin_drift, nonlinear_coefficients

__all__ = [
    'ForcingSpec',
    'ForcingConstants',
    'noise_amplitude',
    'noise_power_sum',
    'gevrey_noise_sum',
    'forcing_constants',
    'amplitude_rule',
    'bilinear_B',
    'galerkin_drift',
    'nonlinear_coefficients',
]
