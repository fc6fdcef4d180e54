"""
Kolmogorov operator, Lyapunov functional and the empirical stationarity identity
"""

from .functionals import (
    HessianForm,
    SmoothFunctional,
    LyapunovFunctional,
    QuadraticFunctional,
    CombinedFunctional,
    lyapunov_value,
    lyapunov_gradient,
    lyapunov_hessian_quadform,
)
from .operator import (
    KolmogorovTerms,
    KolmogorovObserver,
    noise_trace,
    noise_trace_explicit,
    kolmogorov_terms,
    apply_LN,
    stationarity_residual,
)

__all__ = [
    'HessianForm',
    'SmoothFunctional',
    'LyapunovFunctional',
    'QuadraticFunctional',
    'CombinedFunctional',
    'lyapunov_value',
    'lyapunov_gradient',
    'lyapunov_hessian_quadform',
    'KolmogorovTerms',
    'KolmogorovObserver',
    'noise_trace',
    'noise_trace_explicit',
    'kolmogorov_terms',
    'apply_LN',
    'stationarity_residual',
]
