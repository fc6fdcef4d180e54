"""
Invariant-measure statistics of stationary Galerkin trajectories
"""

from .accumulators import MomentAccumulator, FunctionalObserver, SpectrumAccumulator
from .functionals import (
    lyapunov_exponent,
    theorem1_statistic,
    m_p_statistic,
    r_p_statistic,
    holder_recursion_bound,
    log_plus_moment,
    interp_constant,
    interpolation_factor,
    log_interpolation_factor,
    check_interpolation,
    interpolation_mode_margin,
)
from .energy import EnergyBalance, energy_balance_residual
from .gevrey import (
    estimate_alpha_nu,
    alpha_nu_gap,
    theorem2_statistics,
    Theorem2Sample,
    GevreyBudget,
    gevrey_budget,
    foias_temam_ratio,
    GevreyBudgetObserver,
    TauSample,
    StoppingRecord,
    StoppingTimeObserver,
    estimate_tau,
    TauFit,
    tau_probability_bound_fit,
)
from .dissipation import ModeSpectrum, DissipationFit, shell_spectrum, dissipation_scale_fit

__all__ = [
    'MomentAccumulator',
    'FunctionalObserver',
    'SpectrumAccumulator',
    'lyapunov_exponent',
    'theorem1_statistic',
    'm_p_statistic',
    'r_p_statistic',
    'holder_recursion_bound',
    'log_plus_moment',
    'interp_constant',
    'interpolation_factor',
    'log_interpolation_factor',
    'check_interpolation',
    'interpolation_mode_margin',
    'EnergyBalance',
    'energy_balance_residual',
    'estimate_alpha_nu',
    'alpha_nu_gap',
    'theorem2_statistics',
    'Theorem2Sample',
    'GevreyBudget',
    'gevrey_budget',
    'foias_temam_ratio',
    'GevreyBudgetObserver',
    'TauSample',
    'StoppingRecord',
    'StoppingTimeObserver',
    'estimate_tau',
    'TauFit',
    'tau_probability_bound_fit',
    'ModeSpectrum',
    'DissipationFit',
    'shell_spectrum',
    'dissipation_scale_fit',
]
