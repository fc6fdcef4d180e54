"""
Sobolev and Gevrey functionals whose invariant-measure averages are bounded
"""

import math

import numpy as np

from src.core.exceptions import SpectralDomainError
from src.core.models import GevreyParams
from src.spectral import SpectralField, sobolev_norm, weighted_gevrey_sq


def _check_order(p: int) -> None:
    if p < 1:
        raise SpectralDomainError(f"Order p must be at least 1, got {p}", operation="moments")


def lyapunov_exponent(p: int) -> float:
    """eps_p = 1 / (2p - 1)"""
    _check_order(p)
    return 1.0 / (2 * p - 1)


def theorem1_statistic(x: SpectralField, p: int) -> float:
    """||x||_{p+1}^{2/(2p+1)}"""
    _check_order(p)
    return sobolev_norm(x, p + 1.0) ** (2.0 / (2 * p + 1))


def m_p_statistic(x: SpectralField, p: int, nu: float) -> float:
    """nu (1 + ||x||_p^2)^{1/(2p-1)}"""
    return nu * (1.0 + sobolev_norm(x, float(p)) ** 2) ** lyapunov_exponent(p)


def r_p_statistic(x: SpectralField, p: int, nu: float) -> float:
    """nu (1 + ||x||_{p+1}^2) / (1 + ||x||_p^2)^{1 + eps_p}"""
    eps = lyapunov_exponent(p)
    return nu * (1.0 + sobolev_norm(x, p + 1.0) ** 2) / (1.0 + sobolev_norm(x, float(p)) ** 2) ** (1.0 + eps)


def holder_recursion_bound(mean_r_p: float, mean_m_p: float, p: int) -> float:
    """
    Upper bound for the average of m_{p+1}

    Pointwise m_{p+1} = r_p^{1/(2p+1)} m_p^{2p/(2p+1)}, so Hoelder's
    inequality on any empirical measure gives
    avg m_{p+1} <= (avg r_p)^{1/(2p+1)} (avg m_p)^{2p/(2p+1)}.
    """
    _check_order(p)
    return mean_r_p ** (1.0 / (2 * p + 1)) * mean_m_p ** (2.0 * p / (2 * p + 1))


def log_plus_moment(x: SpectralField, alpha_prime: float, beta_prime: float, gamma: float) -> float:
    """(ln+ ||x||^2_{G(alpha', beta')})^gamma, evaluated from the log-domain sum"""
    if not gamma > 0:
        raise SpectralDomainError(f"gamma must be positive, got {gamma}", operation="log_plus_moment")
    GevreyParams(alpha_prime, beta_prime)
    log_value = weighted_gevrey_sq(x, alpha_prime, beta_prime).log_value
    return max(0.0, log_value) ** gamma


def _check_interpolation_order(beta: float, beta_prime: float) -> None:
    if not 0 < beta_prime < beta <= 1:
        raise SpectralDomainError(
            f"Interpolation needs 0 < beta' < beta <= 1, got beta={beta}, beta'={beta_prime}",
            operation="interp_constant"
        )


def interp_constant(beta: float, beta_prime: float) -> float:
    """
    c(beta, beta') = ((beta - beta') / beta) (beta' / beta)^{beta' / (beta - beta')}

    so that max_{r >= 0} (alpha' r^beta' - alpha r^beta)
    = c alpha'^{beta / (beta - beta')} alpha^{-beta' / (beta - beta')}.
    """
    _check_interpolation_order(beta, beta_prime)
    gap = beta - beta_prime
    return (gap / beta) * (beta_prime / beta) ** (beta_prime / gap)


LOG_FLOAT_MAX = float(np.log(np.finfo(float).max))


def log_interpolation_factor(alpha: float, alpha_prime: float, beta: float, beta_prime: float) -> float:
    """c(beta, beta') alpha'^{beta/(beta-beta')} alpha^{-beta'/(beta-beta')}, inf past float range"""
    if not (alpha > 0 and alpha_prime > 0):
        raise SpectralDomainError("Interpolation needs alpha, alpha' > 0", operation="interpolation_factor")
    gap = beta - beta_prime
    log_exponent = (math.log(interp_constant(beta, beta_prime)) + (beta / gap) * math.log(alpha_prime)
                    - (beta_prime / gap) * math.log(alpha))
    return math.exp(log_exponent) if log_exponent <= LOG_FLOAT_MAX else float('inf')


def interpolation_factor(alpha: float, alpha_prime: float, beta: float, beta_prime: float) -> float:
    """exp(c(beta, beta') alpha'^{beta/(beta-beta')} alpha^{-beta'/(beta-beta')})"""
    exponent = log_interpolation_factor(alpha, alpha_prime, beta, beta_prime)
    if exponent > LOG_FLOAT_MAX:
        raise SpectralDomainError(
            f"Interpolation factor exp({exponent:.6g}) exceeds the float range for "
            f"alpha={alpha}, alpha'={alpha_prime}; use log_interpolation_factor",
            operation="interpolation_factor"
        )
    return math.exp(exponent)


def check_interpolation(x: SpectralField, alpha: float, alpha_prime: float,
                        beta: float, beta_prime: float, rel_tol: float = 1e-12) -> bool:
    """||x||_{G(alpha', beta')} <= interpolation_factor * ||x||_{G(alpha, beta)}, compared in logs"""
    log_factor = log_interpolation_factor(alpha, alpha_prime, beta, beta_prime)
    log_lower = 0.5 * weighted_gevrey_sq(x, alpha_prime, beta_prime).log_value
    log_upper = 0.5 * weighted_gevrey_sq(x, alpha, beta).log_value
    if log_lower == float('-inf'):
        return True
    return bool(log_lower <= log_factor + log_upper + math.log1p(rel_tol))


def interpolation_mode_margin(alpha: float, alpha_prime: float, beta: float, beta_prime: float,
                              wavenumbers: np.ndarray) -> np.ndarray:
    """Per-mode slack c alpha'^.. alpha^.. - (alpha' |k|^beta' - alpha |k|^beta), nonnegative"""
    peak = log_interpolation_factor(alpha, alpha_prime, beta, beta_prime)
    wavenumbers = np.asarray(wavenumbers, dtype=float)
    return peak - (alpha_prime * wavenumbers ** beta_prime - alpha * wavenumbers ** beta)
