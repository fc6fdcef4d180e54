"""
Stationary energy balance of the Galerkin system
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict

from src.core.exceptions import DiagnosticError
from src.dynamics import ForcingConstants
from .accumulators import MomentAccumulator

logger = logging.getLogger(__name__)


@dataclass
class EnergyBalance:
    """
    Residual of 2 nu avg ||X||_1^2 = sum sigma_k^2 and the one-sided bound nu avg ||X||_1^2 <= Bbar_0

    The identity holds for g = 0; with a forcing field only the bound is meaningful.
    """
    residual: float
    relative_residual: float
    stderr: float
    noise_sum: float
    mean_dissipation: float
    bound_value: float
    bound_holds: bool

    def within(self, rel_tol: float) -> bool:
        return abs(self.residual) <= rel_tol * self.noise_sum

    def to_dict(self) -> Dict[str, Any]:
        return {
            'residual': self.residual,
            'relative_residual': self.relative_residual,
            'stderr': self.stderr,
            'noise_sum': self.noise_sum,
            'mean_dissipation': self.mean_dissipation,
            'bound_value': self.bound_value,
            'bound_holds': self.bound_holds,
        }


def energy_balance_residual(acc: MomentAccumulator, consts: ForcingConstants, nu: float) -> EnergyBalance:
    """
    Compare the averaged enstrophy against the injected noise power

    Args:
        acc: Accumulator of ||X||_1^2 over the stationary window
        consts: Forcing constants at p = 0
        nu: Viscosity

    Returns:
        EnergyBalance with the signed residual 2 nu mean - sum sigma^2
    """
    if consts.p != 0:
        raise DiagnosticError(f"Energy balance needs constants at p=0, got p={consts.p}",
                              diagnostic="energy_balance")
    mean = acc.mean
    stderr = 2.0 * nu * acc.stderr if acc.count >= 2 else float('nan')
    residual = 2.0 * nu * mean - consts.noise_sum
    relative = residual / consts.noise_sum if consts.noise_sum > 0 else float('nan')
    bound_holds = nu * mean <= consts.Bbar_p
    if not bound_holds:
        logger.warning(f"Energy bound violated: nu avg ||X||_1^2 = {nu * mean:.6g} > Bbar_0 = {consts.Bbar_p:.6g}")
    return EnergyBalance(
        residual=residual,
        relative_residual=relative,
        stderr=stderr,
        noise_sum=consts.noise_sum,
        mean_dissipation=mean,
        bound_value=consts.Bbar_p,
        bound_holds=bool(bound_holds),
    )
