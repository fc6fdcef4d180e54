"""
Scalar bisection root finder
"""

from typing import Callable

from scipy import optimize

from src.core.exceptions import OracleError


def scalar_root(f: Callable[[float], float], lower: float, upper: float,
                tolerance: float = 1e-12, max_iterations: int = 400) -> float:
    """
    Root of a real function with a sign change on [lower, upper]

    Args:
        f: Continuous real map
        lower: Left end of the bracket
        upper: Right end of the bracket
        tolerance: Absolute width at which bisection stops

    Raises:
        OracleError: when f does not change sign on the bracket or bisection does not converge
    """
    f_lower, f_upper = f(lower), f(upper)
    if f_lower == 0:
        return lower
    if f_upper == 0:
        return upper
    if (f_lower > 0) == (f_upper > 0):
        raise OracleError(
            f"No sign change on [{lower}, {upper}]: f = ({f_lower:.3e}, {f_upper:.3e})",
            oracle="scalar_root"
        )
    try:
        return float(optimize.bisect(f, lower, upper, xtol=tolerance, maxiter=max_iterations))
    except RuntimeError as e:
        raise OracleError(f"Bisection did not converge: {e}", oracle="scalar_root")
