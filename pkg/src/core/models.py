"""
Shared data models for the stochastic Navier-Stokes regularity engine
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List
from datetime import datetime
from enum import Enum

from .exceptions import SpectralDomainError


class IntegrationScheme(Enum):
    """Time discretizations of the Galerkin system"""
    EXP_EULER = "exp_euler"
    SEMI_IMPLICIT = "semi_implicit"


class ForcingFamily(Enum):
    """Spectral decay families of the noise covariance"""
    POWER_LAW = "power_law"
    GEVREY = "gevrey"


@dataclass(frozen=True)
class GevreyParams:
    """Gevrey class G(alpha, beta): weight exp(2 alpha |k|^beta)"""
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise SpectralDomainError(
                f"Gevrey alpha must be positive, got {self.alpha}", operation="GevreyParams"
            )
        if not 0 < self.beta <= 1:
            raise SpectralDomainError(
                f"Gevrey beta must lie in (0, 1], got {self.beta}", operation="GevreyParams"
            )


@dataclass
class CheckResult:
    """Verdict of one acceptance check"""
    name: str
    passed: bool
    value: float
    threshold: float
    details: Dict[str, Any] = field(default_factory=dict)
    created_at: datetime = field(default_factory=datetime.now)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'passed': bool(self.passed),
            'value': float(self.value),
            'threshold': float(self.threshold),
            'details': self.details,
        }


@dataclass
class CheckReport:
    """Collection of check verdicts produced by one workflow"""
    workflow: str
    checks: List[CheckResult] = field(default_factory=list)

    def add(self, check: CheckResult) -> None:
        self.checks.append(check)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed_checks(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def to_report(self) -> str:
        """Render a plain-text PASS/FAIL report"""
        lines = [f"Workflow: {self.workflow}"]
        for check in self.checks:
            mark = "PASS" if check.passed else "FAIL"
            lines.append(f"  [{mark}] {check.name}: {check.value:.6g} (threshold {check.threshold:.6g})")
        lines.append(f"Overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)
