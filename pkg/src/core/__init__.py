"""
Core module containing base classes, shared models and exceptions
"""

from .base import BaseComponent, SampleObserver
from .models import IntegrationScheme, ForcingFamily, GevreyParams, CheckResult, CheckReport
from .exceptions import (
    SimulationError,
    SpectralDomainError,
    BlowUpError,
    CheckpointFormatError,
    ConfigurationError,
    DiagnosticError,
    OracleError
)

__all__ = [
    # Base classes
    'BaseComponent',
    'SampleObserver',

    # Models
    'IntegrationScheme',
    'ForcingFamily',
    'GevreyParams',
    'CheckResult',
    'CheckReport',

    # Exceptions
    'SimulationError',
    'SpectralDomainError',
    'BlowUpError',
    'CheckpointFormatError',
    'ConfigurationError',
    'DiagnosticError',
    'OracleError'
]
