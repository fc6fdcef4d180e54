"""
Custom exceptions for the stochastic Navier-Stokes regularity engine
"""


class SimulationError(Exception):
    """Base exception for the simulation engine"""

    def __init__(self, message: str, error_code: str = None, details: dict = None):
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self):
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message


class SpectralDomainError(SimulationError):
    """Exception for arguments outside the domain of a spectral operation"""

    def __init__(self, message: str, operation: str = None, wavevector: tuple = None):
        details = {}
        if operation:
            details['operation'] = operation
        if wavevector is not None:
            details['wavevector'] = tuple(int(c) for c in wavevector)
        super().__init__(message, error_code="SPECTRAL_DOMAIN_ERROR", details=details)


class BlowUpError(SimulationError):
    """Exception raised when a trajectory produces non-finite coefficients"""

    def __init__(self, message: str, time: float = None, norm_snapshot: dict = None,
                 checkpoint_path: str = None):
        details = {}
        if time is not None:
            details['time'] = time
        if norm_snapshot:
            details['norm_snapshot'] = norm_snapshot
        if checkpoint_path:
            details['checkpoint_path'] = checkpoint_path
        self.time = time
        self.norm_snapshot = norm_snapshot or {}
        self.checkpoint_path = checkpoint_path
        super().__init__(message, error_code="BLOW_UP_ERROR", details=details)


class CheckpointFormatError(SimulationError):
    """Exception for unreadable or mismatching checkpoint files"""

    def __init__(self, message: str, path: str = None, field: str = None):
        details = {}
        if path:
            details['path'] = str(path)
        if field:
            details['field'] = field
        super().__init__(message, error_code="CHECKPOINT_FORMAT_ERROR", details=details)


class ConfigurationError(SimulationError):
    """Exception for configuration errors"""

    def __init__(self, message: str, config_key: str = None, line: int = None,
                 expected_type: str = None):
        details = {}
        if config_key:
            details['config_key'] = config_key
        if line is not None:
            details['line'] = line
        if expected_type:
            details['expected_type'] = expected_type
        super().__init__(message, error_code="CONFIG_ERROR", details=details)


class DiagnosticError(SimulationError):
    """Exception for statistics that cannot be formed from the available data"""

    def __init__(self, message: str, diagnostic: str = None, available: int = None):
        details = {}
        if diagnostic:
            details['diagnostic'] = diagnostic
        if available is not None:
            details['available'] = available
        super().__init__(message, error_code="DIAGNOSTIC_ERROR", details=details)


class OracleError(SimulationError):
    """Exception for reference computations refusing their input"""

    def __init__(self, message: str, oracle: str = None):
        details = {}
        if oracle:
            details['oracle'] = oracle
        super().__init__(message, error_code="ORACLE_ERROR", details=details)
