"""
Experiment configuration: flat dotted key-value files validated by pydantic
"""

import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .exceptions import ConfigurationError
from .models import ForcingFamily, GevreyParams, IntegrationScheme

load_dotenv()

# dotted file key -> model field
KEY_MAP: Dict[str, str] = {
    'nu': 'nu',
    'dt': 'dt',
    'scheme': 'scheme',
    'nonlinear': 'nonlinear',
    't_burn': 't_burn',
    't_sample': 't_sample',
    'sample_stride': 'sample_stride',
    'truncation.k_max': 'k_max',
    'forcing.family': 'forcing_family',
    'forcing.r': 'forcing_r',
    'forcing.alpha': 'forcing_alpha',
    'forcing.beta': 'forcing_beta',
    'forcing.amplitude': 'forcing_amplitude',
    'forcing.cutoff': 'forcing_cutoff',
    'ensemble.size': 'ensemble_size',
    'rng.seed': 'seed',
    'analysis.p': 'analysis_p',
    'analysis.gevrey.alpha_prime': 'alpha_prime',
    'analysis.gevrey.beta_prime': 'beta_prime',
    'analysis.gamma': 'gamma',
    'analysis.tau': 'tau',
    'analysis.alpha_nu': 'alpha_nu',
    'analysis.tau_horizon': 'tau_horizon',
    'analysis.tau_restart': 'tau_restart',
    'output.dir': 'output_dir',
    'checkpoint.every': 'checkpoint_every',
}
FIELD_KEYS: Dict[str, str] = {field: key for key, field in KEY_MAP.items()}


class ExperimentConfig(BaseModel):
    """
    Everything one CLI run needs: dynamics, forcing, ensemble and analysis options

    Values come from the config file, then CLI overrides; ``output_dir``
    and ``threads`` default to the SNS_OUTPUT_DIR and SNS_THREADS
    environment variables.
    """
    model_config = ConfigDict(extra='forbid', frozen=True)

    nu: float = Field(0.5, gt=0, le=1)
    dt: float = Field(0.01, gt=0)
    scheme: IntegrationScheme = IntegrationScheme.EXP_EULER
    nonlinear: bool = True
    t_burn: Optional[float] = Field(None, ge=0)
    t_sample: float = Field(100.0, gt=0)
    sample_stride: int = Field(1, ge=1)
    k_max: int = Field(4, ge=1)

    forcing_family: ForcingFamily = ForcingFamily.POWER_LAW
    forcing_r: float = Field(2.5, gt=0)
    forcing_alpha: Optional[float] = Field(None, gt=0)
    forcing_beta: Optional[float] = Field(None, gt=0, le=1)
    forcing_amplitude: float = Field(1.0, ge=0)
    forcing_cutoff: Optional[float] = Field(None, gt=0)

    ensemble_size: int = Field(1, ge=1)
    seed: int = Field(0, ge=0, lt=2 ** 64)

    analysis_p: List[int] = Field(default_factory=lambda: [1])
    alpha_prime: float = Field(0.1, gt=0)
    beta_prime: Optional[float] = Field(None, gt=0, le=1)
    gamma: float = Field(0.5, gt=0, lt=1)
    tau: bool = True
    alpha_nu: bool = True
    tau_horizon: Optional[float] = Field(None, gt=0)
    tau_restart: Optional[float] = Field(None, gt=0)

    output_dir: str = Field(default_factory=lambda: os.getenv('SNS_OUTPUT_DIR', 'output'))
    checkpoint_every: int = Field(0, ge=0)
    threads: int = Field(default_factory=lambda: int(os.getenv('SNS_THREADS', '1')), ge=1)

    @field_validator('analysis_p', mode='before')
    @classmethod
    def _split_orders(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(',') if part.strip()]
        if isinstance(value, int):
            return [value]
        return value

    @field_validator('analysis_p')
    @classmethod
    def _check_orders(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("at least one order p is required")
        if any(p < 1 for p in value):
            raise ValueError(f"orders p must be at least 1, got {value}")
        return value

    @field_validator('beta_prime')
    @classmethod
    def _check_beta_order(cls, value: Optional[float], info) -> Optional[float]:
        beta = info.data.get('forcing_beta')
        if value is not None and beta is not None and value >= beta:
            raise ValueError(f"beta' = {value} must be smaller than forcing beta = {beta}")
        return value

    @model_validator(mode='after')
    def _check_family(self) -> "ExperimentConfig":
        if self.forcing_family == ForcingFamily.GEVREY and (self.forcing_alpha is None or self.forcing_beta is None):
            raise ConfigurationError("Gevrey forcing needs forcing.alpha and forcing.beta",
                                     config_key='forcing.family')
        return self

    @property
    def gevrey(self) -> Optional[GevreyParams]:
        if self.forcing_alpha is None or self.forcing_beta is None:
            return None
        return GevreyParams(self.forcing_alpha, self.forcing_beta)

    def require_gevrey(self) -> GevreyParams:
        """Gevrey class of the forcing, required by the Gevrey analyses"""
        if self.gevrey is None:
            raise ConfigurationError("Gevrey analyses need forcing.alpha and forcing.beta",
                                     config_key='forcing.beta')
        return self.gevrey

    @property
    def interpolation_params(self) -> Tuple[float, float]:
        """(alpha', beta') of the weaker Gevrey class; beta' defaults to half the forcing beta"""
        beta = self.require_gevrey().beta
        return self.alpha_prime, self.beta_prime if self.beta_prime is not None else 0.5 * beta

    def to_sim_config(self):
        from src.integrator import SimConfig
        from src.spectral import Truncation

        return SimConfig(
            nu=self.nu,
            truncation=Truncation(self.k_max),
            dt=self.dt,
            t_sample=self.t_sample,
            t_burn=self.t_burn,
            sample_stride=self.sample_stride,
            scheme=self.scheme,
            seed=self.seed,
            ensemble_size=self.ensemble_size,
            nonlinear=self.nonlinear,
            checkpoint_every=self.checkpoint_every,
        )

    def to_forcing_spec(self, truncation=None):
        from src.dynamics import ForcingSpec
        from src.spectral import Truncation

        return ForcingSpec(
            family=self.forcing_family,
            amplitude=self.forcing_amplitude,
            r=self.forcing_r,
            truncation=truncation or Truncation(self.k_max),
            gevrey=self.gevrey,
            cutoff=self.forcing_cutoff,
        )

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """Copy with CLI overrides applied and re-validated; None values are ignored"""
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return build_config(values)

    def to_dict(self) -> Dict[str, Any]:
        """Dotted-key echo for report headers"""
        dumped = self.model_dump(mode='json')
        return {FIELD_KEYS.get(name, name): value for name, value in dumped.items()}


def build_config(values: Dict[str, Any], lines: Optional[Dict[str, Tuple[str, int]]] = None) -> ExperimentConfig:
    """
    Validate raw values into an ExperimentConfig

    Args:
        values: Field name -> raw value
        lines: Field name -> (file key, line number) for diagnostics

    Raises:
        ConfigurationError: naming the offending key and, when known, its line
    """
    lines = lines or {}
    try:
        return ExperimentConfig(**values)
    except ValidationError as exc:
        error = exc.errors()[0]
        field = str(error['loc'][0]) if error['loc'] else None
        key, line = lines.get(field, (FIELD_KEYS.get(field, field), None))
        raise ConfigurationError(
            f"Invalid value for '{key}': {error['msg']}",
            config_key=key,
            line=line,
            expected_type=error['type'],
        ) from exc
    except ConfigurationError as exc:
        key = exc.details.get('config_key')
        field = KEY_MAP.get(key, key)
        if 'line' not in exc.details and field in lines:
            raise ConfigurationError(exc.message, config_key=key, line=lines[field][1]) from exc
        raise


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines; '#' starts a comment and 'none' clears an optional value"""
    values: Dict[str, Any] = {}
    lines: Dict[str, Tuple[str, int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigurationError(f"Line {number}: expected 'key = value', got '{line}'", line=number)
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in KEY_MAP:
            raise ConfigurationError(f"Line {number}: unknown key '{key}'", config_key=key, line=number)
        field = KEY_MAP[key]
        if field in values:
            raise ConfigurationError(f"Line {number}: duplicate key '{key}'", config_key=key, line=number)
        values[field] = None if value.lower() in ('', 'none') else value
        lines[field] = (key, number)
    return build_config(values, lines)


def load_config(path: Optional[Union[str, Path]] = None) -> ExperimentConfig:
    """Load a config file, or the defaults when no path is given"""
    if path is None:
        return build_config({})
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Config file not found: {path}", config_key='--config')
    return parse_config_text(path.read_text(encoding='utf-8'))
