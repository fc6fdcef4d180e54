"""
CSV and JSON emitters for experiment outputs
"""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from src import __version__
from src.core.base import BaseComponent

FLOAT_FORMAT = '%.17g'


@dataclass
class RunHeader:
    """Identification block written at the top of every output file"""
    workflow: str
    config_hash: int
    seed: int
    functionals: List[str] = field(default_factory=list)
    code_version: str = __version__

    def to_dict(self) -> Dict[str, Any]:
        return {
            'workflow': self.workflow,
            'config_hash': f"{self.config_hash:016x}",
            'seed': self.seed,
            'code_version': self.code_version,
            'functionals': list(self.functionals),
        }

    def comment_lines(self) -> List[str]:
        return [f"# {key}: {value if not isinstance(value, list) else ','.join(value)}"
                for key, value in self.to_dict().items()]


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def _finite_or_none(value: Any) -> Any:
    """Non-finite floats become null so summaries stay strict JSON"""
    if isinstance(value, dict):
        return {key: _finite_or_none(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_or_none(item) for item in value]
    if isinstance(value, (float, np.floating)) and not np.isfinite(value):
        return None
    return value


def read_table(path: Union[str, Path]) -> pd.DataFrame:
    """Load a CSV written by RunReporter, skipping the header block"""
    return pd.read_csv(path, comment='#')


class RunReporter(BaseComponent):
    """
    Writes the files of one run into its output directory

    Every CSV starts with the ``#`` header block of ``RunHeader``;
    floats use 17 significant digits so fixed-seed runs are
    byte-identical.
    """

    def __init__(self, output_dir: Union[str, Path], header: RunHeader,
                 name: str = "RunReporter", config: Optional[Dict[str, Any]] = None):
        super().__init__(name, config)
        self.output_dir = Path(output_dir)
        self.header = header
        self.written: List[Path] = []

    def initialize(self) -> None:
        os.makedirs(self.output_dir, exist_ok=True)
        self._initialized = True

    def validate_config(self) -> bool:
        return not self.output_dir.exists() or self.output_dir.is_dir()

    def get_status(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'output_dir': str(self.output_dir),
            'header': self.header.to_dict(),
            'written': [str(path) for path in self.written],
        }

    def _path(self, filename: str) -> Path:
        if not self._initialized:
            self.initialize()
        path = self.output_dir / filename
        self.written.append(path)
        return path

    def write_table(self, frame: pd.DataFrame, filename: str) -> Path:
        path = self._path(filename)
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            handle.write("\n".join(self.header.comment_lines()) + "\n")
            frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        self.log_info(f"Wrote {len(frame)} rows to {path}")
        return path

    def write_samples(self, frame: pd.DataFrame, filename: str = "samples.csv") -> Path:
        """One row per sample: member, time and functional values"""
        return self.write_table(frame, filename)

    def write_spectrum(self, frame: pd.DataFrame, filename: str = "spectrum.csv") -> Path:
        """Shell-averaged amplitudes with columns shell, mean_amplitude, mode_count"""
        return self.write_table(frame[['shell', 'mean_amplitude', 'mode_count']], filename)

    def write_summary(self, summary: Dict[str, Any], filename: str = "summary.json") -> Path:
        path = self._path(filename)
        document = {'header': self.header.to_dict(), **_finite_or_none(summary)}
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(json.dumps(document, indent=2, ensure_ascii=False, default=_json_default))
            handle.write("\n")
        self.log_info(f"Wrote summary to {path}")
        return path
