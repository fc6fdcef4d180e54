"""
Binary trajectory checkpoints

Layout (little-endian):

    magic "SNS3" | version u16 | config hash u64 | nu f64 | k_max u32 |
    scheme u8 | time f64 | rng-state length u32 + JSON bytes |
    mode count u64 | per mode: k 3 x i32, coefficient 6 x f64 |
    config-echo length u32 + JSON bytes
"""

import json
import logging
import struct
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from src.core.exceptions import CheckpointFormatError
from src.core.models import IntegrationScheme
from src.spectral import SpectralField
from .stepping import SimConfig, TrajectoryState

logger = logging.getLogger(__name__)

MAGIC = b"SNS3"
VERSION = 1
HEADER = struct.Struct('<4sHQdIBd')
LENGTH = struct.Struct('<I')
COUNT = struct.Struct('<Q')
MODE_RECORD = np.dtype([('k', '<i4', (3,)), ('c', '<f8', (6,))])

SCHEME_CODES = {IntegrationScheme.EXP_EULER: 0, IntegrationScheme.SEMI_IMPLICIT: 1}
SCHEMES_BY_CODE = {code: scheme for scheme, code in SCHEME_CODES.items()}


def save_checkpoint(state: TrajectoryState, cfg: SimConfig, path: Union[str, Path]) -> Path:
    """Write a checkpoint; returns the path written"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    truncation = cfg.truncation

    rng_blob = json.dumps(state.rng.bit_generator.state).encode('utf-8')
    records = np.zeros(truncation.mode_count, dtype=MODE_RECORD)
    records['k'] = truncation.modes
    records['c'] = np.ascontiguousarray(state.field.coefficients).view(np.float64).reshape(-1, 6)
    echo = json.dumps(cfg.to_dict(), sort_keys=True).encode('utf-8')

    with open(path, 'wb') as handle:
        handle.write(HEADER.pack(MAGIC, VERSION, cfg.config_hash, cfg.nu, truncation.k_max,
                                 SCHEME_CODES[cfg.scheme], state.time))
        handle.write(LENGTH.pack(len(rng_blob)))
        handle.write(rng_blob)
        handle.write(COUNT.pack(truncation.mode_count))
        handle.write(records.tobytes())
        handle.write(LENGTH.pack(len(echo)))
        handle.write(echo)
    logger.debug(f"Checkpoint written to {path} at t={state.time:.6g}")
    return path


class _Reader:
    def __init__(self, data: bytes, path: Path):
        self.data = data
        self.offset = 0
        self.path = path

    def take(self, size: int, field: str) -> bytes:
        if self.offset + size > len(self.data):
            raise CheckpointFormatError(f"Checkpoint truncated while reading {field}",
                                        path=str(self.path), field=field)
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, layout: struct.Struct, field: str) -> tuple:
        return layout.unpack(self.take(layout.size, field))


def load_checkpoint(path: Union[str, Path],
                    expected: Optional[SimConfig] = None) -> Tuple[TrajectoryState, SimConfig]:
    """
    Read a checkpoint

    Args:
        path: Checkpoint file
        expected: Run configuration to resume under; its hash must match

    Raises:
        CheckpointFormatError: on bad magic, version, truncation or hash mismatch
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CheckpointFormatError(f"Cannot read checkpoint: {e}", path=str(path))
    reader = _Reader(data, path)

    magic, version, stored_hash, nu, k_max, scheme_code, time = reader.unpack(HEADER, "header")
    if magic != MAGIC:
        raise CheckpointFormatError(f"Bad magic {magic!r}", path=str(path), field="magic")
    if version != VERSION:
        raise CheckpointFormatError(f"Unsupported checkpoint version {version}", path=str(path), field="version")
    if scheme_code not in SCHEMES_BY_CODE:
        raise CheckpointFormatError(f"Unknown scheme code {scheme_code}", path=str(path), field="scheme")

    (rng_length,) = reader.unpack(LENGTH, "rng_state")
    try:
        rng_state = json.loads(reader.take(rng_length, "rng_state").decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointFormatError(f"Corrupt RNG state: {e}", path=str(path), field="rng_state")

    (mode_count,) = reader.unpack(COUNT, "mode_count")
    records = np.frombuffer(reader.take(int(mode_count) * MODE_RECORD.itemsize, "modes"), dtype=MODE_RECORD)

    (echo_length,) = reader.unpack(LENGTH, "config_echo")
    try:
        cfg = SimConfig.from_dict(json.loads(reader.take(echo_length, "config_echo").decode('utf-8')))
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError) as e:
        raise CheckpointFormatError(f"Corrupt config echo: {e}", path=str(path), field="config_echo")

    if cfg.config_hash != stored_hash or cfg.truncation.k_max != k_max or cfg.nu != nu \
            or SCHEME_CODES[cfg.scheme] != scheme_code:
        raise CheckpointFormatError("Config echo disagrees with the header", path=str(path), field="config_hash")
    if expected is not None and expected.config_hash != stored_hash:
        raise CheckpointFormatError(
            f"Config hash mismatch: checkpoint {stored_hash:016x}, run {expected.config_hash:016x}",
            path=str(path), field="config_hash"
        )

    truncation = cfg.truncation
    if mode_count != truncation.mode_count or not np.array_equal(records['k'], truncation.modes):
        raise CheckpointFormatError("Mode table does not match the truncation", path=str(path), field="modes")

    coefficients = np.ascontiguousarray(records['c']).view(np.complex128).reshape(-1, 3)
    bit_generator = np.random.PCG64()
    try:
        bit_generator.state = rng_state
    except (TypeError, ValueError, KeyError) as e:
        raise CheckpointFormatError(f"Cannot restore RNG state: {e}", path=str(path), field="rng_state")

    state = TrajectoryState(
        field=SpectralField(truncation, coefficients),
        time=time,
        rng=np.random.Generator(bit_generator),
        steps=int(round(time / cfg.dt)),
    )
    return state, (expected or cfg)
