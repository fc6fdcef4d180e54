"""
Time stepping, trajectory management and checkpoints
"""

from .stepping import (
    SimConfig,
    TrajectoryState,
    make_stream,
    initial_state,
    draw_noise,
    step,
)
from .checkpoint import save_checkpoint, load_checkpoint
from .simulation import (
    TrajectorySimulator,
    SimulationSummary,
    EnsembleResult,
    simulate,
    run_ensemble,
)

__all__ = [
    'SimConfig',
    'TrajectoryState',
    'make_stream',
    'initial_state',
    'draw_noise',
    'step',
    'save_checkpoint',
    'load_checkpoint',
    'TrajectorySimulator',
    'SimulationSummary',
    'EnsembleResult',
    'simulate',
    'run_ensemble',
]
