"""
Trajectory driver: burn-in, sampling window, observers, checkpoints and
parallel ensembles
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from tqdm import tqdm

from src.core.base import BaseComponent, SampleObserver
from src.core.exceptions import BlowUpError, SpectralDomainError
from src.dynamics import ForcingSpec
from src.spectral import SpectralField
from .stepping import SimConfig, TrajectoryState, initial_state, step
from .checkpoint import save_checkpoint


@dataclass
class SimulationSummary:
    """Outcome of one trajectory"""
    member: int
    burn_steps: int
    sample_steps: int
    samples_taken: int
    wall_time: float
    final_state: Optional[TrajectoryState]
    blow_up: Optional[BlowUpError] = None
    checkpoints_written: int = 0

    @property
    def blown_up(self) -> bool:
        return self.blow_up is not None

    def to_dict(self) -> Dict[str, Any]:
        result = {
            'member': self.member,
            'burn_steps': self.burn_steps,
            'sample_steps': self.sample_steps,
            'samples_taken': self.samples_taken,
            'final_time': self.final_state.time if self.final_state else None,
            'blown_up': self.blown_up,
            'checkpoints_written': self.checkpoints_written,
        }
        if self.blow_up is not None:
            result['blow_up'] = self.blow_up.details
        return result


class TrajectorySimulator(BaseComponent):
    """
    Runs Galerkin trajectories of one configuration

    Observers are called with the TrajectoryState at the start of the
    sampling window and after every ``sample_stride`` steps inside it.
    """

    def __init__(self, cfg: SimConfig, spec: ForcingSpec, name: str = "TrajectorySimulator",
                 checkpoint_path: Optional[Path] = None, blowup_dir: Optional[Path] = None,
                 progress: bool = False, config: Optional[Dict[str, Any]] = None):
        super().__init__(name, config)
        self.cfg = cfg
        self.spec = spec
        self.checkpoint_path = Path(checkpoint_path) if checkpoint_path else None
        self.blowup_dir = Path(blowup_dir) if blowup_dir else None
        self.progress = progress

    def initialize(self) -> None:
        if not self.validate_config():
            raise SpectralDomainError("Forcing and run configuration use different truncations",
                                      operation="TrajectorySimulator")
        self._initialized = True
        self.log_info(
            f"Initialized: nu={self.cfg.nu}, k_max={self.cfg.truncation.k_max}, dt={self.cfg.dt}, "
            f"scheme={self.cfg.scheme.value}, steps={self.cfg.burn_steps}+{self.cfg.sample_steps}"
        )

    def validate_config(self) -> bool:
        return self.spec.truncation == self.cfg.truncation

    def get_status(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'initialized': self._initialized,
            'config': self.cfg.to_dict(),
            'forcing': self.spec.to_dict(),
        }

    def _is_sample_step(self, steps_done: int) -> bool:
        offset = steps_done - self.cfg.burn_steps
        return 0 <= offset <= self.cfg.sample_steps and offset % self.cfg.sample_stride == 0

    def _save_blowup(self, state: TrajectoryState, member: int) -> Optional[str]:
        if self.blowup_dir is None:
            return None
        path = self.blowup_dir / f"preblowup_member{member}.chk"
        save_checkpoint(state, self.cfg, path)
        return str(path)

    def run(self, observers: Sequence[Callable[[TrajectoryState], None]] = (),
            state: Optional[TrajectoryState] = None, member: int = 0,
            initial_field: Optional[SpectralField] = None) -> SimulationSummary:
        """
        Run burn-in and sampling window

        Args:
            observers: Callables receiving sampled states
            state: Resume from this state (e.g. a loaded checkpoint)
            member: Ensemble member index selecting the random stream
            initial_field: Initial data for a fresh start, zero by default

        Raises:
            BlowUpError: with ``checkpoint_path`` set when a pre-blow-up state was saved
        """
        if not self._initialized:
            self.initialize()
        cfg = self.cfg
        resumed = state is not None
        if state is None:
            state = initial_state(cfg, member, initial_field)
        start_steps = state.steps
        samples_taken = 0
        checkpoints = 0
        started = time.perf_counter()

        if not resumed and self._is_sample_step(0):
            for observer in observers:
                observer(state)
            samples_taken += 1

        remaining = range(start_steps, cfg.total_steps)
        iterator = tqdm(remaining, desc=f"Member {member}", disable=not self.progress, leave=False)
        for _ in iterator:
            try:
                next_state = step(state, cfg, self.spec)
            except BlowUpError as e:
                e.checkpoint_path = self._save_blowup(state, member)
                if e.checkpoint_path:
                    e.details['checkpoint_path'] = e.checkpoint_path
                self.log_error(f"Member {member} blew up at t={e.time:.6g}")
                raise
            state = next_state
            if self._is_sample_step(state.steps):
                for observer in observers:
                    observer(state)
                samples_taken += 1
            if self.checkpoint_path and cfg.checkpoint_every and state.steps % cfg.checkpoint_every == 0:
                save_checkpoint(state, cfg, self.checkpoint_path)
                checkpoints += 1

        wall_time = time.perf_counter() - started
        self.log_debug(f"Member {member}: {state.steps - start_steps} steps, {samples_taken} samples, "
                       f"{wall_time:.2f}s")
        return SimulationSummary(
            member=member,
            burn_steps=cfg.burn_steps,
            sample_steps=cfg.sample_steps,
            samples_taken=samples_taken,
            wall_time=wall_time,
            final_state=state,
            checkpoints_written=checkpoints,
        )


def simulate(cfg: SimConfig, spec: ForcingSpec,
             observers: Sequence[Callable[[TrajectoryState], None]] = (),
             state: Optional[TrajectoryState] = None,
             checkpoint_path: Optional[Path] = None,
             blowup_dir: Optional[Path] = None,
             progress: bool = False) -> SimulationSummary:
    """Run a single trajectory (member 0) of ``cfg``"""
    simulator = TrajectorySimulator(cfg, spec, checkpoint_path=checkpoint_path,
                                    blowup_dir=blowup_dir, progress=progress)
    return simulator.run(observers, state=state)


@dataclass
class EnsembleResult:
    """Merged observers and per-member outcomes of an ensemble"""
    observers: List[SampleObserver]
    summaries: List[SimulationSummary] = field(default_factory=list)

    @property
    def blow_up_members(self) -> List[int]:
        return [s.member for s in self.summaries if s.blown_up]

    @property
    def blow_up_fraction(self) -> float:
        return len(self.blow_up_members) / len(self.summaries) if self.summaries else 0.0

    @property
    def final_states(self) -> List[Optional[TrajectoryState]]:
        return [s.final_state for s in self.summaries]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'members': len(self.summaries),
            'blow_up_fraction': self.blow_up_fraction,
            'blow_up_members': self.blow_up_members,
            'summaries': [s.to_dict() for s in self.summaries],
        }


def run_ensemble(cfg: SimConfig, spec: ForcingSpec,
                 observer_factory: Callable[[int], List[SampleObserver]],
                 threads: int = 1,
                 initial_field: Optional[SpectralField] = None,
                 blowup_dir: Optional[Path] = None,
                 progress: bool = False) -> EnsembleResult:
    """
    Run ``cfg.ensemble_size`` members on a thread pool

    Each member draws from the stream (seed, member) and gets its own
    observers from ``observer_factory(member)``; observers are merged in
    member order afterwards. Members that blow up keep the samples taken
    before the blow-up and are counted in the blow-up fraction.
    """
    simulator = TrajectorySimulator(cfg, spec, blowup_dir=blowup_dir)
    simulator.initialize()

    def run_member(member: int):
        observers = observer_factory(member)
        started = time.perf_counter()
        try:
            summary = simulator.run(observers, member=member, initial_field=initial_field)
        except BlowUpError as e:
            summary = SimulationSummary(
                member=member,
                burn_steps=cfg.burn_steps,
                sample_steps=cfg.sample_steps,
                samples_taken=observers[0].samples_seen if observers else 0,
                wall_time=time.perf_counter() - started,
                final_state=None,
                blow_up=e,
            )
        return observers, summary

    members = range(cfg.ensemble_size)
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as executor:
        outcomes = list(tqdm(executor.map(run_member, members), total=cfg.ensemble_size,
                             desc="Ensemble", disable=not progress))

    merged: List[SampleObserver] = outcomes[0][0]
    for observers, _ in outcomes[1:]:
        for target, source in zip(merged, observers):
            target.merge(source)
    result = EnsembleResult(observers=merged, summaries=[summary for _, summary in outcomes])
    if result.blow_up_members:
        simulator.log_warning(f"Blow-up fraction {result.blow_up_fraction:.3f} "
                              f"(members {result.blow_up_members})")
    return result
