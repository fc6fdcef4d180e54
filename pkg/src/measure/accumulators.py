"""
Online accumulators for time averages along stationary trajectories
"""

import math
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from src.core.base import SampleObserver
from src.core.exceptions import DiagnosticError
from src.spectral import SpectralField, Truncation

MIN_BATCHES = 8


class MomentAccumulator:
    """
    Running mean and variance of one scalar functional with batch means

    Mean and variance use Welford updates. Samples are also grouped
    into consecutive batches; when the number of finished batches
    reaches twice ``max_batches`` adjacent pairs are merged and the
    batch size doubles, so the batch count stays bounded while each
    batch keeps growing with the window.
    """

    def __init__(self, functional_id: str, max_batches: int = 64):
        if max_batches < MIN_BATCHES:
            raise DiagnosticError(f"max_batches must be at least {MIN_BATCHES}", diagnostic=functional_id)
        self.functional_id = functional_id
        self.max_batches = max_batches
        self.count = 0
        self._mean = 0.0
        self._m2 = 0.0
        self.batch_size = 1
        self.batch_means: List[float] = []
        self._partial_sum = 0.0
        self._partial_count = 0

    def add(self, value: float) -> None:
        value = float(value)
        self.count += 1
        delta = value - self._mean
        self._mean += delta / self.count
        self._m2 += delta * (value - self._mean)

        self._partial_sum += value
        self._partial_count += 1
        if self._partial_count == self.batch_size:
            self._close_batch()

    def extend(self, values) -> None:
        for value in values:
            self.add(value)

    def _close_batch(self) -> None:
        self.batch_means.append(self._partial_sum / self._partial_count)
        self._partial_sum = 0.0
        self._partial_count = 0
        if len(self.batch_means) >= 2 * self.max_batches:
            self._coarsen()

    def _coarsen(self) -> None:
        means = self.batch_means
        paired = [(means[i] + means[i + 1]) / 2.0 for i in range(0, len(means) - 1, 2)]
        if len(means) % 2:
            # odd leftover batch becomes the partial batch at the doubled size
            self._partial_sum += means[-1] * self.batch_size
            self._partial_count += self.batch_size
        self.batch_means = paired
        self.batch_size *= 2

    @property
    def mean(self) -> float:
        if self.count == 0:
            raise DiagnosticError("No samples accumulated", diagnostic=self.functional_id, available=0)
        return self._mean

    @property
    def variance(self) -> float:
        """Sample variance (ddof=1)"""
        if self.count < 2:
            raise DiagnosticError("Variance needs two samples", diagnostic=self.functional_id,
                                  available=self.count)
        return self._m2 / (self.count - 1)

    @property
    def naive_stderr(self) -> float:
        return math.sqrt(self.variance / self.count)

    @property
    def stderr(self) -> float:
        """Batch-means standard error, falling back to the i.i.d. estimate for short windows"""
        if len(self.batch_means) >= MIN_BATCHES:
            means = np.asarray(self.batch_means)
            return float(means.std(ddof=1) / math.sqrt(len(means)))
        return self.naive_stderr

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        """Chan combination of moments; batches are re-binned to the larger batch size"""
        if other.count == 0:
            return self
        if self.count == 0:
            self.__dict__.update({k: (list(v) if isinstance(v, list) else v) for k, v in other.__dict__.items()})
            return self
        total = self.count + other.count
        delta = other._mean - self._mean
        self._mean += delta * other.count / total
        self._m2 += other._m2 + delta * delta * self.count * other.count / total
        self.count = total

        theirs = list(other.batch_means)
        their_size = other.batch_size
        while self.batch_size < their_size:
            self._coarsen()
        while their_size < self.batch_size:
            theirs = [(theirs[i] + theirs[i + 1]) / 2.0 for i in range(0, len(theirs) - 1, 2)]
            their_size *= 2
        self.batch_means.extend(theirs)
        while len(self.batch_means) >= 2 * self.max_batches:
            self._coarsen()
        return self

    def to_dict(self) -> Dict[str, Any]:
        result = {'id': self.functional_id, 'count': self.count}
        if self.count:
            result['mean'] = self.mean
        if self.count >= 2:
            result.update({
                'variance': self.variance,
                'stderr': self.stderr,
                'batches': len(self.batch_means),
                'batch_size': self.batch_size,
            })
        return result


class FunctionalObserver(SampleObserver):
    """
    Evaluates named scalar functionals on every sampled state

    Keeps one MomentAccumulator per functional and, optionally, the full
    sample series for CSV output.
    """

    def __init__(self, functionals: Dict[str, Callable[[SpectralField], float]],
                 keep_series: bool = True, member: int = 0, max_batches: int = 64):
        super().__init__()
        self.functionals = dict(functionals)
        self.accumulators = {name: MomentAccumulator(name, max_batches) for name in self.functionals}
        self.keep_series = keep_series
        self.member = member
        self._rows: List[Dict[str, float]] = []

    def observe(self, state) -> None:
        row = {'member': self.member, 'time': float(state.time)}
        for name, functional in self.functionals.items():
            value = float(functional(state.field))
            self.accumulators[name].add(value)
            row[name] = value
        if self.keep_series:
            self._rows.append(row)

    def merge(self, other: "FunctionalObserver") -> "FunctionalObserver":
        for name, accumulator in self.accumulators.items():
            accumulator.merge(other.accumulators[name])
        self._rows.extend(other._rows)
        self.samples_seen += other.samples_seen
        return self

    def series(self) -> pd.DataFrame:
        columns = ['member', 'time'] + list(self.functionals)
        return pd.DataFrame(self._rows, columns=columns)

    def summary(self) -> Dict[str, Any]:
        result = super().summary()
        result['functionals'] = {name: acc.to_dict() for name, acc in self.accumulators.items()}
        return result


class SpectrumAccumulator(SampleObserver):
    """Time average of |x(k)| per representative mode"""

    def __init__(self, truncation: Truncation):
        super().__init__()
        self.truncation = truncation
        self._amplitude_sum = np.zeros(truncation.mode_count)

    def observe(self, state) -> None:
        self._amplitude_sum += np.linalg.norm(state.field.coefficients, axis=1)

    def merge(self, other: "SpectrumAccumulator") -> "SpectrumAccumulator":
        self._amplitude_sum += other._amplitude_sum
        self.samples_seen += other.samples_seen
        return self

    def mean_amplitudes(self) -> np.ndarray:
        if self.samples_seen == 0:
            raise DiagnosticError("No spectra accumulated", diagnostic="spectrum", available=0)
        return self._amplitude_sum / self.samples_seen

    def summary(self) -> Dict[str, Any]:
        return {'samples_seen': self.samples_seen, 'k_max': self.truncation.k_max}
