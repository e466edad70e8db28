"""Monte Carlo plumbing shared by the estimators.

Samples are split into contiguous chunks, one per worker. Worker ``k`` draws
from ``SeedSequence(seed).spawn(workers)[k]`` and the per-chunk statistics
are merged in worker order, so results are bitwise reproducible for a fixed
``(seed, workers)`` pair.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import sqrt, inf

import numpy as np

logger = logging.getLogger(__name__)

__all__ = ["MVEstimate", "RunningStats", "split_samples", "run_chunks"]


@dataclass(frozen=True)
class MVEstimate:
    """Monte Carlo estimate: mean, standard error of the mean, sample count, seed."""

    value: float
    std_error: float
    samples: int
    seed: int
    diagnostics: dict = field(default_factory=dict, compare=False)

    def scaled(self, factor: float) -> "MVEstimate":
        return MVEstimate(self.value * factor, self.std_error * abs(factor), self.samples, self.seed, self.diagnostics)

    def zscore(self, target: float) -> float:
        if self.std_error == 0:
            return 0.0 if abs(self.value - target) <= 1e-12 * max(1.0, abs(target)) else inf
        return (self.value - target) / self.std_error

    def to_json(self) -> dict:
        return {"value": self.value, "std_error": self.std_error, "samples": self.samples, "seed": self.seed}


class RunningStats:
    """Streaming mean and variance (Chan et al. pairwise update)."""

    __slots__ = ("count", "mean", "m2")

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0

    def push(self, values) -> None:
        x = np.asarray(values, dtype=float).ravel()
        if x.size == 0:
            return
        other = RunningStats()
        other.count = x.size
        other.mean = float(x.mean())
        other.m2 = float(((x - other.mean) ** 2).sum())
        self.merge(other)

    def merge(self, other: "RunningStats") -> None:
        if other.count == 0:
            return
        n = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / n
        self.m2 += other.m2 + delta * delta * self.count * other.count / n
        self.count = n

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def std_error(self) -> float:
        return sqrt(self.variance / self.count) if self.count > 1 else 0.0


def split_samples(samples: int, workers: int) -> list[int]:
    base, extra = divmod(samples, workers)
    return [base + (i < extra) for i in range(workers)]


def run_chunks(fn, samples: int, seed: int, workers: int = 1, args: tuple = ()):
    """Run ``fn(seed_sequence, count, *args) -> (RunningStats, diagnostics)`` per worker.

    Returns the merged statistics and the summed diagnostics dictionary.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    streams = np.random.SeedSequence(seed).spawn(workers)
    counts = split_samples(samples, workers)
    if workers == 1:
        results = [fn(streams[0], counts[0], *args)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, s, c, *args) for s, c in zip(streams, counts)]
            results = [f.result() for f in futures]
    total = RunningStats()
    diag: dict = {}
    for stats, d in results:
        total.merge(stats)
        for k, v in d.items():
            diag[k] = diag.get(k, 0) + v if isinstance(v, (int, float)) else v
    logger.debug("merged %d worker chunks: n=%d mean=%.6g", workers, total.count, total.mean)
    return total, diag
