from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PriceEstimate:
    """A Monte Carlo estimate with its standard error.

    ``components`` are named sub-legs whose values sum to ``value``.
    ``meta`` carries diagnostics (acceptance rate, ESS, sample counts, seed).
    """

    value: float
    stderr: float
    components: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.stderr >= 0:
            raise ValueError("stderr must be >= 0")

    @classmethod
    def from_components(cls, components: dict, stderr: float, **meta) -> "PriceEstimate":
        comps = {k: float(v) for k, v in components.items()}
        return cls(float(sum(comps.values())), float(stderr), comps, meta)


def batch_means_stderr(values, n_batches: int = 50) -> float:
    """Batch-means standard error of the mean of a (chains, length) array."""
    values = np.atleast_2d(np.asarray(values, dtype=float))
    k, length = values.shape
    per_chain = max(1, -(-n_batches // k))
    size = length // per_chain
    if size < 1:
        per_chain, size = length, 1
    trimmed = values[:, : per_chain * size].reshape(k * per_chain, size)
    means = trimmed.mean(axis=1)
    if means.size < 2:
        return 0.0
    return float(np.std(means, ddof=1) / np.sqrt(means.size))


def batch_means_ess(values, n_batches: int = 50) -> float:
    values = np.atleast_2d(np.asarray(values, dtype=float))
    total = values.size
    var = float(np.var(values))
    se = batch_means_stderr(values, n_batches)
    if se == 0.0 or var == 0.0:
        return float(total)
    return float(min(total, var / se**2))


def derive_seed(master: int, *keys: int) -> int:
    """Deterministic child seed of ``master`` for the stream labelled by ``keys``."""
    seq = np.random.SeedSequence([int(master) & (2**64 - 1), *[int(k) for k in keys]])
    return int(seq.generate_state(1, np.uint64)[0])
