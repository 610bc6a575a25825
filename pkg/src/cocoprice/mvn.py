"""Joint normal law of the next ``i`` accounting reports and its rectangle probabilities.

Internal ordering is chronological: entry ``j`` (0-based) is ``Y_{n+j+1}``.
The reverse order (latest report first) is available via ``reversed_order``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .accounting import ObsParams
from .closed_form import DomainError, DriftParams


def norm_sf(x):
    return ndtr(-np.asarray(x, dtype=float))


@dataclass(frozen=True)
class ReportProjection:
    mean: np.ndarray
    cov: np.ndarray

    @property
    def horizon(self) -> int:
        return self.mean.shape[-1]

    def reversed_order(self) -> "ReportProjection":
        return ReportProjection(self.mean[..., ::-1], self.cov[::-1, ::-1])


def mixing_matrix(i: int, kappa: float) -> np.ndarray:
    """Map from (Z increments, noise innovations) to the ``i`` future reports."""
    jj, kk = np.meshgrid(np.arange(i), np.arange(i), indexing="ij")
    lower = kk <= jj
    ones = lower.astype(float)
    powers = np.where(lower, float(kappa) ** np.where(lower, jj - kk, 0), 0.0)
    return np.hstack([ones, powers])


def build_projection(i, z_n, y_n, dt, p: DriftParams, o: ObsParams) -> ReportProjection:
    """Mean and covariance of ``(Y_{n+1}, ..., Y_{n+i})`` given ``Z_n = z_n`` and ``Y_n = y_n``.

    ``dt`` may be a scalar spacing or a length-``i`` array of spacings.
    ``z_n`` may be an array; the mean then gains leading axes.
    """
    if i < 1:
        raise DomainError("i must be >= 1")
    dts = np.broadcast_to(np.asarray(dt, dtype=float), (i,))
    if np.any(dts <= 0):
        raise DomainError("dt must be > 0")
    M = mixing_matrix(i, o.kappa)
    mu_prime = np.concatenate([p.m * dts, np.full(i, o.mu_eps)])
    var_prime = np.concatenate([p.sigma**2 * dts, np.full(i, o.sigma_eps**2)])
    kap = float(o.kappa) ** np.arange(1, i + 1)
    z_n = np.asarray(z_n, dtype=float)
    mean = M @ mu_prime + kap * y_n + (1.0 - kap) * z_n[..., None]
    cov = (M * var_prime) @ M.T
    return ReportProjection(mean, 0.5 * (cov + cov.T))


def rectangle_prob(proj: ReportProjection, lower, n_draws: int = 100_000, seed: int = 0):
    """P(xi > lower componentwise) with its standard error.

    ``i = 1`` is exact. Otherwise Cholesky Monte Carlo with antithetic pairs;
    ``-inf`` bounds are allowed.
    """
    lower = np.asarray(lower, dtype=float)
    mean = np.asarray(proj.mean, dtype=float)
    if lower.shape != mean.shape:
        raise DomainError("bounds and mean must have the same shape")
    if np.all(np.isneginf(lower)):
        return 1.0, 0.0
    if mean.size == 1:
        return float(norm_sf((lower[0] - mean[0]) / np.sqrt(proj.cov[0, 0]))), 0.0
    try:
        chol = np.linalg.cholesky(proj.cov)
    except np.linalg.LinAlgError as exc:
        raise DomainError("covariance is not positive definite") from exc
    rng = np.random.Generator(np.random.PCG64(seed))
    half = max(1, n_draws // 2)
    eps = rng.standard_normal((half, mean.size)) @ chol.T
    pair = 0.5 * (np.all(mean + eps > lower, axis=1).astype(float) + np.all(mean - eps > lower, axis=1))
    return float(pair.mean()), float(pair.std(ddof=1) / np.sqrt(half))
