"""Random-walk Metropolis-Hastings and the estimators built on it.

Chains run in lockstep: the log target is called on a ``(n_chains, dim)``
array per iteration, so a batch of independent chains costs about as much
as one. Proposal scales adapt only during burn-in and are frozen afterwards.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import mvn
from .accounting import (
    AccountingHistory,
    ObsParams,
    log_posterior_plain,
    log_target_alg1,
    log_target_alg2,
)
from .closed_form import DomainError, DriftParams, _log_survive
from .estimates import PriceEstimate, batch_means_ess, batch_means_stderr


class ChainInitError(RuntimeError):
    """The chain's starting point is outside the target's support."""


@dataclass(frozen=True)
class ChainConfig:
    burn_in: int = 20_000
    samples: int = 200_000
    target_acceptance: float = 0.3
    seed: int = 0
    proposal_scale: float = 0.05
    n_chains: int = 16
    n_batches: int = 50

    def __post_init__(self):
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not 0 < self.target_acceptance < 1:
            raise ValueError("target_acceptance must lie in (0, 1)")
        if self.n_chains < 1:
            raise ValueError("n_chains must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @property
    def per_chain(self) -> int:
        return -(-self.samples // self.n_chains)

    def with_seed(self, seed: int) -> "ChainConfig":
        from dataclasses import replace

        return replace(self, seed=int(seed))


@dataclass(frozen=True)
class ChainResult:
    chains: np.ndarray  # (n_chains, per_chain, dim)
    acceptance_rate: float
    effective_sample_size: np.ndarray
    seed_used: int
    proposal_std: np.ndarray

    @property
    def samples(self) -> np.ndarray:
        return self.chains.reshape(-1, self.chains.shape[-1])

    @property
    def dim(self) -> int:
        return self.chains.shape[-1]


_RESETS = (0.2, 0.4, 0.6)


def rw_metropolis(log_target, init, cfg: ChainConfig, scale_hint=None) -> ChainResult:
    """Sample ``exp(log_target)`` with Gaussian random-walk proposals.

    ``log_target`` maps an ``(k, dim)`` array to ``k`` log densities. ``init``
    is a single point or one point per chain. ``scale_hint`` gives relative
    per-coordinate step sizes. During burn-in a per-chain scalar scale is
    tuned by Robbins-Monro toward ``cfg.target_acceptance`` and the
    per-coordinate stds are re-estimated from the pooled burn-in draws.
    """
    init = np.atleast_1d(np.asarray(init, dtype=float))
    k = cfg.n_chains
    x = np.broadcast_to(init, (k, init.shape[-1])).copy()
    dim = x.shape[1]
    lp = np.asarray(log_target(x), dtype=float)
    if not np.all(np.isfinite(lp)):
        raise ChainInitError("log target is not finite at the initial point")

    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    base = cfg.proposal_scale * (np.ones(dim) if scale_hint is None else np.asarray(scale_hint, float))
    log_s = np.zeros(k)
    n0, length = cfg.burn_in, cfg.per_chain
    resets = sorted({int(f * n0) for f in _RESETS if int(f * n0) > 10})
    window_start = 0
    burn = np.empty((n0, k, dim)) if resets else None
    out = np.empty((k, length, dim))
    accepted = 0

    for it in range(n0 + length):
        step = rng.standard_normal((k, dim)) * (np.exp(log_s)[:, None] * base)
        prop = x + step
        lp_prop = np.asarray(log_target(prop), dtype=float)
        delta = np.where(np.isfinite(lp_prop), lp_prop - lp, -np.inf)
        log_u = np.log(rng.random(k))
        acc = log_u < delta
        x = np.where(acc[:, None], prop, x)
        lp = np.where(acc, lp_prop, lp)
        if it < n0:
            a = np.exp(np.minimum(delta, 0.0))
            log_s += (it + 1) ** -0.6 * (a - cfg.target_acceptance)
            if burn is not None:
                burn[it] = x
                if it + 1 in resets:
                    window = burn[window_start : it + 1].reshape(-1, dim)
                    sd = window.std(axis=0)
                    base = np.where(sd > 0, sd, base * 0.1)
                    log_s[:] = np.log(2.38 / np.sqrt(dim))
                    window_start = it + 1
        else:
            out[:, it - n0] = x
            accepted += int(acc.sum())

    flat = out
    ess = np.array([batch_means_ess(flat[:, :, j], cfg.n_batches) for j in range(dim)])
    return ChainResult(
        chains=out,
        acceptance_rate=accepted / (k * length),
        effective_sample_size=ess,
        seed_used=cfg.seed,
        proposal_std=np.exp(log_s)[:, None] * base,
    )


# --- Algorithm-specific samplers ----------------------------------------------


def _report_init(hist, z_c, o):
    y = np.asarray(hist.y, dtype=float)
    if z_c is None:
        return y.copy()
    return np.maximum(y, z_c + 3.0 * o.sigma_eps)


def _report_hint(hist, p, o):
    dt = np.diff(np.concatenate([[0.0], hist.t])) if hist.n else np.array([])
    return np.minimum(o.sigma_eps, p.sigma * np.sqrt(dt))


def _check_prefix(t, hist):
    if t < hist.last_time:
        raise DomainError("valuation time precedes the last report")


def sample_alg1(t, hist: AccountingHistory, z_c, p: DriftParams, o: ObsParams, cfg: ChainConfig):
    """Draws of (z_1..z_n, Z_t) from the survival-conditioned filtered law."""
    _check_prefix(t, hist)
    if hist.z0 <= z_c:
        raise DomainError("initial log-asset must lie above the conversion barrier")
    init = _report_init(hist, z_c, o)
    hint = _report_hint(hist, p, o)
    tau = t - hist.last_time
    if tau > 0:
        last = init[-1] if hist.n else hist.z0
        init = np.append(init, last)
        hint = np.append(hint, p.sigma * np.sqrt(tau))
    if init.size == 0:
        raise DomainError("nothing to sample: no reports and t equals 0")
    return rw_metropolis(lambda z: log_target_alg1(z, t, hist, z_c, p, o), init, cfg, hint)


def sample_alg2(t, T, hist: AccountingHistory, z_c, p: DriftParams, o: ObsParams, cfg: ChainConfig):
    """Draws of (z_1..z_n, Z_t, Z_T) for the bridge term; see ``log_target_alg2``."""
    _check_prefix(t, hist)
    if T <= t:
        raise DomainError("need T > t")
    init = _report_init(hist, z_c, o)
    hint = _report_hint(hist, p, o)
    tau = t - hist.last_time
    last = init[-1] if hist.n else hist.z0
    if tau > 0:
        init = np.append(init, last)
        hint = np.append(hint, p.sigma * np.sqrt(tau))
    init = np.append(init, last)
    hint = np.append(hint, p.sigma * np.sqrt(T - t))
    return rw_metropolis(lambda z: log_target_alg2(z, t, T, hist, z_c, p, o), init, cfg, hint)


def sample_alg3(hist: AccountingHistory, p: DriftParams, o: ObsParams, cfg: ChainConfig):
    """Draws of (z_1..z_n) given the reports, without barrier conditioning."""
    if hist.n == 0:
        raise DomainError("the plain posterior needs at least one report")
    init = _report_init(hist, None, o) - o.mu_eps
    return rw_metropolis(lambda z: log_posterior_plain(z, hist, p, o), init, cfg, _report_hint(hist, p, o))


def _chain_meta(res: ChainResult, cfg: ChainConfig) -> dict:
    return {
        "acceptance_rate": res.acceptance_rate,
        "ess": float(np.min(res.effective_sample_size)),
        "n_chains": cfg.n_chains,
        "per_chain": cfg.per_chain,
        "burn_in": cfg.burn_in,
        "seed": res.seed_used,
    }


def average(values, res: ChainResult, cfg: ChainConfig, name="value") -> PriceEstimate:
    """Mean of per-draw values laid out like ``res.chains[..., 0]``."""
    v = np.asarray(values, dtype=float).reshape(res.chains.shape[:2])
    return PriceEstimate(
        float(v.mean()), batch_means_stderr(v, cfg.n_batches), {name: float(v.mean())}, _chain_meta(res, cfg)
    )


def estimate_E_f(h, t, hist, z_c, p, o, cfg: ChainConfig) -> PriceEstimate:
    """Estimate of the integral of ``h`` against the filtered density of ``Z_t``."""
    res = sample_alg1(t, hist, z_c, p, o, cfg)
    return average(h(res.samples[:, -1]), res, cfg)


def estimate_E_f_bridge(h2, t, T, hist, z_c, p, o, cfg: ChainConfig) -> PriceEstimate:
    """Estimate of the double integral of ``h2(Z_T)`` against f(t, x) times the killed density."""
    res = sample_alg2(t, T, hist, z_c, p, o, cfg)
    s = res.samples
    x = s[:, -2] if s.shape[1] > 1 else np.full(len(s), hist.z0)
    weight = np.exp(_log_survive(T - t, x - z_c, p.m, p.sigma))
    return average(h2(s[:, -1]) * weight, res, cfg)


@dataclass(frozen=True)
class SurvivalEstimates:
    """Estimates of P(future reports 1..i stay in the bounds) for i = 1..i_max."""

    values: np.ndarray
    stderrs: np.ndarray
    per_draw: np.ndarray  # (n_chains, per_chain, i_max)
    meta: dict

    def combine(self, weights, n_batches=50):
        """Value and stderr of ``sum_i weights[i] * P_i`` using per-draw correlations."""
        series = self.per_draw @ np.asarray(weights, dtype=float)
        return float(series.mean()), batch_means_stderr(series, n_batches)


def estimate_survival_functionals(
    i_max, bounds_builder, hist, p, o, cfg: ChainConfig, dt=0.25, chain: ChainResult | None = None
) -> SurvivalEstimates:
    """Average of MVN rectangle probabilities over plain-posterior draws of z^(n).

    ``bounds_builder(i)`` returns the ``i`` lower bounds of the i-step event
    in chronological order. Each draw is paired with one antithetic pair of
    Cholesky innovations; the last coordinate of every event is integrated
    analytically given the earlier ones, so i = 1 is exact per draw.
    """
    if i_max < 1:
        raise DomainError("i_max must be >= 1")
    res = chain if chain is not None else sample_alg3(hist, p, o, cfg)
    zn = res.chains[..., hist.n - 1]
    proj = mvn.build_projection(i_max, 0.0, hist.y[-1], dt, p, o)
    shift = 1.0 - o.kappa ** np.arange(1, i_max + 1)
    mean = proj.mean + zn[..., None] * shift  # (k, L, i_max)
    chol = np.linalg.cholesky(proj.cov)
    rng = np.random.Generator(np.random.PCG64([cfg.seed, 0xA3]))
    eps = rng.standard_normal(mean.shape)
    per = np.zeros(mean.shape)
    for sign in (1.0, -1.0):
        w = mean + sign * eps @ chol.T
        for i in range(1, i_max + 1):
            lower = np.asarray(bounds_builder(i), dtype=float)
            alive = np.all(w[..., : i - 1] > lower[: i - 1], axis=-1) if i > 1 else True
            cond_mean = mean[..., i - 1] + sign * (eps[..., : i - 1] @ chol[i - 1, : i - 1])
            tail = mvn.norm_sf((lower[i - 1] - cond_mean) / chol[i - 1, i - 1])
            per[..., i - 1] += 0.5 * np.where(alive, tail, 0.0)
    values = per.mean(axis=(0, 1))
    stderrs = np.array([batch_means_stderr(per[..., j], cfg.n_batches) for j in range(i_max)])
    return SurvivalEstimates(values, stderrs, per, _chain_meta(res, cfg))
