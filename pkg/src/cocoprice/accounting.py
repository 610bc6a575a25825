"""Noisy accounting reports and the filtered densities of the latent log-assets.

Reports arrive at ``t_1 < ... < t_n`` and carry ``Y_i = Z_i + U_i`` with AR(1)
noise ``U_i = kappa U_{i-1} + eps_i``. The first report uses ``U_1 = eps_1``.
The latent path starts from a known ``z0`` at ``t_0 = 0``.

All targets are returned as log values; off-support points get ``-inf``.
Paths are arrays whose last axis indexes the coordinates, so a whole batch
of MCMC chains is evaluated in one call.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .closed_form import (
    LOG_SQRT_2PI,
    DomainError,
    DriftParams,
    _log_killed,
    _log_psi,
    _log_survive,
)


@dataclass(frozen=True)
class ObsParams:
    """AR(1) accounting-noise parameters."""

    kappa: float
    mu_eps: float
    sigma_eps: float

    def __post_init__(self):
        if not np.isfinite(self.kappa):
            raise DomainError("kappa must be finite")
        if not (np.isfinite(self.sigma_eps) and self.sigma_eps > 0):
            raise DomainError(f"sigma_eps must be positive, got {self.sigma_eps}")


@dataclass(frozen=True)
class AccountingHistory:
    """Report times (years), log-reports and the known initial log-asset ``z0``."""

    times: tuple = ()
    log_reports: tuple = ()
    z0: float = float(np.log(100.0))
    _t: np.ndarray = field(init=False, repr=False, compare=False)
    _y: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).reshape(-1)
        y = np.asarray(self.log_reports, dtype=float).reshape(-1)
        if t.shape != y.shape:
            raise DomainError("times and log_reports must have equal length")
        if t.size and (t[0] <= 0 or np.any(np.diff(t) <= 0)):
            raise DomainError("report times must be positive and strictly increasing")
        t.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "times", tuple(t.tolist()))
        object.__setattr__(self, "log_reports", tuple(y.tolist()))
        object.__setattr__(self, "_t", t)
        object.__setattr__(self, "_y", y)

    @classmethod
    def from_levels(cls, times, reports, v0=100.0):
        return cls(tuple(times), tuple(np.log(np.asarray(reports, dtype=float))), float(np.log(v0)))

    @property
    def n(self) -> int:
        return self._t.size

    @property
    def t(self) -> np.ndarray:
        return self._t

    @property
    def y(self) -> np.ndarray:
        return self._y

    @property
    def last_time(self) -> float:
        return float(self._t[-1]) if self.n else 0.0

    def truncated(self, k: int) -> "AccountingHistory":
        """History restricted to the first ``k`` reports."""
        return AccountingHistory(self.times[:k], self.log_reports[:k], self.z0)


def log_transition_z(z_next, z_prev, dt, p: DriftParams):
    if np.any(np.asarray(dt) <= 0):
        raise DomainError("dt must be > 0")
    s = p.sigma * np.sqrt(dt)
    d = (np.asarray(z_next) - np.asarray(z_prev) - p.m * dt) / s
    return -0.5 * d * d - LOG_SQRT_2PI - np.log(s)


def log_transition_u(u_next, u_prev, o: ObsParams):
    """Log density of ``U_i`` given ``U_{i-1}``; ``u_prev=None`` marks the first report."""
    mean = o.mu_eps if u_prev is None else o.kappa * np.asarray(u_prev) + o.mu_eps
    d = (np.asarray(u_next) - mean) / o.sigma_eps
    return -0.5 * d * d - LOG_SQRT_2PI - np.log(o.sigma_eps)


def _plain_terms(path, hist, p, o):
    """Per-report log p_Z + log p_U, summed. ``path[..., :n]`` are report coordinates."""
    n = hist.n
    z = path[..., :n]
    zprev = np.concatenate([np.full(z.shape[:-1] + (1,), hist.z0), z[..., :-1]], axis=-1)
    dt = np.diff(np.concatenate([[0.0], hist.t]))
    total = np.sum(log_transition_z(z, zprev, dt, p), axis=-1)
    u = hist.y - z
    total = total + log_transition_u(u[..., 0], None, o)
    if n > 1:
        total = total + np.sum(log_transition_u(u[..., 1:], u[..., :-1], o), axis=-1)
    return total, z, zprev, dt


def log_b_n(path, hist: AccountingHistory, z_c: float, p: DriftParams, o: ObsParams):
    """Unnormalized log density of the report-date path given reports and no conversion."""
    path = np.asarray(path, dtype=float)
    if path.shape[-1] < hist.n:
        raise DomainError("path shorter than the history")
    if hist.n == 0:
        return np.zeros(path.shape[:-1])
    total, z, zprev, dt = _plain_terms(path, hist, p, o)
    alive = np.all(z > z_c, axis=-1) & (hist.z0 > z_c)
    with np.errstate(invalid="ignore", divide="ignore"):
        lpsi = _log_psi(zprev - z_c, z - z_c, p.sigma * np.sqrt(dt))
        out = total + np.sum(lpsi, axis=-1)
    return np.where(alive, out, -np.inf)


def log_posterior_plain(path, hist: AccountingHistory, p: DriftParams, o: ObsParams):
    """Unnormalized log density of the report-date path given reports only (no barrier)."""
    path = np.asarray(path, dtype=float)
    if hist.n == 0:
        return np.zeros(path.shape[:-1])
    return _plain_terms(path, hist, p, o)[0]


def _last_report_coord(path, hist):
    if hist.n:
        return path[..., hist.n - 1]
    return np.full(path.shape[:-1], hist.z0)


def log_target_alg1(path, t, hist: AccountingHistory, z_c, p: DriftParams, o: ObsParams):
    """Target for sampling (z_1..z_n, Z_t) given reports and survival.

    When ``t`` equals the last report time the extra coordinate is dropped and
    the path has ``n`` coordinates (the target is ``b_n``).
    """
    path = np.asarray(path, dtype=float)
    tau = t - hist.last_time
    if tau < 0:
        raise DomainError("valuation time precedes the last report")
    base = log_b_n(path, hist, z_c, p, o)
    if tau == 0:
        return base
    x = path[..., hist.n]
    zn = _last_report_coord(path, hist)
    ok = (x > z_c) & (zn > z_c)
    xs = np.where(ok, x, z_c + 1.0)
    zs = np.where(ok, zn, z_c + 1.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        lf = _log_killed(zs, z_c, xs, tau, p.m, p.sigma) - _log_survive(tau, zs - z_c, p.m, p.sigma)
    return np.where(ok, base + lf, -np.inf)


def log_target_alg2(path, t, T, hist: AccountingHistory, z_c, p: DriftParams, o: ObsParams):
    """Normalized target over (z_1..z_n, Z_t, Z_T) for the bridge term.

    The last coordinate is the level at maturity ``T``; the killed density is
    divided by its mass so that the density integrates to 1 given the prefix.
    With ``t`` equal to the last report time the path is (z_1..z_n, Z_T).
    """
    path = np.asarray(path, dtype=float)
    if T <= t:
        raise DomainError("need T > t")
    head = path[..., :-1]
    zT = path[..., -1]
    base = log_target_alg1(head, t, hist, z_c, p, o)
    x = head[..., -1] if head.shape[-1] > hist.n else _last_report_coord(head, hist)
    ok = (x > z_c) & (zT > z_c)
    xs = np.where(ok, x, z_c + 1.0)
    zs = np.where(ok, zT, z_c + 1.0)
    h = T - t
    with np.errstate(invalid="ignore", divide="ignore"):
        lk = _log_killed(xs, z_c, zs, h, p.m, p.sigma) - _log_survive(h, xs - z_c, p.m, p.sigma)
    return np.where(ok & np.isfinite(base), base + lk, -np.inf)
