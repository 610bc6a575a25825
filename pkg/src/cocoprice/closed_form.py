"""First-passage formulas for a drifted Brownian motion.

Every function works on log-asset distances and broadcasts over numpy
arrays. Exponential factors such as ``exp(-2 m x / sigma**2)`` are combined
with normal tail probabilities in log space (``log_ndtr``) so that neither
overflows nor underflows for small ``sigma * sqrt(t)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import log_ndtr, ndtr

LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


class DomainError(ValueError):
    """Raised when an argument lies outside a formula's domain."""


@dataclass(frozen=True)
class DriftParams:
    """Drift ``m`` and volatility ``sigma`` of the log-asset process ``Z``."""

    m: float
    sigma: float

    def __post_init__(self):
        if not np.isfinite(self.m):
            raise DomainError(f"drift m must be finite, got {self.m}")
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"sigma must be positive, got {self.sigma}")


def _positive(name, value):
    arr = np.asarray(value, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"{name} must be > 0")
    return arr


def _log1mexp(a):
    """log(1 - exp(a)) for a <= 0, accurate at both ends."""
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(a > -0.6931471805599453, np.log(-np.expm1(a)), np.log1p(-np.exp(a)))


def _out(value):
    value = np.asarray(value, dtype=float)
    return value.item() if value.ndim == 0 else value


# --- unchecked kernels (also used by the log targets) ----------------------


def _log_hit(t, x, m, sigma):
    s = sigma * np.sqrt(t)
    a = log_ndtr(-(x + m * t) / s)
    b = -2.0 * m * x / sigma**2 + log_ndtr((-x + m * t) / s)
    return np.minimum(np.logaddexp(a, b), 0.0)


def _log_survive(t, x, m, sigma):
    """log(1 - pi(t, x))."""
    s = sigma * np.sqrt(t)
    a = log_ndtr((x + m * t) / s)
    b = -2.0 * m * x / sigma**2 + log_ndtr((-x + m * t) / s)
    with np.errstate(invalid="ignore"):
        return a + _log1mexp(np.minimum(b - a, 0.0))


def _log_psi(z0, x, scale):
    return _log1mexp(-2.0 * z0 * x / scale**2)


def _log_killed(x, y, z_end, t2, m, sigma):
    """log of the barrier-killed transition density, barrier ``y``."""
    s = sigma * np.sqrt(t2)
    d = (z_end - x - m * t2) / s
    gauss = -0.5 * d * d - LOG_SQRT_2PI - np.log(s)
    return gauss + _log_psi(x - y, z_end - y, s)


# --- public surface ---------------------------------------------------------


def hit_prob(t, x, p: DriftParams):
    """Probability that ``Z`` started at distance ``x`` above 0 hits 0 before ``t``.

    ``t = 0`` returns 0 (no time to hit).
    """
    t = np.asarray(t, dtype=float)
    x = _positive("x", x)
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    tt = np.where(t > 0, t, 1.0)
    val = np.exp(_log_hit(tt, x, p.m, p.sigma))
    return _out(np.where(t > 0, val, 0.0))


def survival_prob(t, x, p: DriftParams):
    """``1 - hit_prob(t, x)``, computed without cancellation."""
    t = np.asarray(t, dtype=float)
    x = _positive("x", x)
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    tt = np.where(t > 0, t, 1.0)
    val = np.exp(_log_survive(tt, x, p.m, p.sigma))
    return _out(np.where(t > 0, val, 1.0))


def bridge_no_hit_prob(z0, x, scale):
    """Probability that a Brownian bridge from ``z0 > 0`` to ``x > 0`` stays above 0.

    ``scale`` is ``sigma * sqrt(t)`` of the bridge.
    """
    z0 = _positive("z0", z0)
    x = _positive("x", x)
    scale = _positive("scale", scale)
    return _out(-np.expm1(-2.0 * z0 * x / scale**2))


def log_bridge_no_hit_prob(z0, x, scale):
    z0 = _positive("z0", z0)
    x = _positive("x", x)
    scale = _positive("scale", scale)
    return _out(_log_psi(z0, x, scale))


def min_tail_joint(t, x, y, p: DriftParams):
    """P(min of ``Z`` on [0, t] > 0 and ``Z_t > y``) for ``Z_0 = x``.

    For ``y <= 0`` the tail constraint is implied by survival, so the result
    is ``1 - hit_prob(t, x)``.
    """
    t = _positive("t", t)
    x = _positive("x", x)
    y = np.maximum(np.asarray(y, dtype=float), 0.0)
    s = p.sigma * np.sqrt(t)
    a = log_ndtr((x - y + p.m * t) / s)
    b = -2.0 * p.m * x / p.sigma**2 + log_ndtr((-x - y + p.m * t) / s)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.exp(a) * -np.expm1(np.minimum(b - a, 0.0))
    val = np.where(np.isneginf(a), 0.0, val)
    return _out(np.clip(val, 0.0, 1.0))


def log_killed_density(x, y, z_end, t2, p: DriftParams):
    """Log of the barrier-killed density of ``Z_{t2}`` at ``z_end`` from ``x``.

    The barrier is at ``y``; the density is defective, with total mass
    ``1 - hit_prob(t2, x - y)``.
    """
    t2 = _positive("t2", t2)
    x = np.asarray(x, dtype=float)
    z_end = np.asarray(z_end, dtype=float)
    if np.any(x <= y) or np.any(z_end <= y):
        raise DomainError("need x > y and z_end > y")
    return _out(_log_killed(x, y, z_end, t2, p.m, p.sigma))


def killed_density(x, y, z_end, t2, p: DriftParams):
    return _out(np.exp(log_killed_density(x, y, z_end, t2, p)))


def log_pre_report_density(t, x, z0, barrier, p: DriftParams):
    """Log density of ``Z_t`` given ``Z_0 = z0`` and no barrier hit up to ``t``."""
    t = _positive("t", t)
    x = np.asarray(x, dtype=float)
    z0 = np.asarray(z0, dtype=float)
    if np.any(x <= barrier) or np.any(z0 <= barrier):
        raise DomainError("need x > barrier and z0 > barrier")
    return _out(
        _log_killed(z0, barrier, x, t, p.m, p.sigma)
        - _log_survive(t, z0 - barrier, p.m, p.sigma)
    )


def pre_report_density(t, x, z0, barrier, p: DriftParams):
    return _out(np.exp(log_pre_report_density(t, x, z0, barrier, p)))


def _integration_upper(x, t, p):
    return x + abs(p.m) * t + 12.0 * p.sigma * np.sqrt(t)


def joint_barrier_prob(x, y, z, t1, t2, p: DriftParams, *, epsabs=1e-13):
    """Probability of staying above ``z`` on [0, t1] while touching ``y`` before ``t2``.

    Requires ``x > y > z``. Scalar only; the ``t1 > t2`` branch integrates the
    killed density numerically.
    """
    if not (x > y > z):
        raise DomainError("need x > y > z")
    if t1 <= 0 or t2 <= 0:
        raise DomainError("t1 and t2 must be > 0")
    if t1 <= t2:
        return float(hit_prob(t2, x - y, p) - hit_prob(t1, x - z, p))

    def integrand(w):
        return survival_prob(t1 - t2, w - z, p) * killed_density(x, y, w, t2, p)

    mode = x + p.m * t2
    upper = _integration_upper(x, t2, p)
    pts = [v for v in (mode,) if y < v < upper]
    inner, _ = integrate.quad(integrand, y, upper, points=pts or None,
                              epsabs=epsabs, epsrel=1e-12, limit=200)
    return float(1.0 - hit_prob(t1, x - z, p) - inner)


def _beta(r, p):
    return np.sqrt(p.m**2 + 2.0 * r * p.sigma**2)


def discounted_hitting_transform(x, barrier, horizon, r, p: DriftParams):
    """``-E[exp(-r tau) 1{tau <= horizon}]`` for the first hit of ``barrier`` from ``x``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= barrier):
        raise DomainError("x must be above the barrier")
    horizon = np.asarray(horizon, dtype=float)
    if np.any(horizon < 0) or r < 0:
        raise DomainError("horizon and r must be >= 0")
    return _out(_hit_transform(x - barrier, horizon, r, p))


def _hit_transform(d, horizon, r, p):
    beta = _beta(r, p)
    s2 = p.sigma**2
    hz = np.where(horizon > 0, horizon, 1.0)
    s = p.sigma * np.sqrt(hz)
    a1 = -(p.m + beta) * d / s2 + log_ndtr(-(d - beta * hz) / s)
    a2 = (beta - p.m) * d / s2 + log_ndtr(-(d + beta * hz) / s)
    val = -(np.exp(a1) + np.exp(a2))
    return np.where(horizon > 0, np.maximum(val, -1.0), 0.0)


def discounted_survival_annuity(x, barrier, horizon, r, p: DriftParams):
    """``E[int_0^horizon exp(-r u) 1{tau > u} du]`` for the first hit of ``barrier``.

    ``r = 0`` is rejected: the closed form divides by ``r``; use the time
    integral of ``survival_prob`` instead.
    """
    if r <= 0:
        raise DomainError("r must be > 0; integrate survival_prob directly for r = 0")
    x = np.asarray(x, dtype=float)
    if np.any(x <= barrier):
        raise DomainError("x must be above the barrier")
    horizon = np.asarray(horizon, dtype=float)
    if np.any(horizon < 0):
        raise DomainError("horizon must be >= 0")
    return _out(_survival_annuity(x - barrier, horizon, r, p))


def _survival_annuity(d, horizon, r, p):
    hz = np.where(horizon > 0, horizon, 1.0)
    surv = np.exp(_log_survive(hz, d, p.m, p.sigma))
    val = (1.0 - np.exp(-r * hz) * surv + _hit_transform(d, hz, r, p)) / r
    upper = -np.expm1(-r * hz) / r
    return np.where(horizon > 0, np.clip(val, 0.0, upper), 0.0)


def perpetual_hit_transform(x, barrier, r, p: DriftParams):
    """``-E[exp(-r tau)]`` over an infinite horizon (Laplace transform of the hit time)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= barrier):
        raise DomainError("x must be above the barrier")
    if r < 0:
        raise DomainError("r must be >= 0")
    return _out(-np.exp(-(p.m + _beta(r, p)) * (x - barrier) / p.sigma**2))


def perpetual_survival_annuity(x, barrier, r, p: DriftParams):
    if r <= 0:
        raise DomainError("r must be > 0")
    return _out((1.0 + np.asarray(perpetual_hit_transform(x, barrier, r, p))) / r)


def normal_cdf(x):
    return ndtr(x)
