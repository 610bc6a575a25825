"""Brute-force simulation used to cross-check the analytic and MCMC code.

Nothing here reuses the density code of the other modules. Barrier crossings
between grid points are handled by conditional Monte Carlo: each path carries
the product of Brownian-bridge no-crossing probabilities of its steps, which
makes survival at grid times exact for any step size. Only time integrals of
smooth expected cashflows are discretized (trapezoid / integration by parts).

Prior-path importance sampling stands in for the filtered law of the latent
asset: paths are drawn from the unconditioned Gaussian dynamics and weighted
by the report likelihoods and bridge survival.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .accounting import AccountingHistory, ObsParams
from .closed_form import DomainError, DriftParams

_CELL_BUDGET = 4_000_000  # paths x grid points held in memory at once
PRODUCTS = ("pwd_reg", "pwd_reg_mda", "converter", "pwd_acc", "pwd_acc_mda")


class OracleDegenerateError(RuntimeError):
    """Importance weights collapsed onto too few draws."""


@dataclass(frozen=True)
class SimConfig:
    n_paths: int = 500_000
    grid_step: float = 1e-3
    seed: int = 0
    horizon_truncation_eps: float = 1e-6
    batch_size: int = 50_000
    min_ess: float = 100.0

    def __post_init__(self):
        if self.n_paths < 1:
            raise ValueError("n_paths must be >= 1")
        if not self.grid_step > 0:
            raise ValueError("grid_step must be > 0")
        if not 0 < self.horizon_truncation_eps < 1:
            raise ValueError("horizon_truncation_eps must lie in (0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    stderr: float
    ess: float = float("nan")
    n_paths: int = 0


# --- inline primitives -------------------------------------------------------


def _no_cross(a, b, barrier, var):
    """Bridge no-crossing probability for one step of variance ``var``."""
    da = a - barrier
    db = b - barrier
    with np.errstate(over="ignore"):
        out = 1.0 - np.exp(-2.0 * np.maximum(da, 0.0) * np.maximum(db, 0.0) / var)
    return np.where((da > 0) & (db > 0), out, 0.0)


def _alive_prob(t, d, m, sigma):
    """P(no hit of 0 on [0, t]) from distance ``d`` (inline reflection formula)."""
    s = sigma * np.sqrt(t)
    with np.errstate(over="ignore", invalid="ignore"):
        refl = np.exp(-2.0 * m * d / sigma**2) * ndtr((-d + m * t) / s)
    return np.clip(ndtr((d + m * t) / s) - np.nan_to_num(refl), 0.0, 1.0)


def _gauss_logpdf(x, mean, sd):
    z = (x - mean) / sd
    return -0.5 * z * z - np.log(sd) - 0.5 * np.log(2.0 * np.pi)


def _time_grid(start, end, step):
    n = max(1, int(np.ceil((end - start) / step - 1e-9)))
    return np.linspace(start, end, n + 1)


def _perpetual_grid(step, r, eps):
    """Grid from 0 to the truncation horizon: uniform, then geometric (5% growth)."""
    horizon = -np.log(eps) / r
    head = _time_grid(0.0, min(1.0, horizon), step)
    tail = [head[-1]]
    while tail[-1] < horizon:
        tail.append(min(horizon, tail[-1] * 1.05 + step))
    return np.concatenate([head, tail[1:]])


class _Moments:
    """Running sums for means, variances and the ratio covariance."""

    def __init__(self):
        self.n = 0
        self.s = {}

    def add(self, **cols):
        for k, v in cols.items():
            v = np.asarray(v, dtype=float)
            self.s[k] = self.s.get(k, 0.0) + v.sum(axis=0)
            self.s[k + "^2"] = self.s.get(k + "^2", 0.0) + (v * v).sum(axis=0)
        self.n += len(next(iter(cols.values())))

    def add_cross(self, a, b, va, vb):
        key = a + "*" + b
        self.s[key] = self.s.get(key, 0.0) + (np.asarray(va) * np.asarray(vb)).sum(axis=0)

    def mean(self, k):
        return self.s[k] / self.n

    def stderr(self, k):
        m = self.mean(k)
        var = self.s[k + "^2"] / self.n - m * m
        return np.sqrt(np.maximum(var, 0.0) / max(self.n - 1, 1))

    def ratio(self, a, b):
        """Ratio of means and its delta-method stderr."""
        ma, mb = self.mean(a), self.mean(b)
        n = self.n
        va = self.s[a + "^2"] / n - ma**2
        vb = self.s[b + "^2"] / n - mb**2
        cab = self.s[a + "*" + b] / n - ma * mb
        q = ma / mb
        var = (va - 2 * q * cab + q * q * vb) / (mb**2 * max(n - 1, 1))
        return q, np.sqrt(np.maximum(var, 0.0))


def _batches(n, size):
    done = 0
    while done < n:
        k = min(size, n - done)
        yield k
        done += k


def _paths(rng, x0, times, m, sigma, k):
    """``k`` paths of the drifted Brownian motion on ``times`` (first column is ``x0``)."""
    dt = np.diff(times)
    inc = m * dt + sigma * np.sqrt(dt) * rng.standard_normal((k, dt.size))
    x0 = np.broadcast_to(np.asarray(x0, dtype=float), (k,))
    return np.concatenate([x0[:, None], x0[:, None] + np.cumsum(inc, axis=1)], axis=1)


def _survival_curve(z, times, barrier, sigma):
    """Conditional survival at each grid time given the grid values (first column = 1)."""
    var = sigma**2 * np.diff(times)
    step = _no_cross(z[:, :-1], z[:, 1:], barrier, var)
    return np.concatenate([np.ones((z.shape[0], 1)), np.cumprod(step, axis=1)], axis=1)


def _discounted_integral(values, times, r):
    """Integral of exp(-r u) v(u) with ``v`` linear between grid points (exact in the discount)."""
    a, b = times[:-1], times[1:]
    h = b - a
    ea, eb = np.exp(-r * a), np.exp(-r * b)
    # weights of v(a) and v(b) in the exact integral of exp(-r u) times the linear interpolant
    k0 = (ea - eb) / r
    k1 = (ea - eb) / (r * r * h) - eb / r  # integral of exp(-r u) (u - a) / h
    w_b = k1
    w_a = k0 - k1
    return np.sum(values[..., :-1] * w_a + values[..., 1:] * w_b, axis=-1)


def _discounted_hit(surv, times, r):
    """E[exp(-r tau) 1{tau <= T}] per path, integrating by parts over the grid."""
    hit = 1.0 - surv
    return np.exp(-r * times[-1]) * hit[:, -1] + r * _discounted_integral(hit, times, r)


# --- closed-form oracles ------------------------------------------------------


def sim_first_passage(x, barrier, horizon, p: DriftParams, r, cfg: SimConfig, n_steps=50,
                      tail_level=None, bins=None, gamma=None, perpetual=False):
    """Path-simulation estimates of first-passage functionals from ``x``.

    Returns a dict of ``OracleEstimate`` for ``hit`` (pi), ``tail`` (joint
    survival with ``Z_T > tail_level``), ``I`` and ``I_tilde`` over
    ``horizon``; ``J`` and ``J_tilde`` when ``perpetual``; ``killed_bins`` and
    ``pre_report_bins`` (mass per bin edge pair in ``bins``); ``gamma`` for
    ``gamma=(y, z, t1, t2)`` with the times on the grid.
    """
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    times = _time_grid(0.0, horizon, horizon / n_steps)
    mom = _Moments()
    if perpetual:
        ptimes = _perpetual_grid(min(cfg.grid_step * 10, 0.05), r, cfg.horizon_truncation_eps)
    for k in _batches(cfg.n_paths, cfg.batch_size):
        if perpetual:
            z = _paths(rng, x, ptimes, p.m, p.sigma, k)
            surv = _survival_curve(z, ptimes, barrier, p.sigma)
            mom.add(J=-_discounted_hit(surv, ptimes, r), J_tilde=_discounted_integral(surv, ptimes, r))
            continue
        z = _paths(rng, x, times, p.m, p.sigma, k)
        surv = _survival_curve(z, times, barrier, p.sigma)
        cols = {
            "hit": 1.0 - surv[:, -1],
            "I": -_discounted_hit(surv, times, r),
            "I_tilde": _discounted_integral(surv, times, r),
            "alive": surv[:, -1],
        }
        if tail_level is not None:
            cols["tail"] = surv[:, -1] * (z[:, -1] > tail_level)
        if bins is not None:
            inside = (z[:, -1, None] >= bins[:-1]) & (z[:, -1, None] < bins[1:])
            cols["bins"] = surv[:, -1, None] * inside
        if gamma is not None:
            y, zz, t1, t2 = gamma
            i1, i2 = (int(np.argmin(abs(times - s))) for s in (t1, t2))
            var = p.sigma**2 * np.diff(times)
            step_y = _no_cross(z[:, :-1], z[:, 1:], y, var)
            step_z = _no_cross(z[:, :-1], z[:, 1:], zz, var)
            over_z = np.prod(step_z[:, :i1], axis=1)
            hi = max(i1, i2)
            idx = np.arange(hi)
            both = np.prod(np.where(idx < i2, step_y[:, :hi], step_z[:, :hi]), axis=1) if hi else np.ones(k)
            cols["gamma"] = over_z - both
        mom.add(**cols)
        if bins is not None:
            mom.add_cross("bins", "alive", cols["bins"], cols["alive"][:, None])
    out = {}
    for key in [c for c in mom.s if not ("^" in c or "*" in c)]:
        if key in ("alive",):
            continue
        out[key] = OracleEstimate(mom.mean(key), mom.stderr(key), n_paths=mom.n)
    if bins is not None:
        out["killed_bins"] = out.pop("bins")
        q, se = mom.ratio("bins", "alive")
        out["pre_report_bins"] = OracleEstimate(q, se, n_paths=mom.n)
    return out


def sim_bridge_no_hit(z0, x, scale, cfg: SimConfig, n_steps=32):
    """Probability that a Brownian bridge from ``z0`` to ``x`` (both > 0) stays positive."""
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    s = np.linspace(0.0, 1.0, n_steps + 1)
    mom = _Moments()
    for k in _batches(cfg.n_paths, cfg.batch_size):
        w = np.concatenate([np.zeros((k, 1)), np.cumsum(rng.standard_normal((k, n_steps)) * np.sqrt(np.diff(s)), axis=1)],
                           axis=1)
        path = z0 + (x - z0) * s + scale * (w - s * w[:, -1:])
        step = _no_cross(path[:, :-1], path[:, 1:], 0.0, scale**2 * np.diff(s))
        mom.add(v=np.prod(step, axis=1))
    return OracleEstimate(mom.mean("v"), mom.stderr("v"), n_paths=mom.n)


# --- filtered-law importance sampling ----------------------------------------


def _prior_history(rng, hist: AccountingHistory, t, p, k):
    """Latent values at report dates and at ``t`` drawn from the prior, shape (k, n + 1)."""
    times = np.concatenate([[0.0], hist.t, [t] if t > hist.last_time else []])
    z = _paths(rng, hist.z0, times, p.m, p.sigma, k)
    return z, times


def _report_loglik(z, hist, o):
    """log prod p_U over the reports; ``z[:, 1:n+1]`` are report-date values."""
    n = hist.n
    if n == 0:
        return np.zeros(z.shape[0])
    u = hist.y - z[:, 1 : n + 1]
    prev = np.concatenate([np.zeros((z.shape[0], 1)), u[:, :-1]], axis=1)
    mean = o.kappa * prev + o.mu_eps
    mean[:, 0] = o.mu_eps
    return np.sum(_gauss_logpdf(u, mean, o.sigma_eps), axis=1)


def _filter_weights(z, times, hist, z_c, p, o):
    """Weights making prior draws of Z_t follow the filtered law used by the pricer.

    Beyond the last report the survival-conditioned transition is normalized
    per starting point, so the bridge factor is divided by the survival
    probability from ``Z_{t_n}``.
    """
    logw = _report_loglik(z, hist, o)
    n = hist.n
    var = p.sigma**2 * np.diff(times)
    alive = np.all(z > z_c, axis=1)
    # dead paths give -inf - -inf here; they are masked below
    with np.errstate(divide="ignore", invalid="ignore"):
        logw = logw + np.sum(np.log(_no_cross(z[:, : n], z[:, 1 : n + 1], z_c, var[:n])), axis=1)
        if z.shape[1] > n + 1:
            tau = times[-1] - times[n]
            logw = logw + np.log(_no_cross(z[:, n], z[:, n + 1], z_c, var[n]))
            logw = logw - np.log(_alive_prob(tau, z[:, n] - z_c, p.m, p.sigma))
    return np.where(alive, logw, -np.inf)


def _weighted(values, logw, min_ess):
    """Self-normalized mean with delta-method stderr, and the ESS."""
    shift = np.max(logw)
    if not np.isfinite(shift):
        raise OracleDegenerateError("all importance weights vanish")
    w = np.exp(logw - shift)
    sw = w.sum()
    ess = sw**2 / np.sum(w * w)
    if ess < min_ess:
        raise OracleDegenerateError(f"importance sampling ESS {ess:.1f} is below {min_ess}")
    mu = np.sum(w * values) / sw
    se = np.sqrt(np.sum((w * (values - mu)) ** 2)) / sw
    return float(mu), float(se), float(ess)


def _draw_filtered(t, hist, z_c, p, o, cfg, rng):
    logws, xs = [], []
    for k in _batches(cfg.n_paths, cfg.batch_size):
        z, times = _prior_history(rng, hist, t, p, k)
        logws.append(_filter_weights(z, times, hist, z_c, p, o))
        xs.append(z[:, -1])
    return np.concatenate(xs), np.concatenate(logws)


def is_expectation_f(h, t, hist: AccountingHistory, z_c, p: DriftParams, o: ObsParams, cfg: SimConfig) -> OracleEstimate:
    """Self-normalized importance-sampling estimate of the filtered expectation of ``h(Z_t)``."""
    if t < hist.last_time:
        raise DomainError("valuation time precedes the last report")
    if hist.z0 <= z_c:
        raise DomainError("initial log-asset must lie above the barrier")
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    x, logw = _draw_filtered(t, hist, z_c, p, o, cfg, rng)
    vals = np.where(np.isfinite(logw), h(np.where(np.isfinite(logw), x, z_c + 1.0)), 0.0)
    mu, se, ess = _weighted(vals, logw, cfg.min_ess)
    return OracleEstimate(mu, se, ess, len(x))


# --- cashflow simulation ------------------------------------------------------


def _conversion_equity(firm, r, p):
    """Value of the firm's equity at the instant the asset sits at ``z_c``.

    Assets minus perpetual straight debt whose holders receive the assets at
    default; inline perpetual transforms of the first hit of ``z_b``.
    """
    beta = np.sqrt(p.m**2 + 2.0 * r * p.sigma**2)
    disc_default = np.exp(-(p.m + beta) * (firm.z_c - firm.z_b) / p.sigma**2)
    annuity = (1.0 - disc_default) / r
    return np.exp(firm.z_c) - firm.c1 * firm.p1 * annuity - np.exp(firm.z_b) * disc_default


def _regulatory_cashflows(x, product, t, firm, coco, r, p, cfg, rng):
    """Discounted CoCo cashflows per path started from ``x`` at time ``t``."""
    tau = coco.maturity - t
    if tau <= 0:
        return np.full(x.shape, coco.p2)
    times = _time_grid(0.0, tau, cfg.grid_step)
    chunk = max(256, _CELL_BUDGET // times.size)
    if x.size > chunk:
        return np.concatenate([
            _regulatory_cashflows(x[j : j + chunk], product, t, firm, coco, r, p, cfg, rng)
            for j in range(0, x.size, chunk)
        ])
    z = _paths(rng, x, times, p.m, p.sigma, x.size)
    surv = _survival_curve(z, times, firm.z_c, p.sigma)
    P = coco.p2
    principal = P * np.exp(-r * tau) * surv[:, -1]
    gate = (z > firm.z_cc) if product == "pwd_reg_mda" or (product == "converter" and coco.mda_enabled) else 1.0
    coupon = coco.c2 * P * _discounted_integral(surv * gate, times, r)
    hit_value = _discounted_hit(surv, times, r)
    if product == "converter":
        tail = coco.rho * _conversion_equity(firm, r, p) * hit_value
    else:
        tail = coco.recovery * P * hit_value
    return principal + coupon + tail


def _report_posterior(hist, p, o, cfg, rng, k):
    """Prior draws of report-date latents with plain (no barrier) posterior log weights."""
    times = np.concatenate([[0.0], hist.t])
    z = _paths(rng, hist.z0, times, p.m, p.sigma, k)
    return z[:, -1], hist.y[-1] - z[:, -1], _report_loglik(z, hist, o)


def _accounting_cashflows(zn, un, t, coco, hist, r, p, o, dt, mda, rng):
    """Simulate future reports and pay the accounting-trigger PWD cashflows."""
    tn = hist.last_time
    m = int(round((coco.maturity - tn) / dt))
    if m < 1 or abs(tn + m * dt - coco.maturity) > 1e-9:
        raise DomainError("maturity is not on the report grid")
    k = zn.size
    P, c, R = coco.p2, coco.c2, coco.recovery
    e = np.exp(-r * (tn + dt * np.arange(1, m + 1) - t))
    alive = np.ones(k, dtype=bool)
    paying = np.full(k, (hist.y[-1] > coco.y_cc) if mda else True)
    value = np.where(paying, c * P / r * (1.0 - e[0]), 0.0)
    z, u = zn.copy(), un.copy()
    for i in range(m):
        z = z + p.m * dt + p.sigma * np.sqrt(dt) * rng.standard_normal(k)
        u = o.kappa * u + o.mu_eps + o.sigma_eps * rng.standard_normal(k)
        y = z + u
        breach = alive & (y <= coco.y_c)
        value = value + np.where(breach, R * P * e[i], 0.0)
        alive = alive & ~breach
        if i == m - 1:
            value = value + np.where(alive, P * e[i], 0.0)
        else:
            gate = alive & (y > coco.y_cc) if mda else alive
            value = value + np.where(gate, c * P / r * (e[i] - e[i + 1]), 0.0)
    return value


def simulate_price(product, t, firm, coco, hist: AccountingHistory, params, cfg: SimConfig,
                   dt=0.25) -> OracleEstimate:
    """Direct cashflow simulation of one of ``PRODUCTS``.

    ``params`` is a ``pricing.ModelParams``-like object with ``m``, ``sigma``,
    ``kappa``, ``mu_eps``, ``sigma_eps`` and ``r``.
    """
    if product not in PRODUCTS:
        raise ValueError(f"unknown product {product!r}; expected one of {PRODUCTS}")
    p = DriftParams(params.m, params.sigma)
    o = ObsParams(params.kappa, params.mu_eps, params.sigma_eps)
    r = params.r
    if not r > 0:
        raise DomainError("r must be > 0")
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    vals, logws = [], []
    for k in _batches(cfg.n_paths, cfg.batch_size):
        if product.startswith("pwd_acc"):
            if np.any(hist.y <= coco.y_c):
                raise DomainError("a past report is at or below y_c")
            zn, un, logw = _report_posterior(hist, p, o, cfg, rng, k)
            cash = _accounting_cashflows(zn, un, t, coco, hist, r, p, o, dt, product == "pwd_acc_mda", rng)
        else:
            if product == "pwd_reg_mda" and firm.z_cc is None:
                raise DomainError("MDA product needs z_cc")
            z, times = _prior_history(rng, hist, t, p, k)
            logw = _filter_weights(z, times, hist, firm.z_c, p, o)
            x = np.where(np.isfinite(logw), z[:, -1], firm.z_c + 1.0)
            cash = _regulatory_cashflows(x, product, t, firm, coco, r, p, cfg, rng)
        vals.append(cash)
        logws.append(logw)
    mu, se, ess = _weighted(np.concatenate(vals), np.concatenate(logws), cfg.min_ess)
    return OracleEstimate(mu, se, ess, cfg.n_paths)


def simulate_straight_debt(t, firm, hist: AccountingHistory, params, cfg: SimConfig, z_cond=None) -> OracleEstimate:
    """Perpetual straight debt by path simulation to default, truncated where discounting drops below eps."""
    p = DriftParams(params.m, params.sigma)
    o = ObsParams(params.kappa, params.mu_eps, params.sigma_eps)
    r = params.r
    z_cond = firm.z_c if z_cond is None else z_cond
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    times = _perpetual_grid(max(cfg.grid_step, 0.01), r, cfg.horizon_truncation_eps)
    vals, logws = [], []
    for k in _batches(cfg.n_paths, cfg.batch_size):
        z, ht = _prior_history(rng, hist, t, p, k)
        logw = _filter_weights(z, ht, hist, z_cond, p, o)
        x = np.where(np.isfinite(logw), z[:, -1], z_cond + 1.0)
        path = _paths(rng, x, times, p.m, p.sigma, k)
        surv = _survival_curve(path, times, firm.z_b, p.sigma)
        coupons = firm.c1 * firm.p1 * _discounted_integral(surv, times, r)
        recovery = firm.alpha * np.exp(firm.z_b) * _discounted_hit(surv, times, r)
        vals.append(coupons + recovery)
        logws.append(logw)
    mu, se, ess = _weighted(np.concatenate(vals), np.concatenate(logws), cfg.min_ess)
    return OracleEstimate(mu, se, ess, cfg.n_paths)


def simulate_survival(i, hist: AccountingHistory, y_c, params, cfg: SimConfig, dt=0.25) -> OracleEstimate:
    """P(next ``i`` reports all above ``y_c``) by forward simulation from weighted prior draws."""
    p = DriftParams(params.m, params.sigma)
    o = ObsParams(params.kappa, params.mu_eps, params.sigma_eps)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    vals, logws = [], []
    for k in _batches(cfg.n_paths, cfg.batch_size):
        z, u, logw = _report_posterior(hist, p, o, cfg, rng, k)
        ok = np.ones(k, dtype=bool)
        for _ in range(i):
            z = z + p.m * dt + p.sigma * np.sqrt(dt) * rng.standard_normal(k)
            u = o.kappa * u + o.mu_eps + o.sigma_eps * rng.standard_normal(k)
            ok &= z + u > y_c
        vals.append(ok.astype(float))
        logws.append(logw)
    mu, se, ess = _weighted(np.concatenate(vals), np.concatenate(logws), cfg.min_ess)
    return OracleEstimate(mu, se, ess, cfg.n_paths)


# --- rectangle probabilities ------------------------------------------------


def mc_rectangle(proj, lower, n_draws=1_000_000, seed=0) -> OracleEstimate:
    """Plain Monte Carlo of P(xi > lower) for xi ~ N(proj.mean, proj.cov)."""
    mean = np.asarray(proj.mean, dtype=float)
    lower = np.asarray(lower, dtype=float)
    if np.all(np.isneginf(lower)):
        return OracleEstimate(1.0, 0.0, n_paths=n_draws)
    chol = np.linalg.cholesky(np.asarray(proj.cov, dtype=float))
    rng = np.random.Generator(np.random.PCG64(seed))
    hits = 0
    for k in _batches(n_draws, 200_000):
        xi = mean + rng.standard_normal((k, mean.size)) @ chol.T
        hits += int(np.count_nonzero(np.all(xi > lower, axis=1)))
    q = hits / n_draws
    return OracleEstimate(q, float(np.sqrt(q * (1 - q) / n_draws)), n_paths=n_draws)


def sim_report_moments(i, z_n, y_n, dt, p: DriftParams, o: ObsParams, n_draws=1_000_000, seed=0):
    """Sample mean and covariance of the next ``i`` reports with their standard errors."""
    rng = np.random.Generator(np.random.PCG64(seed))
    z = np.full(n_draws, float(z_n))
    u = np.full(n_draws, float(y_n - z_n))
    ys = np.empty((n_draws, i))
    for j in range(i):
        z = z + p.m * dt + p.sigma * np.sqrt(dt) * rng.standard_normal(n_draws)
        u = o.kappa * u + o.mu_eps + o.sigma_eps * rng.standard_normal(n_draws)
        ys[:, j] = z + u
    mean = ys.mean(axis=0)
    c = ys - mean
    cov = c.T @ c / (n_draws - 1)
    prods = c[:, :, None] * c[:, None, :]
    cov_se = prods.std(axis=0) / np.sqrt(n_draws)
    return mean, ys.std(axis=0) / np.sqrt(n_draws), cov, cov_se
