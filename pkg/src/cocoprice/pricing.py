"""CoCo prices under a regulatory or an accounting trigger.

Regulatory-trigger prices are expectations of closed-form payoffs ``h(x)``
against the filtered density of the latent log-asset at the valuation time,
estimated on a Metropolis sample. Accounting-trigger prices combine
probabilities that the next ``i`` reports stay above a trigger level.

All barriers are log levels. Prices are in the currency of the principals.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import closed_form as cf
from .accounting import AccountingHistory, ObsParams
from .closed_form import DomainError, DriftParams
from .estimates import PriceEstimate, batch_means_stderr, derive_seed
from .mcmc import (
    ChainConfig,
    ChainResult,
    _chain_meta,
    estimate_survival_functionals,
    sample_alg1,
    sample_alg2,
    sample_alg3,
)

DEFAULT_REPORT_STEP = 0.25
_GL_NODES = 64
_BRIDGE_NODES = 160


@dataclass(frozen=True)
class ModelParams:
    """Asset dynamics, reporting noise and the riskless rate."""

    m: float
    sigma: float
    kappa: float
    mu_eps: float
    sigma_eps: float
    r: float

    def __post_init__(self):
        DriftParams(self.m, self.sigma)
        ObsParams(self.kappa, self.mu_eps, self.sigma_eps)
        if not np.isfinite(self.r):
            raise DomainError("r must be finite")

    @property
    def drift(self) -> DriftParams:
        return DriftParams(self.m, self.sigma)

    @property
    def obs(self) -> ObsParams:
        return ObsParams(self.kappa, self.mu_eps, self.sigma_eps)


@dataclass(frozen=True)
class FirmSpec:
    """Balance sheet outside the CoCo. Barriers are log asset levels."""

    v0: float
    p1: float
    c1: float
    alpha: float
    z_b: float
    z_c: float
    z_cc: float | None = None

    def __post_init__(self):
        if not self.v0 > 0:
            raise DomainError("v0 must be > 0")
        if self.p1 < 0 or self.c1 < 0:
            raise DomainError("p1 and c1 must be >= 0")
        if not 0 < self.alpha < 1:
            raise DomainError("alpha must lie in (0, 1)")
        if not self.z_b < self.z_c:
            raise DomainError(f"z_b ({self.z_b}) must be below z_c ({self.z_c})")
        if self.z_cc is not None and not self.z_cc > self.z_c:
            raise DomainError(f"z_cc ({self.z_cc}) must be above z_c ({self.z_c})")

    @classmethod
    def from_levels(cls, v0, p1, c1, alpha, v_b, v_c, v_cc=None):
        return cls(v0, p1, c1, alpha, float(np.log(v_b)), float(np.log(v_c)),
                   None if v_cc is None else float(np.log(v_cc)))


@dataclass(frozen=True)
class CoCoSpec:
    """Contract terms. ``maturity`` is the calendar time T; ``y_c``/``y_cc`` are log report levels."""

    p2: float
    c2: float
    maturity: float
    recovery: float = 0.0
    delta: float = 0.0
    trigger_kind: str = "regulatory"
    y_c: float | None = None
    y_cc: float | None = None
    mda_enabled: bool = False

    def __post_init__(self):
        if self.p2 < 0 or self.c2 < 0:
            raise DomainError("p2 and c2 must be >= 0")
        if not 0 <= self.recovery < 1:
            raise DomainError("recovery must lie in [0, 1)")
        if not (self.delta >= 0):
            raise DomainError("delta must be >= 0 (use math.inf for full dilution)")
        if self.trigger_kind not in ("regulatory", "accounting"):
            raise DomainError("trigger_kind must be 'regulatory' or 'accounting'")
        if self.trigger_kind == "accounting" and self.y_c is None:
            raise DomainError("an accounting trigger needs y_c")
        if self.y_c is not None and self.y_cc is not None and not self.y_cc >= self.y_c:
            raise DomainError(f"y_cc ({self.y_cc}) must not be below y_c ({self.y_c})")

    @property
    def rho(self) -> float:
        """Share of post-conversion equity held by CoCo investors."""
        if np.isinf(self.delta):
            return 1.0
        dp = self.delta * self.p2
        return dp / (dp + 1.0)

    @classmethod
    def delta_for_rho(cls, rho, p2) -> float:
        if not 0 <= rho <= 1:
            raise DomainError("rho must lie in [0, 1]")
        return float("inf") if rho == 1 else rho / ((1.0 - rho) * p2)


# --- payoff functions of the latent log-asset -------------------------------


def _check_rate(r):
    if not r > 0:
        raise DomainError(f"the pricing formulas need r > 0, got {r}")


def _survive(tau, d, p):
    """1 - pi(tau, d) with tau = 0 giving 1."""
    if tau <= 0:
        return np.ones_like(np.asarray(d, dtype=float))
    return np.exp(cf._log_survive(tau, d, p.m, p.sigma))


def hit_transform(x, barrier, tau, r, p):
    """I(x): minus the expected discount factor at a hit of ``barrier`` before ``tau``."""
    return cf._hit_transform(np.asarray(x, dtype=float) - barrier, np.asarray(tau, float), r, p)


def survival_annuity(x, barrier, tau, r, p):
    """I~(x): discounted time spent above ``barrier`` before ``tau``."""
    return cf._survival_annuity(np.asarray(x, dtype=float) - barrier, np.asarray(tau, float), r, p)


def perpetual_hit(x, z_b, r, p):
    """J_b(x)."""
    return -np.exp(-(p.m + cf._beta(r, p)) * (np.asarray(x, dtype=float) - z_b) / p.sigma**2)


def perpetual_annuity(x, z_b, r, p):
    """J~_b(x) = (1 + J_b(x)) / r."""
    return (1.0 + perpetual_hit(x, z_b, r, p)) / r


def pwd_legs(x, tau, z_c, coco: CoCoSpec, r, p):
    """Principal, coupon and write-down recovery legs of a regulatory PWD CoCo."""
    P = coco.p2
    return {
        "principal": P * np.exp(-r * tau) * _survive(tau, x - z_c, p),
        "coupon": coco.c2 * P * survival_annuity(x, z_c, tau, r, p),
        "recovery": -coco.recovery * P * hit_transform(x, z_c, tau, r, p),
    }


def pwd_payoff(x, tau, z_c, coco: CoCoSpec, r, p):
    """h(x) of the regulatory PWD price in its closed form."""
    P, c = coco.p2, coco.c2
    surv = _survive(tau, x - z_c, p)
    return ((r - c) / r) * P * np.exp(-r * tau) * surv + c * P / r + (c * P / r - coco.recovery * P) * hit_transform(
        x, z_c, tau, r, p
    )


def mda_coupon_leg(x, tau, z_c, z_cc, c2, p2, r, p, nodes=_GL_NODES):
    """Coupons paid only while the asset stays above ``z_cc`` and conversion has not happened.

    Time integral over ``[0, tau]`` by Gauss-Legendre; ``x`` may be an array.
    """
    x = np.asarray(x, dtype=float)
    if tau <= 0:
        return np.zeros_like(x)
    if not z_cc > z_c:
        raise DomainError("need z_cc > z_c")
    u, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * tau * (u + 1.0)
    w = 0.5 * tau * w
    total = np.zeros_like(x)
    for uk, wk in zip(u, w):
        total += wk * np.exp(-r * uk) * cf.min_tail_joint(uk, x - z_c, z_cc - z_c, p)
    return c2 * p2 * total


def converter_legs(x, tau, firm: FirmSpec, coco: CoCoSpec, r, p):
    """Legs integrated against f for the share-converting CoCo (bridge part excluded)."""
    P, c = coco.p2, coco.c2
    legs = {
        "principal": P * np.exp(-r * tau) * _survive(tau, x - firm.z_c, p),
        "coupon": c * P * survival_annuity(x, firm.z_c, tau, r, p),
    }
    rho = coco.rho
    if rho > 0:
        legs["conversion"] = rho * (
            np.exp(firm.z_b) * perpetual_hit(x, firm.z_b, r, p)
            + firm.c1 * firm.p1 * survival_annuity(x, firm.z_c, tau, r, p)
            - firm.c1 * firm.p1 * perpetual_annuity(x, firm.z_b, r, p)
            - np.exp(firm.z_c) * hit_transform(x, firm.z_c, tau, r, p)
        )
    else:
        legs["conversion"] = np.zeros_like(np.asarray(x, dtype=float))
    return legs


def converter_terminal(z_end, tau, firm: FirmSpec, coco: CoCoSpec, r, p):
    """h2 at the maturity level ``z_end``."""
    return coco.rho * np.exp(-r * tau) * (
        firm.c1 * firm.p1 * perpetual_annuity(z_end, firm.z_b, r, p)
        - np.exp(firm.z_b) * perpetual_hit(z_end, firm.z_b, r, p)
    )


def bridge_integral(x, tau, firm: FirmSpec, coco: CoCoSpec, r, p, nodes=_BRIDGE_NODES):
    """Integral of the killed density from ``x`` over ``tau`` against h2, per ``x``.

    Gauss-Legendre on ``[z_c, x + m tau + 10 sigma sqrt(tau)]``; the killed
    density vanishes at the barrier so no endpoint singularity arises.
    """
    x = np.asarray(x, dtype=float)
    if tau <= 0 or coco.rho == 0:
        return np.zeros_like(x)
    s = p.sigma * np.sqrt(tau)
    lo = firm.z_c
    hi = np.maximum(x + p.m * tau + 10.0 * s, lo + 20.0 * s)
    g, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * (hi - lo)
    z = lo + half[..., None] * (g + 1.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        dens = np.exp(cf._log_killed(x[..., None], firm.z_c, z, tau, p.m, p.sigma))
    dens = np.where(z > firm.z_c, dens, 0.0)
    vals = converter_terminal(z, tau, firm, coco, r, p)
    return half * np.sum(w * dens * vals, axis=-1)


# --- helpers ----------------------------------------------------------------


def _horizon(t, coco, hist):
    if t < hist.last_time:
        raise DomainError("valuation time precedes the last report")
    tau = coco.maturity - t
    if tau < 0:
        raise DomainError("valuation time is after maturity")
    return tau


def _summarize(series: dict, res: ChainResult | None, cfg: ChainConfig, extra_var=0.0, **meta):
    shape = res.chains.shape[:2]
    comps = {k: float(np.mean(v)) for k, v in series.items()}
    total = sum(np.reshape(v, shape) for v in series.values())
    se = np.sqrt(batch_means_stderr(total, cfg.n_batches) ** 2 + extra_var)
    info = _chain_meta(res, cfg)
    info.update(meta)
    return PriceEstimate.from_components(comps, se, **info)


def _alg1(t, hist, z_c, params, cfg, chain):
    if chain is not None:
        return chain
    return sample_alg1(t, hist, z_c, params.drift, params.obs, cfg)


def _state(res: ChainResult):
    return res.samples[:, -1]


def _exact(value, **meta):
    return PriceEstimate.from_components({"principal": value, "coupon": 0.0}, 0.0, **meta)


# --- regulatory trigger -----------------------------------------------------


def price_pwd_regulatory(t, firm: FirmSpec, coco: CoCoSpec, hist: AccountingHistory, params: ModelParams,
                         cfg: ChainConfig = ChainConfig(), chain: ChainResult | None = None) -> PriceEstimate:
    """Principal write-down CoCo, conversion when the latent asset hits ``z_c``."""
    _check_rate(params.r)
    tau = _horizon(t, coco, hist)
    if tau == 0:
        return _exact(coco.p2)
    res = _alg1(t, hist, firm.z_c, params, cfg, chain)
    x = _state(res)
    return _summarize(pwd_legs(x, tau, firm.z_c, coco, params.r, params.drift), res, cfg)


def price_pwd_regulatory_mda(t, firm: FirmSpec, coco: CoCoSpec, hist: AccountingHistory, params: ModelParams,
                             cfg: ChainConfig = ChainConfig(), chain: ChainResult | None = None) -> PriceEstimate:
    """As ``price_pwd_regulatory`` with coupons suspended while the asset is below ``z_cc``."""
    _check_rate(params.r)
    if firm.z_cc is None or not firm.z_cc > firm.z_c:
        raise DomainError("MDA pricing needs z_cc > z_c")
    tau = _horizon(t, coco, hist)
    if tau == 0:
        return _exact(coco.p2)
    res = _alg1(t, hist, firm.z_c, params, cfg, chain)
    x = _state(res)
    legs = pwd_legs(x, tau, firm.z_c, coco, params.r, params.drift)
    legs["coupon"] = mda_coupon_leg(x, tau, firm.z_c, firm.z_cc, coco.c2, coco.p2, params.r, params.drift)
    return _summarize(legs, res, cfg)


def price_converter_regulatory(t, firm: FirmSpec, coco: CoCoSpec, hist: AccountingHistory, params: ModelParams,
                               cfg: ChainConfig = ChainConfig(), chain: ChainResult | None = None,
                               bridge: str = "chain") -> PriceEstimate:
    """CoCo converting into a fraction ``rho`` of the equity when the latent asset hits ``z_c``.

    The term running from a surviving ``Z_T`` is estimated on its own
    Metropolis chain (``bridge="chain"``) or by quadrature of the killed
    density on the shared sample (``bridge="quadrature"``).
    """
    _check_rate(params.r)
    tau = _horizon(t, coco, hist)
    if tau == 0:
        return _exact(coco.p2)
    r, p = params.r, params.drift
    res = _alg1(t, hist, firm.z_c, params, cfg, chain)
    x = _state(res)
    legs = converter_legs(x, tau, firm, coco, r, p)
    if coco.mda_enabled:
        if firm.z_cc is None:
            raise DomainError("MDA pricing needs z_cc")
        legs["coupon"] = mda_coupon_leg(x, tau, firm.z_c, firm.z_cc, coco.c2, coco.p2, r, p)
    if coco.rho == 0:
        return _summarize(legs, res, cfg)
    if bridge == "quadrature":
        legs["conversion"] = legs["conversion"] + bridge_integral(x, tau, firm, coco, r, p)
        return _summarize(legs, res, cfg)
    if bridge != "chain":
        raise ValueError("bridge must be 'chain' or 'quadrature'")
    cfg2 = cfg.with_seed(derive_seed(cfg.seed, 2))
    res2 = sample_alg2(t, coco.maturity, hist, firm.z_c, p, params.obs, cfg2)
    s = res2.samples
    xb = s[:, -2] if s.shape[1] > 1 else np.full(len(s), hist.z0)
    bterm = converter_terminal(s[:, -1], tau, firm, coco, r, p) * _survive(tau, xb - firm.z_c, p)
    bterm = bterm.reshape(res2.chains.shape[:2])
    se2 = batch_means_stderr(bterm, cfg.n_batches)
    out = _summarize(legs, res, cfg, extra_var=se2**2, bridge_acceptance_rate=res2.acceptance_rate)
    comps = dict(out.components)
    comps["conversion"] += float(bterm.mean())
    return PriceEstimate.from_components(comps, out.stderr, **out.meta)


# --- accounting trigger -----------------------------------------------------


def _report_steps(t, coco, hist, dt):
    if hist.n == 0:
        raise DomainError("an accounting trigger needs at least one report")
    tn = hist.last_time
    if not tn <= t < tn + dt:
        raise DomainError("valuation time must lie in [t_n, t_n + dt)")
    m_real = (coco.maturity - tn) / dt
    m = int(round(m_real))
    if m < 1 or abs(m_real - m) > 1e-9:
        raise DomainError(
            f"maturity {coco.maturity} is not on the report grid t_n + k*{dt} (k >= 1); got k = {m_real:.6g}"
        )
    return m


def _accounting_setup(t, coco, hist, params, dt):
    _check_rate(params.r)
    if coco.y_c is None:
        raise DomainError("accounting pricing needs y_c")
    if np.any(hist.y <= coco.y_c):
        raise DomainError("a past report is at or below y_c: the CoCo has already converted")
    m = _report_steps(t, coco, hist, dt)
    times = hist.last_time + dt * np.arange(1, m + 1)
    disc = np.exp(-params.r * (times - t))
    return m, disc


def i_step_survival(i, hist: AccountingHistory, y_c, y_cc_opt, params: ModelParams,
                    cfg: ChainConfig = ChainConfig(), dt=DEFAULT_REPORT_STEP,
                    chain: ChainResult | None = None) -> PriceEstimate:
    """Probability that the next ``i`` reports stay above ``y_c`` (the last above ``y_cc_opt`` if given)."""
    if int(i) != i or i < 1:
        raise DomainError("i must be an integer >= 1")
    i = int(i)
    if np.any(hist.y <= y_c):
        raise DomainError("a past report is at or below y_c")
    last = y_c if y_cc_opt is None else y_cc_opt

    def bounds(k):
        return [y_c] * (k - 1) + [last]

    res = _accounting_chain(hist, params, cfg, chain)
    est = estimate_survival_functionals(i, bounds, hist, params.drift, params.obs, cfg, dt, res)
    return PriceEstimate(float(est.values[-1]), float(est.stderrs[-1]),
                         {"survival": float(est.values[-1])}, est.meta)


def _accounting_chain(hist, params, cfg, chain):
    return chain if chain is not None else sample_alg3(hist, params.drift, params.obs, cfg)


def _survival_table(m, y_last, hist, params, cfg, dt, res, y_c):
    """Per-draw P(reports 1..i above y_c, report i above y_last) for i = 1..m."""
    def bounds(i):
        return [y_c] * (i - 1) + [y_last]

    return estimate_survival_functionals(m, bounds, hist, params.drift, params.obs, cfg, dt, res)


def _accounting_estimate(series, res, cfg, m, **meta):
    comps = {k: float(v.mean()) for k, v in series.items()}
    total = sum(series.values())
    se = batch_means_stderr(total, cfg.n_batches)
    info = _chain_meta(res, cfg)
    info.update(meta, report_steps=m)
    return PriceEstimate.from_components(comps, se, **info)


def price_pwd_accounting(t, coco: CoCoSpec, hist: AccountingHistory, params: ModelParams,
                         cfg: ChainConfig = ChainConfig(), dt=DEFAULT_REPORT_STEP,
                         chain: ChainResult | None = None) -> PriceEstimate:
    """PWD CoCo converting at the first report at or below ``y_c``.

    Coupons accrue continuously until the report date that breaches the
    trigger; ``recovery * P`` is paid on that date.
    """
    m, e = _accounting_setup(t, coco, hist, params, dt)
    res = _accounting_chain(hist, params, cfg, chain)
    surv = _survival_table(m, coco.y_c, hist, params, cfg, dt, res, coco.y_c).per_draw
    return _accounting_estimate(_accounting_series(surv, surv, e, t, hist, coco, params, gate=1.0), res, cfg, m)


def price_pwd_accounting_mda(t, coco: CoCoSpec, hist: AccountingHistory, params: ModelParams,
                             cfg: ChainConfig = ChainConfig(), dt=DEFAULT_REPORT_STEP,
                             chain: ChainResult | None = None) -> PriceEstimate:
    """As ``price_pwd_accounting`` with coupons for a period paid only if its opening report exceeds ``y_cc``."""
    if coco.y_cc is None or coco.y_c is None or not coco.y_cc >= coco.y_c:
        raise DomainError("MDA pricing needs y_cc >= y_c")
    m, e = _accounting_setup(t, coco, hist, params, dt)
    res = _accounting_chain(hist, params, cfg, chain)
    plain = _survival_table(m, coco.y_c, hist, params, cfg, dt, res, coco.y_c).per_draw
    gated = _survival_table(m, coco.y_cc, hist, params, cfg, dt, res, coco.y_c).per_draw
    gate = 1.0 if hist.y[-1] > coco.y_cc else 0.0
    series = _accounting_series(plain, gated, e, t, hist, coco, params, gate)
    return _accounting_estimate(series, res, cfg, m, first_period_gate=gate)


def _accounting_series(plain, gated, e, t, hist, coco, params, gate):
    """Per-draw legs. ``plain[..., i-1]`` and ``gated[..., i-1]`` are i-step survival probabilities."""
    P, c, R, r = coco.p2, coco.c2, coco.recovery, params.r
    m = e.size
    principal = P * e[-1] * plain[..., -1]
    first = gate * c * P / r * (1.0 - e[0])
    coupon = first + c * P / r * np.sum((e[:-1] - e[1:]) * gated[..., : m - 1], axis=-1)
    prev = np.concatenate([np.ones(plain.shape[:-1] + (1,)), plain[..., :-1]], axis=-1)
    recovery = R * P * np.sum(e * (prev - plain), axis=-1)
    return {"principal": principal, "coupon": coupon + np.zeros_like(principal), "recovery": recovery}


# --- capital structure ------------------------------------------------------


def _debt_and_bc(x, firm, r, p):
    jb = perpetual_hit(x, firm.z_b, r, p)
    debt = firm.c1 * firm.p1 * perpetual_annuity(x, firm.z_b, r, p) - firm.alpha * np.exp(firm.z_b) * jb
    bc = -(1.0 - firm.alpha) * np.exp(firm.z_b) * jb
    return debt, bc


def _survival_barrier(firm, coco):
    """Barrier the market conditions on: conversion if a CoCo is outstanding, else default."""
    return firm.z_c if coco is not None and coco.p2 > 0 else firm.z_b


def value_straight_debt(t, firm: FirmSpec, hist: AccountingHistory, params: ModelParams,
                        cfg: ChainConfig = ChainConfig(), chain: ChainResult | None = None,
                        barrier: float | None = None) -> PriceEstimate:
    """Perpetual straight debt: coupons until default plus ``alpha`` times the assets at default.

    The filtered law conditions on survival above ``barrier`` (default ``z_c``:
    no conversion yet).
    """
    _check_rate(params.r)
    res = _alg1(t, hist, firm.z_c if barrier is None else barrier, params, cfg, chain)
    x = _state(res)
    jb = perpetual_hit(x, firm.z_b, params.r, params.drift)
    legs = {
        "coupon": firm.c1 * firm.p1 * perpetual_annuity(x, firm.z_b, params.r, params.drift),
        "recovery": -firm.alpha * np.exp(firm.z_b) * jb,
    }
    return _summarize(legs, res, cfg)


def value_equity_residual(t, firm: FirmSpec, coco: CoCoSpec, hist: AccountingHistory, params: ModelParams,
                          cfg: ChainConfig = ChainConfig(), chain: ChainResult | None = None,
                          asset_bump: float = 0.0) -> PriceEstimate:
    """Equity as assets minus straight debt, CoCo and bankruptcy costs on one shared sample.

    Components: ``assets`` (positive) and ``debt``, ``coco``, ``bankruptcy_cost``
    (entered negatively), so ``value`` is the equity. ``asset_bump`` adds a
    fixed amount to every sampled asset level, for finite differences in V.
    The CoCo is a regulatory-trigger PWD when ``coco.delta == 0`` and a share
    converter otherwise; its maturity-surviving term uses quadrature.
    """
    _check_rate(params.r)
    res = _alg1(t, hist, _survival_barrier(firm, coco), params, cfg, chain)
    series = _equity_series(_state(res), t, firm, coco, hist, params, asset_bump)
    return _summarize(series, res, cfg)


def investment_incentive(t, firm: FirmSpec, coco: CoCoSpec, hist: AccountingHistory, params: ModelParams,
                         cfg: ChainConfig = ChainConfig(), chain: ChainResult | None = None,
                         amount: float = 1.0) -> PriceEstimate:
    """Equity gain from adding ``amount`` to assets, net of its cost: E(V + amount) - E(V) - amount.

    Both equity values are taken on the same posterior draws, so the standard
    error is that of the paired difference.
    """
    _check_rate(params.r)
    res = _alg1(t, hist, _survival_barrier(firm, coco), params, cfg, chain)
    x = _state(res)
    up = _equity_series(x, t, firm, coco, hist, params, amount)
    down = _equity_series(x, t, firm, coco, hist, params, 0.0)
    series = {k: up[k] - down[k] for k in up}
    series["cost"] = np.full_like(x, -amount)
    return _summarize(series, res, cfg)


def _equity_series(x, t, firm, coco, hist, params, asset_bump):
    r, p = params.r, params.drift
    if asset_bump:
        if np.any(np.exp(x) + asset_bump <= 0):
            raise DomainError("asset_bump pushes the asset value below zero")
        x = np.log(np.exp(x) + asset_bump)
    assets = np.exp(x)
    debt, bc = _debt_and_bc(x, firm, r, p)
    cc = np.zeros_like(x)
    if coco is not None and coco.p2 > 0:
        tau = _horizon(t, coco, hist)
        _check_coco_state(x, firm)
        if coco.rho == 0:
            legs = pwd_legs(x, tau, firm.z_c, coco, r, p)
        else:
            legs = converter_legs(x, tau, firm, coco, r, p)
            legs["conversion"] = legs["conversion"] + bridge_integral(x, tau, firm, coco, r, p)
        if coco.mda_enabled and firm.z_cc is not None:
            legs["coupon"] = mda_coupon_leg(x, tau, firm.z_c, firm.z_cc, coco.c2, coco.p2, r, p)
        cc = sum(legs.values())
    return {"assets": assets, "debt": -debt, "coco": -cc, "bankruptcy_cost": -bc}


def _check_coco_state(x, firm):
    if np.any(x <= firm.z_c):
        raise DomainError("sampled asset level at or below the conversion barrier")


def with_coco(coco: CoCoSpec, **changes) -> CoCoSpec:
    return replace(coco, **changes)
