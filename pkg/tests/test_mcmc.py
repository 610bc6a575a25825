import math

import numpy as np
import pytest
from scipy import integrate

from cocoprice import closed_form as cf
from cocoprice.accounting import AccountingHistory, ObsParams
from cocoprice.closed_form import DomainError, DriftParams
from cocoprice.mcmc import (
    ChainConfig,
    ChainInitError,
    estimate_E_f,
    estimate_survival_functionals,
    rw_metropolis,
    sample_alg1,
    sample_alg2,
    sample_alg3,
)
from cocoprice.oracle import SimConfig, simulate_survival
from cocoprice.pricing import ModelParams, pwd_payoff, CoCoSpec

P = DriftParams(0.01, 0.1)
O = ObsParams(0.5, 0.0, 0.1)
Z_C = math.log(80)
HIST = AccountingHistory.from_levels((0.25, 0.5), (100, 100), 100)
CFG = ChainConfig(burn_in=3_000, samples=40_000, seed=7)


def std_normal(x):
    return -0.5 * np.sum(x * x, axis=-1)


class TestSampler:
    def test_standard_normal_moments(self):
        res = rw_metropolis(std_normal, [0.0], ChainConfig(burn_in=2_000, samples=160_000, seed=3, proposal_scale=1.0))
        x = res.samples[:, 0]
        n_eff = res.effective_sample_size[0]
        assert abs(x.mean()) < 4 / math.sqrt(n_eff)
        assert x.var() == pytest.approx(1.0, abs=4 * math.sqrt(2 / n_eff))
        assert 0.15 <= res.acceptance_rate <= 0.45

    def test_truncated_support_respected(self):
        def half_normal(x):
            return np.where(x[:, 0] > 0, -0.5 * x[:, 0] ** 2, -np.inf)

        res = rw_metropolis(half_normal, [0.5], ChainConfig(burn_in=1_000, samples=50_000, seed=1, proposal_scale=1.0))
        assert np.all(res.samples > 0)
        assert res.samples.mean() == pytest.approx(math.sqrt(2 / math.pi), abs=0.03)

    def test_zero_step_proposals_always_accepted(self):
        res = rw_metropolis(std_normal, [0.2], ChainConfig(burn_in=0, samples=1_000, seed=1, proposal_scale=1e-300))
        assert res.acceptance_rate == 1.0

    def test_bad_start_rejected(self):
        with pytest.raises(ChainInitError):
            rw_metropolis(lambda x: np.full(len(x), -np.inf), [0.0], CFG)

    def test_determinism(self):
        a = sample_alg1(0.5, HIST, Z_C, P, O, CFG)
        b = sample_alg1(0.5, HIST, Z_C, P, O, CFG)
        assert np.array_equal(a.chains, b.chains)
        assert a.acceptance_rate == b.acceptance_rate
        c = sample_alg1(0.5, HIST, Z_C, P, O, CFG.with_seed(8))
        assert not np.array_equal(a.chains, c.chains)

    def test_config_validation(self):
        for bad in (dict(burn_in=-1), dict(samples=0), dict(target_acceptance=1.0), dict(n_chains=0),
                    dict(seed=-1)):
            with pytest.raises(ValueError):
                ChainConfig(**bad)


class TestAlgorithms:
    def test_alg1_support_and_acceptance(self):
        res = sample_alg1(0.75, HIST, Z_C, P, O, CFG)
        assert res.dim == 3
        assert np.all(res.samples > Z_C)
        assert 0.15 <= res.acceptance_rate <= 0.45
        assert res.seed_used == CFG.seed

    def test_alg2_support(self):
        res = sample_alg2(0.5, 5.5, HIST, Z_C, P, O, CFG)
        assert res.dim == 3
        assert np.all(res.samples > Z_C)

    def test_alg3_unconstrained(self):
        res = sample_alg3(HIST, P, O, CFG)
        assert res.dim == 2
        assert 0.15 <= res.acceptance_rate <= 0.45

    def test_unit_integrand_is_exactly_one(self):
        est = estimate_E_f(lambda x: np.ones_like(x), 0.5, HIST, Z_C, P, O, CFG)
        assert est.value == 1.0
        assert est.stderr == 0.0

    def test_pooled_chains_match_single_chain(self):
        h = lambda x: x
        pooled = estimate_E_f(h, 0.5, HIST, Z_C, P, O, ChainConfig(burn_in=3_000, samples=24_000, seed=21))
        single = estimate_E_f(h, 0.5, HIST, Z_C, P, O,
                              ChainConfig(burn_in=1_000, samples=24_000, seed=22, n_chains=1))
        assert abs(pooled.value - single.value) <= 3 * math.hypot(pooled.stderr, single.stderr)

    def test_precise_reports_match_quadrature(self):
        # With nearly exact reports the filtered law is the killed density from the last report.
        o = ObsParams(0.5, 0.0, 1e-6)
        hist = AccountingHistory.from_levels((0.25,), (97,), 100)
        t, coco = 0.75, CoCoSpec(5, 0.07, 5.25)
        h = lambda x: pwd_payoff(x, coco.maturity - t, Z_C, coco, 0.03, P)
        est = estimate_E_f(h, t, hist, Z_C, P, o, CFG)
        y = hist.y[0]
        hi = y + 12 * P.sigma * math.sqrt(t - 0.25)
        ref, _ = integrate.quad(lambda x: h(x) * cf.pre_report_density(t - 0.25, x, y, Z_C, P), Z_C, hi,
                                epsabs=1e-12, limit=200)
        assert abs(est.value - ref) <= 3 * est.stderr + 1e-6

    def test_valuation_before_report_rejected(self):
        with pytest.raises(DomainError):
            sample_alg1(0.3, HIST, Z_C, P, O, CFG)


class TestSurvivalFunctionals:
    def test_no_trigger_means_certain_survival(self):
        est = estimate_survival_functionals(4, lambda i: [-np.inf] * i, HIST, P, O, CFG)
        np.testing.assert_array_equal(est.values, 1.0)

    def test_nested_events_monotone(self):
        est = estimate_survival_functionals(8, lambda i: [math.log(92)] * i, HIST, P, O, CFG)
        for i in range(7):
            assert est.values[i + 1] <= est.values[i] + 2 * (est.stderrs[i] + est.stderrs[i + 1])

    def test_one_step_matches_forward_simulation(self):
        y_c = math.log(92)
        est = estimate_survival_functionals(1, lambda i: [y_c] * i, HIST, P, O, CFG)
        params = ModelParams(0.01, 0.1, 0.5, 0.0, 0.1, 0.03)
        ora = simulate_survival(1, HIST, y_c, params, SimConfig(n_paths=400_000, seed=5))
        assert abs(est.values[0] - ora.value) <= 3 * math.hypot(est.stderrs[0], ora.stderr)

    def test_rejects_zero_horizon(self):
        with pytest.raises(DomainError):
            estimate_survival_functionals(0, lambda i: [], HIST, P, O, CFG)
