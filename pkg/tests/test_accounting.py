import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate
from scipy.stats import norm

from cocoprice.accounting import (
    AccountingHistory,
    ObsParams,
    log_b_n,
    log_posterior_plain,
    log_target_alg1,
    log_target_alg2,
)
from cocoprice.closed_form import DomainError, DriftParams

P = DriftParams(0.01, 0.1)
O = ObsParams(0.5, 0.0, 0.1)
Z_C = math.log(80)
HIST = AccountingHistory.from_levels((0.25, 0.5), (100, 100), 100)
ONE = AccountingHistory.from_levels((0.25,), (98,), 100)


def _manual_b_n(path, hist, z_c, p, o):
    """Recompute the report-path density from scalar Gaussian pdfs."""
    total, zprev, uprev, tprev = 0.0, hist.z0, None, 0.0
    for zi, yi, ti in zip(path, hist.y, hist.t):
        dt = ti - tprev
        total += norm.logpdf(zi, zprev + p.m * dt, p.sigma * math.sqrt(dt))
        mean = o.mu_eps if uprev is None else o.kappa * uprev + o.mu_eps
        total += norm.logpdf(yi - zi, mean, o.sigma_eps)
        total += math.log1p(-math.exp(-2 * (zprev - z_c) * (zi - z_c) / (p.sigma**2 * dt)))
        zprev, uprev, tprev = zi, yi - zi, ti
    return total


class TestHistory:
    def test_levels_become_logs(self):
        h = AccountingHistory.from_levels((0.25, 0.5), (100, 90), 100)
        assert h.n == 2
        np.testing.assert_allclose(h.y, np.log([100, 90]))
        assert h.z0 == pytest.approx(math.log(100))
        assert h.last_time == 0.5

    def test_truncated(self):
        assert HIST.truncated(1).n == 1
        assert HIST.truncated(0).last_time == 0.0

    @pytest.mark.parametrize("times,reports", [((0.5, 0.25), (1, 1)), ((0.0,), (1,)), ((0.25,), (1, 2))])
    def test_rejects_bad_times(self, times, reports):
        with pytest.raises(DomainError):
            AccountingHistory(times, reports)

    def test_obs_params_validation(self):
        with pytest.raises(DomainError):
            ObsParams(0.5, 0.0, 0.0)
        with pytest.raises(DomainError):
            ObsParams(float("nan"), 0.0, 0.1)


class TestDensities:
    @pytest.mark.parametrize("path", [(4.6, 4.62), (4.5, 4.4), (4.7, 4.55)])
    def test_b_n_matches_primitive_recomputation(self, path):
        assert log_b_n(np.array(path), HIST, Z_C, P, O) == pytest.approx(_manual_b_n(path, HIST, Z_C, P, O),
                                                                         abs=1e-12)

    def test_b_n_off_support(self):
        assert log_b_n(np.array([4.6, Z_C - 0.01]), HIST, Z_C, P, O) == -np.inf

    def test_kappa_zero_gives_independent_noise(self):
        o = ObsParams(0.0, 0.0, 0.1)
        path = np.array([4.58, 4.63])
        manual = _manual_b_n(tuple(path), HIST, Z_C, P, o)
        assert log_b_n(path, HIST, Z_C, P, o) == pytest.approx(manual, abs=1e-12)

    def test_far_barrier_removes_conditioning(self):
        path = np.array([4.58, 4.63])
        assert log_b_n(path, HIST, -50.0, P, O) == pytest.approx(log_posterior_plain(path, HIST, P, O), abs=1e-12)

    def test_batch_evaluation(self):
        paths = np.array([[4.58, 4.63], [4.6, 4.5], [4.7, 4.66]])
        batch = log_b_n(paths, HIST, Z_C, P, O)
        single = [log_b_n(row, HIST, Z_C, P, O) for row in paths]
        np.testing.assert_allclose(batch, single, rtol=0, atol=0)

    def test_alg1_extension_integrates_to_b_n(self):
        t = 0.75
        z1 = 4.55
        f = lambda x: math.exp(log_target_alg1(np.array([z1, x]), t, ONE, Z_C, P, O))
        mass, _ = integrate.quad(f, Z_C, Z_C + 3.0, epsabs=1e-14, epsrel=1e-11, limit=200)
        assert mass == pytest.approx(math.exp(log_b_n(np.array([z1]), ONE, Z_C, P, O)), rel=1e-8)

    def test_alg2_extension_integrates_to_alg1(self):
        t, T = 0.25, 2.0
        z1 = 4.55
        f = lambda zT: math.exp(log_target_alg2(np.array([z1, zT]), t, T, ONE, Z_C, P, O))
        mass, _ = integrate.quad(f, Z_C, Z_C + 4.0, epsabs=1e-14, epsrel=1e-11, limit=200)
        assert mass == pytest.approx(math.exp(log_target_alg1(np.array([z1]), t, ONE, Z_C, P, O)), rel=1e-8)

    def test_valuation_before_last_report_rejected(self):
        with pytest.raises(DomainError):
            log_target_alg1(np.array([4.6, 4.6, 4.6]), 0.3, HIST, Z_C, P, O)


@given(z1=st.floats(4.3, 4.9), z2=st.floats(4.3, 4.9))
def test_barrier_conditioning_only_lowers_density(z1, z2):
    path = np.array([z1, z2])
    assert log_b_n(path, HIST, Z_C, P, O) <= log_posterior_plain(path, HIST, P, O) + 1e-12
