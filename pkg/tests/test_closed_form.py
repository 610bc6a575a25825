import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from cocoprice import closed_form as cf
from cocoprice.closed_form import DomainError, DriftParams

P = DriftParams(0.01, 0.1)
R = 0.03

# Frozen references computed once at 30 digits with mpmath from the
# first-passage density (an independent route from the closed forms).
REF_HIT_1_02 = 0.037113706260664072606
REF_HIT_5_LOG125 = 0.25133876414657866052
REF_TAIL_1_02_01 = 0.86308324699620998841
REF_I_LOG125_5 = -0.23252422068732649718
REF_ITILDE_LOG125_5 = 4.1032360657797428591
REF_J_LOG100_65 = -0.20793549218081997272
REF_JTILDE_LOG100_65 = 26.402150260639334243
REF_GAMMA = 0.09559629248912556359

distances = st.floats(0.005, 1.5)
times = st.floats(0.01, 20.0)
drifts = st.floats(-0.1, 0.1)
vols = st.floats(0.03, 0.5)
rates = st.floats(0.001, 0.15)


class TestFrozenReferences:
    def test_hit_prob(self):
        assert cf.hit_prob(1.0, 0.2, P) == pytest.approx(REF_HIT_1_02, rel=1e-12)
        assert cf.hit_prob(5.0, math.log(1.25), P) == pytest.approx(REF_HIT_5_LOG125, rel=1e-12)

    def test_min_tail_joint(self):
        assert cf.min_tail_joint(1.0, 0.2, 0.1, P) == pytest.approx(REF_TAIL_1_02_01, rel=1e-12)

    def test_finite_horizon_transforms(self):
        d = math.log(1.25)
        assert cf.discounted_hitting_transform(d, 0.0, 5.0, R, P) == pytest.approx(REF_I_LOG125_5, rel=1e-11)
        assert cf.discounted_survival_annuity(d, 0.0, 5.0, R, P) == pytest.approx(REF_ITILDE_LOG125_5, rel=1e-11)

    def test_perpetual_transforms(self):
        d = math.log(100 / 65)
        assert cf.perpetual_hit_transform(d, 0.0, R, P) == pytest.approx(REF_J_LOG100_65, rel=1e-12)
        assert cf.perpetual_survival_annuity(d, 0.0, R, P) == pytest.approx(REF_JTILDE_LOG100_65, rel=1e-12)

    def test_joint_barrier_integral_branch(self):
        assert cf.joint_barrier_prob(0.3, 0.15, 0.0, 2.0, 1.0, P) == pytest.approx(REF_GAMMA, rel=1e-9)


class TestIdentities:
    def test_zero_rate_collapses_hitting_transform(self):
        for d, h in [(0.05, 0.5), (0.2, 1.0), (0.3, 5.0), (0.6, 10.0)]:
            assert cf.discounted_hitting_transform(d, 0.0, h, 0.0, P) == pytest.approx(-cf.hit_prob(h, d, P),
                                                                                      abs=1e-12)

    @pytest.mark.parametrize("t,z0", [(0.25, 0.1), (1.0, 0.3), (3.0, 0.05)])
    def test_pre_report_density_normalized(self, t, z0):
        hi = z0 + 15 * P.sigma * math.sqrt(t)
        mass, _ = integrate.quad(lambda x: cf.pre_report_density(t, x, z0, 0.0, P), 0.0, hi,
                                 epsabs=1e-13, epsrel=1e-12, limit=200)
        assert mass == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("t,x", [(0.25, 0.1), (1.0, 0.3), (3.0, 0.05)])
    def test_killed_density_mass(self, t, x):
        hi = x + 15 * P.sigma * math.sqrt(t)
        mass, _ = integrate.quad(lambda z: cf.killed_density(x, 0.0, z, t, P), 0.0, hi,
                                 epsabs=1e-13, epsrel=1e-12, limit=200)
        assert mass == pytest.approx(1.0 - cf.hit_prob(t, x, P), abs=1e-8)

    @pytest.mark.parametrize("t2", [0.5, 1.0, 2.0])
    def test_joint_barrier_branch_continuity(self, t2):
        at = cf.joint_barrier_prob(0.3, 0.15, 0.0, t2, t2, P)
        above = cf.joint_barrier_prob(0.3, 0.15, 0.0, t2 + 1e-10, t2, P)
        assert above == pytest.approx(at, abs=1e-8)

    def test_survival_complements_hit(self):
        t = np.array([0.1, 1.0, 7.0])
        x = np.array([0.02, 0.2, 0.9])
        np.testing.assert_allclose(cf.survival_prob(t, x, P) + cf.hit_prob(t, x, P), 1.0, atol=1e-14)

    def test_tail_below_barrier_is_survival(self):
        assert cf.min_tail_joint(2.0, 0.3, -0.5, P) == pytest.approx(1 - cf.hit_prob(2.0, 0.3, P), abs=1e-14)

    def test_annuity_integration_by_parts(self):
        d, h = 0.25, 4.0
        direct, _ = integrate.quad(lambda u: math.exp(-R * u) * cf.survival_prob(u, d, P), 0, h,
                                   epsabs=1e-13, epsrel=1e-12)
        assert cf.discounted_survival_annuity(d, 0.0, h, R, P) == pytest.approx(direct, abs=1e-9)

    def test_perpetual_is_long_horizon_limit(self):
        d = 0.4
        assert cf.discounted_hitting_transform(d, 0.0, 3000.0, R, P) == pytest.approx(
            cf.perpetual_hit_transform(d, 0.0, R, P), abs=1e-10)
        assert cf.discounted_survival_annuity(d, 0.0, 3000.0, R, P) == pytest.approx(
            cf.perpetual_survival_annuity(d, 0.0, R, P), abs=1e-8)

    def test_bridge_formula(self):
        assert cf.bridge_no_hit_prob(0.1, 0.2, 0.1) == pytest.approx(1 - math.exp(-4.0), rel=1e-14)

    def test_joint_barrier_short_branch(self):
        val = cf.joint_barrier_prob(0.3, 0.15, 0.0, 1.0, 2.0, P)
        assert val == pytest.approx(cf.hit_prob(2.0, 0.15, P) - cf.hit_prob(1.0, 0.3, P), abs=1e-15)


class TestExtremes:
    def test_tiny_volatility_does_not_overflow(self):
        p = DriftParams(0.05, 1e-4)
        assert cf.hit_prob(1.0, 0.1, p) == 0.0
        assert np.isfinite(cf.log_killed_density(0.1, 0.0, 0.15, 1.0, p))
        assert cf.survival_prob(1.0, 0.1, p) == 1.0

    def test_zero_time(self):
        assert cf.hit_prob(0.0, 0.2, P) == 0.0
        assert cf.discounted_hitting_transform(0.2, 0.0, 0.0, R, P) == 0.0
        assert cf.discounted_survival_annuity(0.2, 0.0, 0.0, R, P) == 0.0

    @pytest.mark.parametrize("call", [
        lambda: cf.hit_prob(1.0, 0.0, P),
        lambda: cf.hit_prob(-1.0, 0.1, P),
        lambda: cf.discounted_hitting_transform(-0.1, 0.0, 1.0, R, P),
        lambda: cf.discounted_survival_annuity(0.1, 0.0, 1.0, 0.0, P),
        lambda: cf.joint_barrier_prob(0.1, 0.2, 0.0, 1.0, 1.0, P),
        lambda: cf.log_killed_density(0.1, 0.0, -0.1, 1.0, P),
        lambda: DriftParams(0.0, 0.0),
    ])
    def test_domain_errors(self, call):
        with pytest.raises(DomainError):
            call()


@given(t=times, x=distances, m=drifts, s=vols)
def test_hit_prob_is_probability(t, x, m, s):
    p = DriftParams(m, s)
    v = cf.hit_prob(t, x, p)
    assert 0.0 <= v <= 1.0
    assert cf.hit_prob(t * 1.5, x, p) >= v - 1e-12
    assert cf.hit_prob(t, x * 1.5, p) <= v + 1e-12


@given(h=times, x=distances, m=drifts, s=vols, r=rates)
def test_transforms_bounded(h, x, m, s, r):
    p = DriftParams(m, s)
    i = cf.discounted_hitting_transform(x, 0.0, h, r, p)
    assert -1.0 <= i <= 0.0
    assert i >= -cf.hit_prob(h, x, p) - 1e-12
    assert i >= cf.perpetual_hit_transform(x, 0.0, r, p) - 1e-12
    a = cf.discounted_survival_annuity(x, 0.0, h, r, p)
    assert 0.0 <= a <= -math.expm1(-r * h) / r + 1e-12


@given(t=times, x=distances, y=st.floats(-0.5, 1.0), m=drifts, s=vols)
def test_tail_monotone_in_level(t, x, y, m, s):
    p = DriftParams(m, s)
    v = cf.min_tail_joint(t, x, y, p)
    assert 0.0 <= v <= 1.0 - cf.hit_prob(t, x, p) + 1e-12
    assert cf.min_tail_joint(t, x, y + 0.1, p) <= v + 1e-12


@given(x=distances, z=st.floats(0.001, 2.0), t=times, m=drifts, s=vols)
def test_killed_density_below_free_density(x, z, t, m, s):
    p = DriftParams(m, s)
    free = -0.5 * ((z - x - m * t) / (s * math.sqrt(t))) ** 2 - math.log(s * math.sqrt(2 * math.pi * t))
    assert cf.log_killed_density(x, 0.0, z, t, p) <= free + 1e-9
