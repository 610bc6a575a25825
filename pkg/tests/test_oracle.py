import math
from dataclasses import replace

import numpy as np
import pytest

from cocoprice import closed_form as cf
from cocoprice.accounting import AccountingHistory
from cocoprice.closed_form import DomainError
from cocoprice.oracle import (
    OracleDegenerateError,
    SimConfig,
    is_expectation_f,
    sim_bridge_no_hit,
    sim_first_passage,
    simulate_price,
)
from cocoprice.pricing import CoCoSpec, FirmSpec, ModelParams

SIM = SimConfig(n_paths=40_000, grid_step=0.02, seed=1)


def riskless(coco, t, r):
    tau = coco.maturity - t
    return coco.p2 * math.exp(-r * tau) + coco.c2 * coco.p2 * (1 - math.exp(-r * tau)) / r


def test_unit_integrand(base):
    est = is_expectation_f(lambda x: np.ones_like(x), base.t, base.hist, base.firm.z_c, base.p, base.model.obs, SIM)
    assert est.value == pytest.approx(1.0, abs=1e-14)
    assert est.stderr == pytest.approx(0.0, abs=1e-14)


def test_flat_likelihood_gives_full_ess(base):
    obs = replace(base.model, sigma_eps=1e3).obs
    far = math.log(1.0)
    est = is_expectation_f(lambda x: x, base.t, base.hist, far, base.p, obs, SIM)
    assert est.ess > 0.99 * SIM.n_paths


def test_degenerate_weights_raise(base):
    obs = replace(base.model, sigma_eps=1e-7).obs
    with pytest.raises(OracleDegenerateError):
        is_expectation_f(lambda x: x, base.t, base.hist, base.firm.z_c, base.p, obs, SIM)


def test_deterministic_limit_is_riskless(base):
    model = ModelParams(0.01, 1e-8, 0.5, 0.0, 1.0, 0.03)
    hist = AccountingHistory.from_levels((0.25, 0.5), (100, 100), 100)
    est = simulate_price("pwd_reg", base.t, base.firm, base.coco, hist, model, replace(SIM, n_paths=2_000))
    assert est.value == pytest.approx(riskless(base.coco, base.t, 0.03), abs=1e-6)


def test_remote_accounting_trigger_is_riskless(base):
    coco = replace(base.coco, trigger_kind="accounting", y_c=math.log(1e-3), y_cc=math.log(1e-3))
    est = simulate_price("pwd_acc", base.t, base.firm, coco, base.hist, base.model, SIM)
    assert est.value == pytest.approx(riskless(coco, base.t, base.model.r), abs=1e-9)


@pytest.mark.parametrize("d,horizon", [(math.log(1.25), 1.0), (0.3, 5.0)])
def test_first_passage_matches_closed_forms(base, d, horizon):
    res = sim_first_passage(d, 0.0, horizon, base.p, base.model.r, replace(SIM, n_paths=100_000), tail_level=d / 2)
    for key, ref in [("hit", cf.hit_prob(horizon, d, base.p)),
                     ("tail", cf.min_tail_joint(horizon, d, d / 2, base.p)),
                     ("I", cf.discounted_hitting_transform(d, 0.0, horizon, base.model.r, base.p)),
                     ("I_tilde", cf.discounted_survival_annuity(d, 0.0, horizon, base.model.r, base.p))]:
        assert abs(res[key].value - ref) <= 3 * res[key].stderr, key


def test_perpetual_transforms(base):
    d = math.log(100 / 65)
    res = sim_first_passage(d, 0.0, 1.0, base.p, base.model.r, replace(SIM, n_paths=40_000), perpetual=True)
    assert abs(res["J"].value - cf.perpetual_hit_transform(d, 0.0, base.model.r, base.p)) <= 3 * res["J"].stderr
    jt = cf.perpetual_survival_annuity(d, 0.0, base.model.r, base.p)
    assert abs(res["J_tilde"].value - jt) <= 3 * res["J_tilde"].stderr


def test_bridge_matches_formula():
    est = sim_bridge_no_hit(0.05, 0.08, 0.1, SimConfig(n_paths=100_000, seed=3), n_steps=16)
    assert abs(est.value - cf.bridge_no_hit_prob(0.05, 0.08, 0.1)) <= 3 * est.stderr


def test_grid_refinement_stable(base):
    cfg = SimConfig(n_paths=40_000, seed=5)
    coarse = simulate_price("pwd_reg", base.t, base.firm, base.coco, base.hist, base.model, replace(cfg, grid_step=0.04))
    fine = simulate_price("pwd_reg", base.t, base.firm, base.coco, base.hist, base.model, replace(cfg, grid_step=0.02))
    assert abs(coarse.value - fine.value) <= 2 * math.hypot(coarse.stderr, fine.stderr)


def test_reproducible(base):
    a = simulate_price("pwd_reg_mda", base.t, base.firm, base.coco, base.hist, base.model, replace(SIM, n_paths=5_000))
    b = simulate_price("pwd_reg_mda", base.t, base.firm, base.coco, base.hist, base.model, replace(SIM, n_paths=5_000))
    assert a == b
    assert a.ess >= 0.01 * a.n_paths


def test_input_validation(base):
    with pytest.raises(ValueError):
        simulate_price("nope", base.t, base.firm, base.coco, base.hist, base.model, SIM)
    with pytest.raises(DomainError):
        simulate_price("pwd_reg_mda", base.t, replace(base.firm, z_cc=None), base.coco, base.hist, base.model, SIM)
    with pytest.raises(ValueError):
        SimConfig(grid_step=0.0)
    with pytest.raises(DomainError):
        is_expectation_f(lambda x: x, 0.1, base.hist, base.firm.z_c, base.p, base.model.obs, SIM)


def test_straight_debt_uses_default_barrier_for_coupons(base):
    from cocoprice.oracle import simulate_straight_debt

    firm = FirmSpec.from_levels(100, 50, 0.04, 0.5, 1e-6, 80)
    est = simulate_straight_debt(base.t, firm, base.hist, base.model, replace(SIM, n_paths=2_000))
    assert est.value == pytest.approx(firm.c1 * firm.p1 / base.model.r, rel=1e-4)
