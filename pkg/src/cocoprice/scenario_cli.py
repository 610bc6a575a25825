"""Scenario files, parameter sweeps, the Deutsche Bank case and oracle validation.

Config files are JSON with asset *levels* (``v_c: 80``); logs are taken on
load. See ``docs/config_schema.md`` for the schema.
"""
from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import oracle, pricing
from .accounting import AccountingHistory
from .closed_form import DomainError
from .estimates import PriceEstimate, derive_seed
from .mcmc import ChainConfig, ChainInitError

PRODUCTS = ("pwd_reg", "pwd_reg_mda", "converter", "pwd_acc", "pwd_acc_mda", "straight_debt", "equity")

_SCHEMA = {
    "model": {"m", "sigma", "kappa", "mu_eps", "sigma_eps", "r"},
    "firm": {"v0", "p1", "c1", "alpha", "v_b", "v_c", "v_cc"},
    "coco": {"p2", "c2", "term", "maturity", "recovery", "delta", "rho", "mda", "y_c_level", "y_cc_level"},
    "history": {"times", "reports"},
    "valuation": {"t", "report_step"},
    "chain": {"burn_in", "samples", "n_chains", "proposal_scale", "target_acceptance"},
    "sweep": {"param", "values"},
}
_TOP = {"product", "seed", "output", "description", *_SCHEMA}
_REQUIRED = {
    "model": {"m", "sigma", "kappa", "mu_eps", "sigma_eps", "r"},
    "firm": {"v0", "p1", "c1", "alpha", "v_b", "v_c"},
    "coco": {"p2", "c2"},
    "history": {"times", "reports"},
}

CSV_COLUMNS = ("sweep_param", "sweep_value", "price", "stderr", "leg_principal", "leg_coupon",
               "leg_conversion", "acceptance_rate", "ess", "seed", "error")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


class ConfigError(ValueError):
    """Invalid scenario file; the message names the offending field."""


@dataclass(frozen=True)
class ScenarioConfig:
    product: str
    model: pricing.ModelParams
    firm: pricing.FirmSpec
    coco: pricing.CoCoSpec
    history: AccountingHistory
    t: float
    report_step: float
    chain: ChainConfig
    seed: int
    sweep_param: str | None
    sweep_values: tuple
    output: str | None
    raw: dict


# --- loading ------------------------------------------------------------------


def _num(section, key, value, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{section}.{key} must be a finite number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{section}.{key} must be > 0, got {value!r}")
    return float(value)


def _check_keys(raw):
    unknown = set(raw) - _TOP
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {sorted(unknown)}")
    for section, allowed in _SCHEMA.items():
        if section not in raw:
            if section in _REQUIRED:
                raise ConfigError(f"missing section '{section}'")
            continue
        if not isinstance(raw[section], dict):
            raise ConfigError(f"'{section}' must be an object")
        extra = set(raw[section]) - allowed
        if extra:
            raise ConfigError(f"unknown key(s) in '{section}': {sorted(extra)}")
        missing = _REQUIRED.get(section, set()) - set(raw[section])
        if missing:
            hint = " (kappa has no default; the source model leaves it unstated)" if "kappa" in missing else ""
            raise ConfigError(f"missing key(s) in '{section}': {sorted(missing)}{hint}")


def parse_config(raw: dict) -> ScenarioConfig:
    """Validate a config dictionary and convert levels to logs."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    _check_keys(raw)
    product = raw.get("product", "pwd_reg")
    if product not in PRODUCTS:
        raise ConfigError(f"product must be one of {PRODUCTS}, got {product!r}")

    m = {k: _num("model", k, v) for k, v in raw["model"].items()}
    f = raw["firm"]
    c = raw["coco"]
    h = raw["history"]
    val = raw.get("valuation", {})
    ch = raw.get("chain", {})

    v_b = _num("firm", "v_b", f["v_b"], True)
    v_c = _num("firm", "v_c", f["v_c"], True)
    if not v_b < v_c:
        raise ConfigError(f"firm.v_b ({v_b}) must be below firm.v_c ({v_c})")
    v_cc = f.get("v_cc")
    if v_cc is not None:
        v_cc = _num("firm", "v_cc", v_cc, True)
        if not v_cc > v_c:
            raise ConfigError(f"firm.v_cc ({v_cc}) must be above firm.v_c ({v_c})")
    if product in ("pwd_reg_mda", "pwd_acc_mda") and v_cc is None and c.get("y_cc_level") is None:
        raise ConfigError(f"product {product} needs firm.v_cc (or coco.y_cc_level)")

    try:
        model = pricing.ModelParams(m["m"], m["sigma"], m["kappa"], m["mu_eps"], m["sigma_eps"], m["r"])
    except DomainError as exc:
        raise ConfigError(f"model: {exc}") from exc
    if not model.r > 0:
        raise ConfigError(f"model.r must be > 0, got {model.r}")

    v0 = _num("firm", "v0", f["v0"], True)
    if not v0 > v_c:
        raise ConfigError(f"firm.v0 ({v0}) must be above firm.v_c ({v_c})")
    try:
        firm = pricing.FirmSpec.from_levels(v0, _num("firm", "p1", f["p1"]), _num("firm", "c1", f["c1"]),
                                            _num("firm", "alpha", f["alpha"]), v_b, v_c, v_cc)
    except DomainError as exc:
        raise ConfigError(f"firm: {exc}") from exc

    times, reports = h["times"], h["reports"]
    if not isinstance(times, list) or not isinstance(reports, list) or len(times) != len(reports):
        raise ConfigError("history.times and history.reports must be lists of equal length")
    try:
        hist = AccountingHistory.from_levels([_num("history", "times", x) for x in times],
                                             [_num("history", "reports", x, True) for x in reports], v0)
    except DomainError as exc:
        raise ConfigError(f"history: {exc}") from exc

    t = val.get("t")
    t = hist.last_time if t is None else _num("valuation", "t", t)
    if t < hist.last_time:
        raise ConfigError(f"valuation.t ({t}) precedes the last report time ({hist.last_time})")
    step = _num("valuation", "report_step", val.get("report_step", pricing.DEFAULT_REPORT_STEP), True)

    if ("term" in c) == ("maturity" in c):
        raise ConfigError("coco needs exactly one of 'term' (years after the last report) or 'maturity'")
    maturity = hist.last_time + _num("coco", "term", c["term"]) if "term" in c else _num("coco", "maturity", c["maturity"])
    if "delta" in c and "rho" in c:
        raise ConfigError("coco accepts 'delta' or 'rho', not both")
    p2 = _num("coco", "p2", c["p2"])
    if "rho" in c:
        rho = _num("coco", "rho", c["rho"])
        if not 0 <= rho <= 1:
            raise ConfigError(f"coco.rho must lie in [0, 1], got {rho}")
        delta = pricing.CoCoSpec.delta_for_rho(rho, p2) if p2 > 0 else 0.0
    else:
        delta = _num("coco", "delta", c.get("delta", 0.0))
    accounting = product in ("pwd_acc", "pwd_acc_mda")
    y_c_level = c.get("y_c_level", v_c if accounting else None)
    y_cc_level = c.get("y_cc_level", v_cc if product == "pwd_acc_mda" else None)
    mda = bool(c.get("mda", product in ("pwd_reg_mda", "pwd_acc_mda")))
    if mda and product in ("converter", "equity") and v_cc is None:
        raise ConfigError("coco.mda needs firm.v_cc")
    try:
        coco = pricing.CoCoSpec(
            p2=p2, c2=_num("coco", "c2", c["c2"]), maturity=maturity,
            recovery=_num("coco", "recovery", c.get("recovery", 0.0)), delta=delta,
            trigger_kind="accounting" if accounting else "regulatory",
            y_c=None if y_c_level is None else float(np.log(_num("coco", "y_c_level", y_c_level, True))),
            y_cc=None if y_cc_level is None else float(np.log(_num("coco", "y_cc_level", y_cc_level, True))),
            mda_enabled=mda,
        )
    except DomainError as exc:
        raise ConfigError(f"coco: {exc}") from exc
    if maturity < t:
        raise ConfigError(f"coco maturity ({maturity}) precedes valuation.t ({t})")

    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    try:
        chain = ChainConfig(
            burn_in=int(ch.get("burn_in", 20_000)), samples=int(ch.get("samples", 200_000)),
            n_chains=int(ch.get("n_chains", 16)), proposal_scale=float(ch.get("proposal_scale", 0.05)),
            target_acceptance=float(ch.get("target_acceptance", 0.3)), seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(f"chain: {exc}") from exc

    sweep = raw.get("sweep")
    param, values = None, ()
    if sweep is not None:
        param = sweep.get("param")
        values = sweep.get("values")
        if not isinstance(param, str) or "." not in param:
            raise ConfigError("sweep.param must be 'section.key'")
        sec, key = param.split(".", 1)
        if sec not in _SCHEMA or sec == "sweep" or key not in _SCHEMA[sec]:
            raise ConfigError(f"sweep.param '{param}' does not name a config field")
        if not isinstance(values, list) or not values:
            raise ConfigError("sweep.values must be a non-empty list")
        values = tuple(values)
    return ScenarioConfig(product, model, firm, coco, hist, t, step, chain, seed, param, values,
                          raw.get("output"), copy.deepcopy(raw))


def load_config(path) -> ScenarioConfig:
    """Read and validate a JSON scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_config(raw)


def builtin_config(name: str) -> dict:
    """Raw dictionary of a config shipped with the package (e.g. ``"base_case"``)."""
    return json.loads(resources.files("cocoprice.configs").joinpath(f"{name}.json").read_text())


def with_overrides(raw: dict, overrides: dict) -> dict:
    """Copy of ``raw`` with ``{"section.key": value}`` overrides applied."""
    out = copy.deepcopy(raw)
    for dotted, value in overrides.items():
        if "." in dotted:
            sec, key = dotted.split(".", 1)
            out.setdefault(sec, {})
            if value is None:
                out[sec].pop(key, None)
            else:
                out[sec][key] = value
        else:
            out[dotted] = value
    return out


# --- pricing -------------------------------------------------------------------


def price_config(cfg: ScenarioConfig, seed: int | None = None) -> PriceEstimate:
    """Price the configured product with chain seed ``seed`` (default: the config seed)."""
    chain = cfg.chain if seed is None else cfg.chain.with_seed(seed)
    args = (cfg.t, cfg.firm, cfg.coco, cfg.history, cfg.model, chain)
    if cfg.product == "pwd_reg":
        return pricing.price_pwd_regulatory(*args)
    if cfg.product == "pwd_reg_mda":
        return pricing.price_pwd_regulatory_mda(*args)
    if cfg.product == "converter":
        return pricing.price_converter_regulatory(*args)
    if cfg.product == "pwd_acc":
        return pricing.price_pwd_accounting(cfg.t, cfg.coco, cfg.history, cfg.model, chain, cfg.report_step)
    if cfg.product == "pwd_acc_mda":
        return pricing.price_pwd_accounting_mda(cfg.t, cfg.coco, cfg.history, cfg.model, chain, cfg.report_step)
    if cfg.product == "straight_debt":
        return pricing.value_straight_debt(cfg.t, cfg.firm, cfg.history, cfg.model, chain)
    return pricing.value_equity_residual(*args)


def point_seed(master: int, index: int) -> int:
    """Chain seed of grid point ``index``; the ``price`` command uses index 0."""
    return derive_seed(master, index)


def _row(param, value, est: PriceEstimate | None, seed, error=""):
    comps = est.components if est is not None else {}
    conv = comps.get("conversion", comps.get("recovery", ""))
    return {
        "sweep_param": param or "",
        "sweep_value": value,
        "price": "" if est is None else repr(est.value),
        "stderr": "" if est is None else repr(est.stderr),
        "leg_principal": repr(comps["principal"]) if "principal" in comps else "",
        "leg_coupon": repr(comps["coupon"]) if "coupon" in comps else "",
        "leg_conversion": repr(conv) if conv != "" else "",
        "acceptance_rate": "" if est is None else repr(est.meta.get("acceptance_rate", "")),
        "ess": "" if est is None else repr(est.meta.get("ess", "")),
        "seed": seed,
        "error": error,
    }


def run_sweep(cfg: ScenarioConfig) -> list[dict]:
    """One pricing call per grid value, each with a fresh seed derived from the master seed.

    Failures become rows with an ``error`` message; the sweep continues.
    Without a sweep descriptor this prices the config once (as grid point 0).
    """
    values = cfg.sweep_values if cfg.sweep_param else (None,)
    rows = []
    for idx, value in enumerate(values):
        seed = point_seed(cfg.seed, idx)
        try:
            point = cfg if value is None else parse_config(with_overrides(cfg.raw, {cfg.sweep_param: value}))
            rows.append(_row(cfg.sweep_param, "" if value is None else value, price_config(point, seed), seed))
        except (ConfigError, DomainError, ChainInitError, FloatingPointError) as exc:
            rows.append(_row(cfg.sweep_param, value, None, seed, f"{type(exc).__name__}: {exc}"))
    return rows


def rows_to_csv(rows, columns=CSV_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row.get(k, "") for k in columns})
    return buf.getvalue()


# --- Deutsche Bank case ----------------------------------------------------------

DB_DEBT = 352.93  # 397 x (1 - 0.111), EUR bn
DB_MDA_LEVELS = (("none", None), ("cet1_10", 10.0), ("cet1_11", 11.0), ("cet1_12", 12.0))


def mda_level(cet1_pct: float) -> float:
    """Risk-weighted asset level at which the CET1 ratio equals ``cet1_pct`` percent."""
    return DB_DEBT / (1.0 - cet1_pct / 100.0)


DB_COLUMNS = ("mda", "v_cc", "pre_price", "pre_stderr", "post_price", "post_stderr", "drop_pct", "drop_stderr_pct",
              "seed")


def run_db_case(cfg_overrides: dict | None = None, levels=None, seed: int | None = None,
                chain: ChainConfig | None = None) -> list[dict]:
    """CoCo price before and after the second report for each MDA level.

    The pre-report price uses the first report only; both prices are taken at
    the date of the second report. ``levels`` is a sequence of
    ``(label, cet1_pct or None)``.
    """
    raw = with_overrides(builtin_config("db_case"), cfg_overrides or {})
    if seed is not None:
        raw["seed"] = seed
    base = parse_config(raw)
    if chain is not None:
        base = replace(base, chain=replace(chain, seed=base.seed))
    pre_hist = base.history.truncated(base.history.n - 1)
    rows = []
    for k, (label, pct) in enumerate(levels or DB_MDA_LEVELS):
        s = point_seed(base.seed, k)
        cfg = base
        if pct is not None:
            z_cc = float(np.log(mda_level(pct)))
            cfg = replace(base, product="pwd_reg_mda", firm=replace(base.firm, z_cc=z_cc))
        else:
            cfg = replace(base, product="pwd_reg")
        pre = price_config(replace(cfg, history=pre_hist), s)
        post = price_config(cfg, derive_seed(s, 1))
        ratio = post.value / pre.value
        rel = ratio * math.hypot(post.stderr / post.value, pre.stderr / pre.value)
        rows.append({
            "mda": label, "v_cc": "" if pct is None else repr(mda_level(pct)),
            "pre_price": repr(pre.value), "pre_stderr": repr(pre.stderr),
            "post_price": repr(post.value), "post_stderr": repr(post.stderr),
            "drop_pct": repr(100.0 * (1.0 - ratio)), "drop_stderr_pct": repr(100.0 * rel), "seed": s,
        })
    return rows


# --- validation --------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    estimate: float
    reference: float
    stderr: float
    passed: bool

    @property
    def z(self) -> float:
        return (self.estimate - self.reference) / self.stderr if self.stderr > 0 else 0.0


def _compare(name, est, est_se, ref, ref_se=0.0, k=3.0) -> Check:
    se = math.hypot(est_se, ref_se)
    ok = abs(est - ref) <= k * se if se > 0 else abs(est - ref) <= 1e-12
    return Check(name, float(est), float(ref), float(se), bool(ok))


def run_validate(quick: bool = False, seed: int = 0, inject_fault: bool = False) -> list[Check]:
    """Oracle cross-checks of the closed forms and of every product at the base case.

    ``inject_fault`` scales the regulatory PWD payoff by 1.05 to show that the
    suite notices a wrong formula.
    """
    from . import closed_form as cf

    raw = builtin_config("base_case")
    base = parse_config(raw)
    p, r = base.model.drift, base.model.r
    sim = oracle.SimConfig(n_paths=100_000 if quick else 400_000, grid_step=0.02, seed=derive_seed(seed, 11))
    chain = ChainConfig(burn_in=4_000 if quick else 10_000, samples=40_000 if quick else 100_000,
                        seed=derive_seed(seed, 12))
    checks = []

    points = [(np.log(100 / 80), 1.0), (0.05, 0.5)] if quick else [(np.log(100 / 80), 1.0), (0.05, 0.5),
                                                                   (0.3, 5.0), (0.1, 2.0), (0.5, 0.25)]
    for j, (d, horizon) in enumerate(points):
        res = oracle.sim_first_passage(d, 0.0, horizon, p, r, replace(sim, seed=derive_seed(seed, 20 + j)),
                                       tail_level=d / 2)
        checks.append(_compare(f"hit_prob d={d:.3g} t={horizon}", res["hit"].value, res["hit"].stderr,
                               cf.hit_prob(horizon, d, p)))
        checks.append(_compare(f"min_tail_joint d={d:.3g} t={horizon}", res["tail"].value, res["tail"].stderr,
                               cf.min_tail_joint(horizon, d, d / 2, p)))
        checks.append(_compare(f"hitting_transform d={d:.3g} t={horizon}", res["I"].value, res["I"].stderr,
                               cf.discounted_hitting_transform(d, 0.0, horizon, r, p)))
        checks.append(_compare(f"survival_annuity d={d:.3g} t={horizon}", res["I_tilde"].value,
                               res["I_tilde"].stderr, cf.discounted_survival_annuity(d, 0.0, horizon, r, p)))

    hist, firm, coco, model = base.history, base.firm, base.coco, base.model
    t = base.t
    fault = 1.05 if inject_fault else 1.0
    est = pricing.price_pwd_regulatory(t, firm, coco, hist, model, chain)
    ora = oracle.simulate_price("pwd_reg", t, firm, coco, hist, model, sim)
    checks.append(_compare("pwd_reg vs cashflow simulation", fault * est.value, est.stderr, ora.value, ora.stderr))

    mda_firm = replace(firm, z_cc=float(np.log(92.0)))
    est = pricing.price_pwd_regulatory_mda(t, mda_firm, coco, hist, model, chain)
    ora = oracle.simulate_price("pwd_reg_mda", t, mda_firm, coco, hist, model, sim)
    checks.append(_compare("pwd_reg_mda vs cashflow simulation", est.value, est.stderr, ora.value, ora.stderr))

    conv = replace(coco, delta=pricing.CoCoSpec.delta_for_rho(0.5, coco.p2))
    est = pricing.price_converter_regulatory(t, firm, conv, hist, model, chain)
    ora = oracle.simulate_price("converter", t, firm, conv, hist, model, sim)
    checks.append(_compare("converter vs cashflow simulation", est.value, est.stderr, ora.value, ora.stderr))

    acc = replace(coco, trigger_kind="accounting", y_c=float(np.log(80.0)), y_cc=float(np.log(92.0)))
    est = pricing.price_pwd_accounting(t, acc, hist, model, chain, base.report_step)
    ora = oracle.simulate_price("pwd_acc", t, firm, acc, hist, model, sim, base.report_step)
    checks.append(_compare("pwd_acc vs report simulation", est.value, est.stderr, ora.value, ora.stderr))
    est = pricing.price_pwd_accounting_mda(t, acc, hist, model, chain, base.report_step)
    ora = oracle.simulate_price("pwd_acc_mda", t, firm, acc, hist, model, sim, base.report_step)
    checks.append(_compare("pwd_acc_mda vs report simulation", est.value, est.stderr, ora.value, ora.stderr))
    return checks


def format_checks(checks) -> str:
    lines = [f"{'check':48s} {'estimate':>12s} {'reference':>12s} {'z':>7s}  result"]
    for c in checks:
        lines.append(f"{c.name:48s} {c.estimate:12.6f} {c.reference:12.6f} {c.z:7.2f}  {'PASS' if c.passed else 'FAIL'}")
    return "\n".join(lines)


# --- command line --------------------------------------------------------------------


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, help="master seed (overrides the config)")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--chains", type=_positive_int, help="number of parallel Metropolis chains")
    common.add_argument("--samples", type=_positive_int, help="retained draws in total across chains")
    common.add_argument("--burn-in", type=_nonneg_int, dest="burn_in", help="burn-in iterations per chain")

    parser = argparse.ArgumentParser(prog="cocoprice", description="CoCo pricing with noisy accounting reports")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("price", parents=[common], help="price the product of a config file once")
    p.add_argument("config")
    s = sub.add_parser("sweep", parents=[common], help="run the config's parameter sweep, emit CSV")
    s.add_argument("config")
    d = sub.add_parser("db-case", parents=[common], help="Deutsche Bank February 2016 report case")
    g = d.add_mutually_exclusive_group()
    g.add_argument("--mda-cet1", type=float, metavar="PCT", help="single MDA trigger at this CET1 ratio (percent)")
    g.add_argument("--no-mda", action="store_true", help="only the case without MDA trigger")
    v = sub.add_parser("validate", parents=[common], help="oracle cross-checks")
    v.add_argument("--quick", action="store_true", help="fewer paths and draws")
    v.add_argument("--inject-fault", action="store_true", help="corrupt one payoff to test the checks")
    return parser


def _chain_overrides(args) -> dict:
    out = {}
    if args.chains is not None:
        out["chain.n_chains"] = args.chains
    if args.samples is not None:
        out["chain.samples"] = args.samples
    if args.burn_in is not None:
        out["chain.burn_in"] = args.burn_in
    if args.seed is not None:
        out["seed"] = args.seed
    return out


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_with_args(path, args) -> ScenarioConfig:
    cfg = load_config(path)
    overrides = _chain_overrides(args)
    return parse_config(with_overrides(cfg.raw, overrides)) if overrides else cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "price":
            cfg = _load_with_args(args.config, args)
            seed = point_seed(cfg.seed, 0)
            est = price_config(cfg, seed)
            doc = {"product": cfg.product, "value": est.value, "stderr": est.stderr,
                   "components": est.components, "meta": est.meta, "seed": seed}
            _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out or cfg.output)
            return EXIT_OK
        if args.command == "sweep":
            cfg = _load_with_args(args.config, args)
            rows = run_sweep(cfg)
            _emit(rows_to_csv(rows), args.out or cfg.output)
            return EXIT_NUMERIC if any(r["error"] for r in rows) else EXIT_OK
        if args.command == "db-case":
            if args.no_mda:
                levels = (("none", None),)
            elif args.mda_cet1 is not None:
                if not 0 < args.mda_cet1 < 100:
                    raise ConfigError("--mda-cet1 must lie in (0, 100)")
                levels = ((f"cet1_{args.mda_cet1:g}", args.mda_cet1),)
            else:
                levels = None
            overrides = _chain_overrides(args)
            rows = run_db_case(overrides, levels)
            _emit(rows_to_csv(rows, DB_COLUMNS), args.out)
            return EXIT_OK
        checks = run_validate(quick=args.quick, seed=args.seed or 0, inject_fault=args.inject_fault)
        _emit(format_checks(checks) + "\n", args.out)
        return EXIT_OK if all(c.passed for c in checks) else EXIT_NUMERIC
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, ChainInitError, oracle.OracleDegenerateError, FloatingPointError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
