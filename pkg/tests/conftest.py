import os
from dataclasses import dataclass

import pytest
from hypothesis import HealthCheck, settings

from cocoprice import AccountingHistory, ChainConfig, CoCoSpec, DriftParams, FirmSpec, ModelParams

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@dataclass(frozen=True)
class Base:
    model: ModelParams
    firm: FirmSpec
    coco: CoCoSpec
    hist: AccountingHistory
    t: float

    @property
    def p(self) -> DriftParams:
        return self.model.drift


@pytest.fixture(scope="session")
def base() -> Base:
    model = ModelParams(m=0.01, sigma=0.1, kappa=0.5, mu_eps=0.0, sigma_eps=0.1, r=0.03)
    firm = FirmSpec.from_levels(100, 50, 0.04, 0.5, 65, 80, 92)
    hist = AccountingHistory.from_levels((0.25, 0.5), (100, 100), 100)
    return Base(model, firm, CoCoSpec(5, 0.07, 5.5), hist, 0.5)


@pytest.fixture(scope="session")
def small_chain() -> ChainConfig:
    return ChainConfig(burn_in=3_000, samples=40_000, seed=12345)


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_lines(request) -> list:
    """Summary lines of the acceptance criteria, printed at the end of the run."""
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
