"""Contingent convertible bond pricing under noisy accounting information."""
from .accounting import AccountingHistory, ObsParams
from .closed_form import DomainError, DriftParams
from .estimates import PriceEstimate, derive_seed
from .mcmc import ChainConfig, ChainInitError, ChainResult
from .pricing import (
    CoCoSpec,
    FirmSpec,
    ModelParams,
    i_step_survival,
    price_converter_regulatory,
    price_pwd_accounting,
    price_pwd_accounting_mda,
    price_pwd_regulatory,
    price_pwd_regulatory_mda,
    investment_incentive,
    value_equity_residual,
    value_straight_debt,
)

__version__ = "0.1.0"

__all__ = [
    "AccountingHistory",
    "ChainConfig",
    "ChainInitError",
    "ChainResult",
    "CoCoSpec",
    "DomainError",
    "DriftParams",
    "FirmSpec",
    "ModelParams",
    "ObsParams",
    "PriceEstimate",
    "derive_seed",
    "i_step_survival",
    "price_converter_regulatory",
    "price_pwd_accounting",
    "price_pwd_accounting_mda",
    "price_pwd_regulatory",
    "price_pwd_regulatory_mda",
    "investment_incentive",
    "value_equity_residual",
    "value_straight_debt",
]
