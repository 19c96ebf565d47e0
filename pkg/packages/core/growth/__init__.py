from packages.core.growth.spectral import SpectralData, perron, spectral_from_matrix
from packages.core.growth.rate_function import (
    RateFunctionValue,
    rate_function,
    reproductive_payoff,
)
from packages.core.growth.variational import VariationalGrowth, growth_variational
from packages.core.growth.periodic import PeriodicGrowth, pair_chain, periodic_growth
from packages.core.growth.closed_forms import (
    PeriodicTwoPatchClosedForms,
    TwoPatchClosedForms,
    periodic_two_patch_closed_forms,
    two_patch_closed_forms,
)

__all__ = [
    "SpectralData",
    "perron",
    "spectral_from_matrix",
    "RateFunctionValue",
    "rate_function",
    "reproductive_payoff",
    "VariationalGrowth",
    "growth_variational",
    "PeriodicGrowth",
    "pair_chain",
    "periodic_growth",
    "PeriodicTwoPatchClosedForms",
    "TwoPatchClosedForms",
    "periodic_two_patch_closed_forms",
    "two_patch_closed_forms",
]
