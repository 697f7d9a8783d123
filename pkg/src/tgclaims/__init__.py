"""Extreme claim amounts of heterogeneous portfolios with transmuted-G severities.

Exact distributions of the smallest and largest claim, majorization-based
hypothesis checks for their stochastic comparison, and numeric/Monte Carlo
verification of the implied orders.
"""

from .baseline import Exponential, Tabulated, Weibull, baseline_from_dict, is_dfr
from .claims import ExtremeDistribution, Portfolio
from .grid import GridSpec
from .majorization import LOG_SHIFT, RATIONAL, HFunction, ParamMatrix, TTransform
from .orders import OrderVerdict, check_disp, check_hr, check_order, check_rh, check_st
from .scenario import Scenario, load_scenarios
from .theorems import (
    TheoremVerdict,
    check_bounds,
    check_thm_largest_chain,
    check_thm_largest_rh,
    check_thm_smallest_disp,
    check_thm_smallest_hr,
    check_thm_smallest_st,
)

__version__ = "0.1.0"

__all__ = [
    "Exponential",
    "Weibull",
    "Tabulated",
    "baseline_from_dict",
    "is_dfr",
    "Portfolio",
    "ExtremeDistribution",
    "GridSpec",
    "HFunction",
    "LOG_SHIFT",
    "RATIONAL",
    "ParamMatrix",
    "TTransform",
    "OrderVerdict",
    "check_st",
    "check_hr",
    "check_rh",
    "check_disp",
    "check_order",
    "Scenario",
    "load_scenarios",
    "TheoremVerdict",
    "check_thm_largest_chain",
    "check_thm_largest_rh",
    "check_thm_smallest_st",
    "check_thm_smallest_hr",
    "check_thm_smallest_disp",
    "check_bounds",
]
