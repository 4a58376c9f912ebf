"""Renyi entropy powers, Renyi-Fisher information and their sharp inequalities."""

from .constants import ConstantRecord, r_closed_form_1d, r_sobolev, r_zero_region
from .densities import make as make_density
from .errors import (
    ConditionError,
    ConsistencyError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    MassDriftError,
    NoiseError,
    RegionError,
    RenyiFisherError,
    ResolutionError,
    UnsupportedRegionError,
)
from .profiles import optimal_constant, profile_density, solve_profile
from .reports import VerdictReport

__version__ = "0.1.0"

__all__ = [
    "ConstantRecord",
    "VerdictReport",
    "make_density",
    "optimal_constant",
    "profile_density",
    "r_closed_form_1d",
    "r_sobolev",
    "r_zero_region",
    "solve_profile",
    "ConditionError",
    "ConsistencyError",
    "ConvergenceError",
    "DivergenceError",
    "DomainError",
    "MassDriftError",
    "NoiseError",
    "RegionError",
    "RenyiFisherError",
    "ResolutionError",
    "UnsupportedRegionError",
]
