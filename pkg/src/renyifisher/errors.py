"""Exception hierarchy shared by every module."""


class RenyiFisherError(Exception):
    """Base class for all package errors."""


class DomainError(RenyiFisherError, ValueError):
    """An argument lies outside the domain of a function."""


class RegionError(DomainError):
    """Parameters fall outside the region where a family or inequality applies."""


class UnsupportedRegionError(RegionError):
    """No sharp constant is known for the requested (n, alpha)."""


class ConditionError(DomainError):
    """A standing assumption (for example a finite moment or int p^2 < 1) fails."""


class DivergenceError(RenyiFisherError, ArithmeticError):
    """An integral diverges or its tail cannot be bounded to the requested tolerance."""


class ConvergenceError(RenyiFisherError, ArithmeticError):
    """An iterative procedure did not reach its tolerance."""


class ResolutionError(RenyiFisherError, ValueError):
    """A grid is too coarse for the requested operation."""


class MassDriftError(RenyiFisherError, ArithmeticError):
    """Total probability mass drifted beyond the allowed bound."""


class NoiseError(RenyiFisherError, ArithmeticError):
    """Finite-difference estimates disagree under step halving."""


class ConsistencyError(RenyiFisherError, ArithmeticError):
    """Two independent evaluation routes disagree beyond their tolerance."""
