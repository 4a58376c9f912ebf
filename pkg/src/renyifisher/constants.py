"""Closed-form sharp constants and bound coefficients.

``r_{alpha,n}`` denotes the best constant in N_alpha(X) I_alpha(X) >= r.
Every formula is assembled in log space and exponentiated once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConditionError, DomainError, RegionError
from .special_functions import log_gamma

__all__ = [
    "ALPHA_INF",
    "ConstantRecord",
    "r_closed_form_1d",
    "r_sobolev",
    "r_zero_region",
    "gaussian_isoperimetric_value",
    "savare_toscani_gamma",
    "omega_bounds_1d",
    "cm_bound_coefficients",
    "appendix_b_bound",
    "max_renyi_power_integral",
    "max_renyi_entropy",
    "ALPHA_ONE_WINDOW",
]

ALPHA_INF = math.inf
ALPHA_ONE_WINDOW = 1e-9
TWO_PI_E = 2.0 * math.pi * math.e

ROUTES = (
    "closed_form_1d",
    "ode_profile",
    "sobolev",
    "zero_region",
    "limit_alpha0",
    "limit_alphainf",
    "shannon_limit",
)


@dataclass(frozen=True)
class ConstantRecord:
    """Sharp constant r_{alpha,n} together with how it was obtained."""

    alpha: float
    n: int
    value: float
    route: str
    limit_scaled: Optional[float] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.route not in ROUTES:
            raise DomainError(f"unknown route {self.route!r}")

    def to_dict(self) -> dict:
        out = {
            "alpha": self.alpha,
            "n": self.n,
            "value": self.value,
            "route": self.route,
            "limit_scaled": self.limit_scaled,
        }
        if self.meta:
            out["meta"] = dict(self.meta)
        return out


def _is_one(alpha: float) -> bool:
    return abs(alpha - 1.0) < ALPHA_ONE_WINDOW


def _log_r_1d(alpha: float) -> float:
    if alpha > 1.0:
        d = alpha - 1.0
        return (
            math.log(2.0 * math.pi / d)
            + ((alpha + 1.0) / d) * math.log(2.0 * alpha / (alpha + 1.0))
            + 2.0 * (log_gamma((alpha + 1.0) / (2.0 * d)) - log_gamma(alpha / d))
        )
    d = 1.0 - alpha
    return (
        math.log(4.0 * math.pi * alpha / (d * (1.0 + alpha)))
        + (2.0 * alpha / d) * math.log((alpha + 1.0) / (2.0 * alpha))
        + 2.0 * (log_gamma(alpha / d) - log_gamma((alpha + 1.0) / (2.0 * d)))
    )


def r_closed_form_1d(alpha: float) -> ConstantRecord:
    """One-dimensional sharp constant r_{alpha,1} for alpha in [0, inf].

    alpha = 0 and alpha = inf return the finite limits of alpha * r in
    ``limit_scaled`` (4 and 4 pi^2); ``value`` is then the limit of r itself
    (inf and 0).
    """
    alpha = float(alpha)
    if math.isnan(alpha) or alpha < 0.0:
        raise DomainError(f"alpha must be nonnegative, got {alpha!r}")
    if alpha == 0.0:
        return ConstantRecord(0.0, 1, math.inf, "limit_alpha0", limit_scaled=4.0)
    if math.isinf(alpha):
        return ConstantRecord(ALPHA_INF, 1, 0.0, "limit_alphainf", limit_scaled=4.0 * math.pi ** 2)
    if _is_one(alpha):
        return ConstantRecord(1.0, 1, TWO_PI_E, "closed_form_1d", meta={"branch": "shannon"})
    branch = "compact" if alpha > 1.0 else "decay"
    return ConstantRecord(alpha, 1, math.exp(_log_r_1d(alpha)), "closed_form_1d", meta={"branch": branch})


def r_sobolev(n: int) -> ConstantRecord:
    """r at alpha = (n-2)/n: 4 pi n^2 (Gamma(n/2)/Gamma(n))^(2/n)."""
    if int(n) != n or n < 3:
        raise DomainError(f"the Sobolev case needs an integer n >= 3, got {n!r}")
    n = int(n)
    log_v = math.log(4.0 * math.pi * n * n) + (2.0 / n) * (log_gamma(0.5 * n) - log_gamma(float(n)))
    return ConstantRecord((n - 2.0) / n, n, math.exp(log_v), "sobolev")


def r_zero_region(n: int, alpha: float) -> ConstantRecord:
    """r = 0 for 0 < alpha < (n-2)/n when n >= 3."""
    if int(n) != n or n < 3:
        raise DomainError(f"the zero region exists only for n >= 3, got n={n!r}")
    if not 0.0 < alpha < (n - 2.0) / n:
        raise DomainError(f"alpha must lie in (0, {(n - 2.0) / n:g}) for n={n}, got {alpha!r}")
    return ConstantRecord(float(alpha), int(n), 0.0, "zero_region")


def gaussian_isoperimetric_value(alpha: float) -> float:
    """N_alpha * I_alpha of any one-dimensional Gaussian: 2 pi alpha^(1/(alpha-1))."""
    alpha = float(alpha)
    if not alpha > 0.0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if _is_one(alpha):
        return TWO_PI_E
    return 2.0 * math.pi * math.exp(math.log(alpha) / (alpha - 1.0))


def savare_toscani_gamma(n: int, alpha: float) -> float:
    """Sharp constant of Ntilde_alpha * Itilde_alpha >= gamma_{n,alpha}, attained by the Barenblatt profile.

    At alpha = 1 the value is the Shannon limit 2 pi e n.
    """
    n = int(n)
    alpha = float(alpha)
    if n < 1:
        raise DomainError("dimension must be positive")
    if not alpha > n / (n + 2.0):
        raise DomainError(f"alpha must exceed n/(n+2)={n / (n + 2.0):g} for n={n}")
    if _is_one(alpha):
        return TWO_PI_E * n
    last = math.log(((n + 2.0) * alpha - n) / (2.0 * alpha)) * (2.0 + n * (alpha - 1.0)) / (n * (alpha - 1.0))
    if alpha > 1.0:
        d = alpha - 1.0
        ratio = log_gamma(alpha / d) - log_gamma(0.5 * n + alpha / d)
        return math.exp(math.log(n * math.pi * 2.0 * alpha / d) + (2.0 / n) * ratio + last)
    d = 1.0 - alpha
    ratio = log_gamma(1.0 / d - 0.5 * n) - log_gamma(1.0 / d)
    return math.exp(math.log(n * math.pi * 2.0 * alpha / d) + (2.0 / n) * ratio + last)


def _log_omega1(alpha: float) -> float:
    d = 1.0 - alpha
    g = log_gamma(alpha / d) + log_gamma(1.0 / d) - 2.0 * log_gamma((alpha + 1.0) / (2.0 * d))
    return (
        math.log(4.0 * alpha)
        + ((3.0 * alpha - 1.0) / d) * math.log(alpha + 1.0)
        + ((1.0 + alpha) / d) * math.log(3.0 * alpha - 1.0)
        - (2.0 * (alpha + 1.0) / d) * math.log(2.0 * alpha)
        + 2.0 * g
    )


def _log_omega2(alpha: float) -> float:
    d = alpha - 1.0
    g = log_gamma((alpha + 1.0) / (2.0 * d)) - log_gamma(1.0 / d)
    return (
        (4.0 / d) * math.log(2.0)
        + 2.0 * math.log(d)
        + ((alpha + 3.0) / d) * math.log(alpha)
        + ((alpha - 3.0) / d) * math.log(alpha + 1.0)
        - ((1.0 + alpha) / d) * math.log(3.0 * alpha - 1.0)
        + 4.0 * g
    )


def omega_bounds_1d(alpha: float) -> float:
    """Constant omega with I_alpha(f) >= omega / Var(f) in one dimension.

    Branch omega_1 for 1/3 < alpha < 1 and omega_2 for alpha > 1; both tend
    to 1 as alpha -> 1, which is returned at alpha = 1.
    """
    alpha = float(alpha)
    if not alpha > 1.0 / 3.0:
        raise DomainError(f"omega is defined for alpha > 1/3, got {alpha!r}")
    if _is_one(alpha):
        return 1.0
    if alpha < 1.0:
        return math.exp(_log_omega1(alpha))
    return math.exp(_log_omega2(alpha))


def cm_bound_coefficients(alpha: float, beta: float, j: int, t: float, K: float) -> float:
    """(j-1)! beta^(j-1) / 2 * (omega(alpha)/(K+t))^j."""
    if int(j) != j or j < 1:
        raise DomainError("j must be a positive integer")
    if not beta > 0:
        raise DomainError("beta must be positive")
    if not K > 0:
        raise DomainError("K must be positive")
    if t < 0:
        raise DomainError("t must be nonnegative")
    j = int(j)
    omega = omega_bounds_1d(alpha)
    log_v = (
        log_gamma(float(j))
        + (j - 1) * math.log(beta)
        - math.log(2.0)
        + j * (math.log(omega) - math.log(K + t))
    )
    return math.exp(log_v)


# Gamma(3/2), Gamma(5/2), Gamma(7/2)
_G32 = 0.5 * math.sqrt(math.pi)
_G52 = 0.75 * math.sqrt(math.pi)
_G72 = 1.875 * math.sqrt(math.pi)


def _appendix_b_slack(K: float) -> float:
    return math.sqrt(5.0 * math.pi * K) * _G72 - 2.0 * _G52 ** 2


def appendix_b_bound(K: float, t: float, j: int) -> float:
    """Lower bound on (-1)^(j-1) d^j/dt^j h_2(X_t) for n = 1 through the log-Tsallis route.

    Evaluates
        (j-1)! * (512 Gamma(3/2)^2 Gamma(5/2)^6 /
                  (135 (K+t) Gamma(7/2)^2 (sqrt(5 pi (K+t)) Gamma(7/2) - 2 Gamma(5/2)^2)))^j.
    The denominator vanishes exactly when the variance-K maximiser of h_2
    has int f^2 = 1, so that condition raises ``ConditionError``.
    """
    if not K > 0:
        raise DomainError("K must be positive")
    if t < 0:
        raise DomainError("t must be nonnegative")
    if int(j) != j or j < 1:
        raise DomainError("j must be a positive integer")
    j = int(j)
    if _appendix_b_slack(K) < 0.0:
        raise ConditionError(f"K={K!r} violates int f^2 < 1 for the variance-K maximiser")
    slack = _appendix_b_slack(K + t)
    if slack <= 1e-300 or slack <= 1e-14 * 2.0 * _G52 ** 2:
        raise ConditionError("int f^2 = 1 boundary: the bound is infinite")
    base = 512.0 * _G32 ** 2 * _G52 ** 6 / (135.0 * (K + t) * _G72 ** 2 * slack)
    return math.exp(log_gamma(float(j)) + j * math.log(base))


def _max_renyi_shape(n: int, alpha: float):
    """(m, scale_factor) such that C_alpha = scale_factor * K."""
    if alpha > 1.0:
        m = n + 2.0 / (alpha - 1.0)
        return m, m + 2.0
    m = 2.0 / (1.0 - alpha) - n
    return m, m - 2.0


def max_renyi_power_integral(n: int, alpha: float, logdet_K: float, power: float) -> float:
    """log of the integral of f_alpha^power for the covariance-K Renyi maximiser (closed form).

    ``logdet_K`` is ln det K.  Uses the Beta integrals of (1 -/+ |y|^2)^e over R^n.
    """
    n = int(n)
    if not alpha > n / (n + 2.0) or _is_one(alpha):
        raise RegionError(f"alpha must exceed n/(n+2)={n / (n + 2.0):g} and differ from 1")
    m, c = _max_renyi_shape(n, alpha)
    log_det_c = n * math.log(c) + logdet_K
    half_n = 0.5 * n
    if alpha > 1.0:
        e = 1.0 / (alpha - 1.0)
        log_a = log_gamma(0.5 * m + 1.0) - log_gamma(0.5 * (m - n) + 1.0) - half_n * math.log(math.pi) - 0.5 * log_det_c
        pe = power * e
        log_int = half_n * math.log(math.pi) + log_gamma(pe + 1.0) - log_gamma(pe + 1.0 + half_n)
    else:
        e = 1.0 / (1.0 - alpha)
        log_a = log_gamma(0.5 * (m + n)) - log_gamma(0.5 * m) - half_n * math.log(math.pi) - 0.5 * log_det_c
        pe = power * e
        if not pe > half_n:
            raise ConditionError("the power integral of the maximiser diverges")
        log_int = half_n * math.log(math.pi) + log_gamma(pe - half_n) - log_gamma(pe)
    return power * log_a + 0.5 * log_det_c + log_int


def max_renyi_entropy(n: int, alpha: float, logdet_K: float) -> float:
    """h_alpha of the covariance-K Renyi-entropy maximiser, in closed form."""
    if _is_one(alpha):
        return 0.5 * n * math.log(TWO_PI_E) + 0.5 * logdet_K
    return max_renyi_power_integral(n, alpha, logdet_K, alpha) / (1.0 - alpha)
