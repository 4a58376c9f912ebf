"""Information functionals of a density.

All functionals are assembled from three density primitives: the power
integral P(a) = int p^a, the gradient integral G(b) = int |grad p|^2 p^(b-2)
(and its matrix form), and the Shannon entropy.  With these,

    h_alpha   = ln P(alpha) / (1 - alpha)
    I_alpha   = alpha G(alpha) / P(alpha)
    Ihat      = alpha G(alpha)
    Itilde    = alpha^2 G(2 alpha - 1) / P(alpha)
    Phi_{2,l} = G(2 l - 1)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from .densities import P_FLOOR, Density, EllipticalDensity, GridDensity, RadialProfile, fd_gradient
from .errors import ConditionError, DivergenceError, DomainError
from .quadrature import integrate_samples

__all__ = [
    "FunctionalValue",
    "KINDS",
    "renyi_entropy",
    "renyi_power",
    "alpha_th_power",
    "renyi_fisher",
    "fisher_information",
    "tsallis_fisher",
    "tsallis_fisher_matrix",
    "lambda_fisher_matrix",
    "weighted_fisher",
    "tsallis_entropy",
    "log_tsallis2_fisher",
    "phi_functionals",
    "substitution_identity_check",
    "power_integral",
    "evaluate_all",
]

ALPHA_ONE_WINDOW = 1e-9

KINDS = (
    "h_alpha",
    "N_alpha",
    "Ntilde_alpha",
    "h_hat_alpha",
    "I",
    "I_alpha",
    "I_hat_alpha",
    "I_hat_matrix",
    "J_lambda",
    "I_tilde_alpha",
    "script_I2",
    "phi",
    "Phi",
    "sigma2",
)


@dataclass(frozen=True)
class FunctionalValue:
    kind: str
    alpha_or_lambda: float
    value: Union[float, np.ndarray]
    error_estimate: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown functional kind {self.kind!r}")

    def to_dict(self) -> dict:
        v = self.value
        if isinstance(v, np.ndarray):
            v = v.tolist()
        return {"kind": self.kind, "alpha_or_lambda": self.alpha_or_lambda, "value": v,
                "error_estimate": self.error_estimate}


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > 0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be a finite positive real, got {alpha!r}")
    return alpha


def _is_one(alpha: float) -> bool:
    return abs(alpha - 1.0) < ALPHA_ONE_WINDOW


def power_integral(d: Density, alpha: float) -> float:
    """int p^alpha."""
    v = d.power_integral(_check_alpha(alpha))
    if not (v > 0 and math.isfinite(v)):
        raise DivergenceError(f"int p^{alpha:g} is not a finite positive number")
    return v


def renyi_entropy(d: Density, alpha: float) -> float:
    """h_alpha = ln(int p^alpha)/(1 - alpha); Shannon entropy at alpha = 1."""
    alpha = _check_alpha(alpha)
    if _is_one(alpha):
        return d.shannon_entropy()
    lp = d.log_power_integral(alpha)
    if not math.isfinite(lp):
        raise DivergenceError(f"int p^{alpha:g} diverges")
    return lp / (1.0 - alpha)


def renyi_power(d: Density, alpha: float) -> float:
    """N_alpha = exp(2 h_alpha / n)."""
    return math.exp(2.0 * renyi_entropy(d, alpha) / d.dim)


def alpha_th_power(d: Density, alpha: float) -> float:
    """Ntilde_alpha = exp((2/n + alpha - 1) h_alpha)."""
    alpha = _check_alpha(alpha)
    return math.exp((2.0 / d.dim + alpha - 1.0) * renyi_entropy(d, alpha))


def _gradient_integral(d: Density, b: float) -> float:
    v = d.gradient_integral(b)
    if not (v >= 0 and math.isfinite(v)):
        raise DivergenceError(f"gradient integral with weight p^{b - 2:g} diverges")
    return v


def fisher_information(d: Density) -> float:
    """Classical Fisher information int |grad p|^2 / p."""
    return _gradient_integral(d, 1.0)


def renyi_fisher(d: Density, alpha: float) -> float:
    """I_alpha = alpha int |grad p|^2 p^(alpha-2) / int p^alpha."""
    alpha = _check_alpha(alpha)
    if _is_one(alpha):
        return fisher_information(d)
    return alpha * _gradient_integral(d, alpha) / power_integral(d, alpha)


def tsallis_fisher(d: Density, alpha: float) -> float:
    """Ihat_alpha = alpha int |grad p|^2 p^(alpha-2)."""
    alpha = _check_alpha(alpha)
    return alpha * _gradient_integral(d, alpha)


def tsallis_fisher_matrix(d: Density, alpha: float) -> np.ndarray:
    """alpha int grad p grad p^T p^(alpha-2), symmetrised."""
    alpha = _check_alpha(alpha)
    M = alpha * np.asarray(d.gradient_matrix(alpha), dtype=float)
    if not np.all(np.isfinite(M)):
        raise DivergenceError("matrix Fisher information diverges")
    return 0.5 * (M + M.T)


def lambda_fisher_matrix(d: Density, lam: float) -> np.ndarray:
    """J_lambda = int grad p grad p^T p^(2 lambda - 3) / int p^lambda."""
    lam = _check_alpha(lam)
    M = np.asarray(d.gradient_matrix(2.0 * lam - 1.0), dtype=float) / power_integral(d, lam)
    return 0.5 * (M + M.T)


def weighted_fisher(d: Density, alpha: float) -> float:
    """Itilde_alpha = alpha^2 int |grad p|^2 p^(2 alpha - 3) / int p^alpha."""
    alpha = _check_alpha(alpha)
    if _is_one(alpha):
        return fisher_information(d)
    return alpha * alpha * _gradient_integral(d, 2.0 * alpha - 1.0) / power_integral(d, alpha)


def tsallis_entropy(d: Density, alpha: float) -> float:
    """hhat_alpha = (int p^alpha - 1)/(1 - alpha); Shannon entropy at alpha = 1."""
    alpha = _check_alpha(alpha)
    if _is_one(alpha):
        return d.shannon_entropy()
    return (power_integral(d, alpha) - 1.0) / (1.0 - alpha)


def log_tsallis2_fisher(d: Density) -> float:
    """script I_2 = Ihat_2 / hhat_2, defined when int p^2 < 1."""
    p2 = power_integral(d, 2.0)
    if p2 >= 1.0:
        raise ConditionError(f"int p^2 = {p2:.6g} >= 1; the log-Tsallis Fisher information needs int p^2 < 1")
    return tsallis_fisher(d, 2.0) / (1.0 - p2)


def phi_functionals(d: Density, lam: float) -> tuple[float, float]:
    """(phi_{2,lam}, Phi_{2,lam}) with Phi = int |p^(lam-2) grad p|^2 p and phi = Phi^(1/(2 lam)) (n = 1)."""
    lam = float(lam)
    if not lam > 1.0 / 3.0:
        raise DomainError(f"lambda must exceed 1/3, got {lam!r}")
    Phi = _gradient_integral(d, 2.0 * lam - 1.0)
    return Phi ** (1.0 / (2.0 * lam)), Phi


def substitution_identity_check(d: Density, alpha: float) -> float:
    """|I_alpha(p) - (4/alpha) int |grad f|^2 / int f^2| with f = p^(alpha/2).

    The right side is integrated from f and grad f directly, not from the
    density primitives.
    """
    alpha = _check_alpha(alpha)
    lhs = renyi_fisher(d, alpha)
    if isinstance(d, EllipticalDensity):
        prof = d.profile
        half = 0.5 * alpha
        dec = prof.decay
        if dec is not None:
            rate = dec.rate / math.sqrt(half) if dec.kind == "gaussian" else dec.rate * half
            dec = replace(dec, rate=rate, coef=dec.coef ** half, grad_coef=dec.grad_coef * half)
        f_prof = RadialProfile(
            lambda r: half * prof.log_phi(r),
            lambda r: half * prof.dlog_phi(r),
            radius=prof.radius,
            decay=dec,
            edge_exponent=None if prof.edge_exponent is None else half * prof.edge_exponent,
            breakpoints=prof.breakpoints,
        )
        f_d = EllipticalDensity(d.dim, f_prof, d.L, d.center, "unnormalised", {})
        # int f^2 and int |grad f|^2 of the unnormalised f = phi^(a/2)(|L^-1 x|) |det L|^(-a/2)
        scale = math.exp(-alpha * d.log_det)
        f2 = f_d.profile_power_integral(2.0).value * d.abs_det * scale
        gf2 = (f_d.profile_gradient_integral(2.0).value * d.abs_det * scale
               * d._metric_trace() / d.dim)
    elif isinstance(d, GridDensity):
        f = np.where(d.p > P_FLOOR, d.p, 0.0) ** (0.5 * alpha)
        df = fd_gradient(f, d.h)
        f2 = integrate_samples(f * f, d.h)
        gf2 = integrate_samples(df * df, d.h)
    else:
        raise DomainError("unsupported density type")
    rhs = (4.0 / alpha) * gf2 / f2
    return abs(lhs - rhs)


def _second_moment(d: Density) -> float:
    return d.second_moment()


def evaluate_all(d: Density, alpha: float) -> list[FunctionalValue]:
    """Every scalar functional of ``d`` at order ``alpha`` (entries that diverge are skipped)."""
    alpha = _check_alpha(alpha)
    out: list[FunctionalValue] = []

    def add(kind, fn, param=alpha):
        try:
            v = fn()
        except (DivergenceError, ConditionError, DomainError):
            return
        out.append(FunctionalValue(kind, param, v, 0.0))

    add("h_alpha", lambda: renyi_entropy(d, alpha))
    add("N_alpha", lambda: renyi_power(d, alpha))
    add("Ntilde_alpha", lambda: alpha_th_power(d, alpha))
    add("h_hat_alpha", lambda: tsallis_entropy(d, alpha))
    add("I", lambda: fisher_information(d), 1.0)
    add("I_alpha", lambda: renyi_fisher(d, alpha))
    add("I_hat_alpha", lambda: tsallis_fisher(d, alpha))
    add("I_hat_matrix", lambda: tsallis_fisher_matrix(d, alpha))
    add("J_lambda", lambda: lambda_fisher_matrix(d, alpha))
    add("I_tilde_alpha", lambda: weighted_fisher(d, alpha))
    add("script_I2", lambda: log_tsallis2_fisher(d), 2.0)
    lam = 0.5 * (alpha + 1.0)
    if lam > 1.0 / 3.0:
        add("phi", lambda: phi_functionals(d, lam)[0], lam)
        add("Phi", lambda: phi_functionals(d, lam)[1], lam)
    add("sigma2", lambda: _second_moment(d), 0.0)
    return out
