"""Numerical checks of the Renyi and Tsallis isoperimetric and Cramer-Rao inequalities.

Each check returns a :class:`VerdictReport`.  Tolerances are fixed per
kind of comparison:

* closed form against quadrature      1e-6 relative
* quadrature against quadrature       1e-5 relative
* first time derivatives (differences) 1e-3 relative
* second time derivatives             5e-2 relative
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import densities as D
from . import functionals as F
from .constants import (
    ALPHA_ONE_WINDOW,
    appendix_b_bound,
    cm_bound_coefficients,
    max_renyi_entropy,
    max_renyi_power_integral,
    omega_bounds_1d,
)
from .densities import Density
from .errors import ConditionError, ConsistencyError, DomainError, NoiseError, RegionError
from .heatflow import evolve, time_derivative, to_grid
from .profiles import optimal_constant
from .reports import VerdictReport, make_report

__all__ = [
    "VerdictReport",
    "BellValues",
    "TOL_CLOSED_FORM",
    "TOL_QUADRATURE",
    "TOL_FD_FIRST",
    "TOL_FD_SECOND",
    "isoperimetric_check",
    "cramer_rao_renyi",
    "cramer_rao_omega",
    "cramer_rao_weighted",
    "moment_entropy_check",
    "cramer_rao_tsallis",
    "cramer_rao_matrix",
    "bell_polynomials",
    "cm_bound_check",
    "appendix_b_check",
    "identity_chain",
]

TOL_CLOSED_FORM = 1e-6
TOL_QUADRATURE = 1e-5
TOL_FD_FIRST = 1e-3
TOL_FD_SECOND = 5e-2
TOL_PSD = 1e-8
CONSISTENCY_GATE = 1e-8
RICHARDSON_LIMIT = 0.1
CM_UPPER_ALPHA = 1.5 + math.sqrt(2.0)


def _is_one(a: float) -> bool:
    return abs(a - 1.0) < ALPHA_ONE_WINDOW


def _close(a: float, b: float, rel: float = 1e-9) -> bool:
    return abs(a - b) <= rel * max(abs(a), abs(b), 1.0)


def _param(d: Density, key: str, default=None):
    return getattr(d, "params", {}).get(key, default)


def _centered(d: Density) -> bool:
    c = getattr(d, "center", None)
    return c is not None and bool(np.allclose(c, 0.0, atol=1e-12))


def _family(d: Density) -> str:
    return getattr(d, "family", "grid_1d")


def _describe(d: Density) -> dict:
    out = {"family": _family(d), "n": d.dim}
    for k, v in getattr(d, "params", {}).items():
        out[k] = v
    return out


def _is_extremizer(d: Density, alpha: float) -> bool:
    """Whether d belongs to the equality family of N_alpha I_alpha >= r_{alpha,n}."""
    fam = _family(d)
    n = d.dim
    if _is_one(alpha):
        return fam in ("gaussian", "max_renyi", "G_nd") and (fam == "gaussian" or _param(d, "alpha") == 1.0)
    if n == 1:
        if alpha > 1.0:
            return fam == "cos_power" and _close(_param(d, "alpha", -1), alpha)
        if fam == "cosh_power":
            return _close(_param(d, "alpha", -1), alpha)
        if fam == "sech_power":
            return _close(_param(d, "k", -1), 2.0 / (1.0 - alpha))
        return False
    if fam == "profile_density":
        return _param(d, "n") == n and _close(_param(d, "alpha", -1), alpha)
    if fam == "sobolev_extremal" and n >= 3:
        return _close(alpha, (n - 2.0) / n)
    return False


# --------------------------------------------------------------------------
def isoperimetric_check(d: Density, alpha: float) -> VerdictReport:
    """N_alpha I_alpha >= r_{alpha,n}."""
    alpha = float(alpha)
    rec = optimal_constant(d.dim, alpha)
    lhs = F.renyi_power(d, alpha) * F.renyi_fisher(d, alpha)
    rhs = rec.value
    rel = TOL_CLOSED_FORM if rec.route in ("closed_form_1d", "sobolev", "shannon_limit") else TOL_QUADRATURE
    tol = rel * max(abs(rhs), abs(lhs) if rhs == 0 else 0.0)
    return make_report(
        "isoperimetric", {"alpha": alpha, **_describe(d)}, lhs, rhs, lhs - rhs, tol,
        _is_extremizer(d, alpha), anchor="Renyi entropic isoperimetric inequality",
        details={"route": rec.route, "relative_tolerance": rel},
    )


def _covariance_entropy(n: int, alpha: float, K: np.ndarray) -> float:
    """h_alpha of the covariance-K maximiser: quadrature, gated by the closed form."""
    logdet = float(np.linalg.slogdet(K)[1])
    quad = F.renyi_entropy(D.max_renyi(alpha, K, n), alpha)
    closed = max_renyi_entropy(n, alpha, logdet)
    if abs(quad - closed) > CONSISTENCY_GATE * max(1.0, abs(closed)):
        raise ConsistencyError(
            f"maximum-entropy value disagrees between quadrature ({quad!r}) and closed form ({closed!r})"
        )
    return quad


def _covariance(d: Density) -> np.ndarray:
    K = np.atleast_2d(np.asarray(d.covariance(), dtype=float))
    if not np.all(np.isfinite(K)):
        raise ConditionError("the covariance is not finite")
    return K


def cramer_rao_renyi(d: Density, alpha: float) -> VerdictReport:
    """exp(2 h_alpha(K)/n) I_alpha(d) >= r_{alpha,n} with K the covariance of d."""
    alpha = float(alpha)
    n = d.dim
    if not alpha > n / (n + 2.0):
        raise RegionError(f"alpha must exceed n/(n+2)={n / (n + 2.0):g}")
    K = _covariance(d)
    h = _covariance_entropy(n, alpha, K)
    rhs = optimal_constant(n, alpha).value
    lhs = math.exp(2.0 * h / n) * F.renyi_fisher(d, alpha)
    equality = _is_one(alpha) and _family(d) == "gaussian"
    return make_report(
        "cramer_rao_renyi", {"alpha": alpha, **_describe(d)}, lhs, rhs, lhs - rhs,
        TOL_CLOSED_FORM * rhs, equality, anchor="Renyi-Fisher Cramer-Rao inequality",
        details={"h_alpha_of_covariance": h, "covariance": K},
    )


def cramer_rao_omega(d: Density, alpha: float) -> VerdictReport:
    """One-dimensional form I_alpha(d) Var(d) >= omega(alpha).

    omega is computed from its closed form and, independently, as
    r_{alpha,1} exp(-2 h_alpha(K=1)); the two must agree.
    """
    alpha = float(alpha)
    if d.dim != 1:
        raise DomainError("the omega form is one-dimensional")
    omega = omega_bounds_1d(alpha)
    via_r = optimal_constant(1, alpha).value * math.exp(-2.0 * max_renyi_entropy(1, alpha, 0.0))
    if abs(omega - via_r) > CONSISTENCY_GATE * omega:
        raise ConsistencyError(f"omega closed form {omega!r} disagrees with r exp(-2h) = {via_r!r}")
    K = float(_covariance(d)[0, 0])
    lhs = F.renyi_fisher(d, alpha) * K
    equality = _is_one(alpha) and _family(d) == "gaussian"
    return make_report(
        "cramer_rao_omega", {"alpha": alpha, **_describe(d)}, lhs, omega, lhs - omega,
        TOL_CLOSED_FORM * omega, equality, anchor="one-dimensional Renyi-Fisher Cramer-Rao bound",
        details={"variance": K, "omega_via_r": via_r},
    )


def _barenblatt_sigma2(n: int, alpha: float) -> tuple[float, float]:
    """Second moment of the normalised Barenblatt profile by quadrature and closed form."""
    B = D.barenblatt(alpha, n)
    quad = B.second_moment()
    C = B.params["C"]
    if alpha > 1.0:
        closed = n * C / (2.0 / (alpha - 1.0) + 2.0 + n)
    else:
        closed = n * C / (2.0 / (1.0 - alpha) - n - 2.0)
    return quad, closed


def _weighted_region(n: int, alpha: float):
    if not alpha > n / (n + 2.0):
        raise RegionError(f"alpha must exceed n/(n+2)={n / (n + 2.0):g}")


def _is_barenblatt(d: Density, alpha: float) -> bool:
    return _family(d) == "barenblatt" and _close(_param(d, "alpha", -1), alpha) and _centered(d)


def cramer_rao_weighted(d: Density, alpha: float) -> VerdictReport:
    """Itilde_alpha(d) >= (sigma2(B)/sigma2(d))^(n(alpha-1)/2+1) * 2 alpha n/|alpha-1|.

    The right side is the Barenblatt-normalised bound, which is attained by
    the Barenblatt profile.  The variant with sigma2(B) replaced by n is
    reported as ``rhs_as_printed``.
    """
    alpha = float(alpha)
    n = d.dim
    _weighted_region(n, alpha)
    if _is_one(alpha):
        raise RegionError("the weighted bound needs alpha != 1")
    sB, sB_closed = _barenblatt_sigma2(n, alpha)
    if abs(sB - sB_closed) > CONSISTENCY_GATE * sB_closed:
        raise ConsistencyError("Barenblatt second moment: quadrature and closed form disagree")
    s2 = d.second_moment()
    e = 0.5 * n * (alpha - 1.0) + 1.0
    base = 2.0 * alpha * n / abs(alpha - 1.0)
    rhs = (sB / s2) ** e * base
    printed = (n / s2) ** e * base
    lhs = F.weighted_fisher(d, alpha)
    return make_report(
        "cramer_rao_weighted", {"alpha": alpha, **_describe(d), "rhs_as_printed": printed},
        lhs, rhs, lhs - rhs, TOL_CLOSED_FORM * rhs, _is_barenblatt(d, alpha),
        anchor="weighted Cramer-Rao (Barenblatt extremal)",
        details={"sigma2": s2, "sigma2_barenblatt": sB, "exponent": e},
    )


def moment_entropy_check(d: Density, alpha: float) -> VerdictReport:
    """(sigma2(d)/sigma2(B))^(n(alpha-1)/2+1) >= Ntilde_alpha(d)/Ntilde_alpha(B)."""
    alpha = float(alpha)
    n = d.dim
    _weighted_region(n, alpha)
    B = D.barenblatt(alpha, n) if not _is_one(alpha) else D.gaussian(n, 1.0)
    e = 0.5 * n * (alpha - 1.0) + 1.0
    lhs = (d.second_moment() / B.second_moment()) ** e
    rhs = F.alpha_th_power(d, alpha) / F.alpha_th_power(B, alpha)
    equality = _is_barenblatt(d, alpha) or (_is_one(alpha) and _family(d) == "gaussian" and _centered(d))
    return make_report(
        "moment_entropy", {"alpha": alpha, **_describe(d)}, lhs, rhs, lhs - rhs,
        TOL_QUADRATURE * rhs, equality, anchor="moment-entropy inequality",
        details={"exponent": e},
    )


def cramer_rao_tsallis(d: Density, alpha: float) -> VerdictReport:
    """Tsallis-Fisher Cramer-Rao inequality against the G profile.

    n = 1: sigma2^(1/2) Ihat_alpha^(1/(alpha+1)) compared with its value at G.
    n >= 3: (sigma2(d)/sigma2(G^n))^((alpha-1)n/2+1) >= Ihat(G^n)/Ihat(d).
    """
    alpha = float(alpha)
    n = d.dim
    if n == 1:
        if not alpha > 0:
            raise RegionError("alpha must be positive")
        G = D.G_1d(alpha)
        lhs = math.sqrt(d.second_moment()) * F.tsallis_fisher(d, alpha) ** (1.0 / (alpha + 1.0))
        rhs = math.sqrt(G.second_moment()) * F.tsallis_fisher(G, alpha) ** (1.0 / (alpha + 1.0))
        fam_ok = _family(d) == "G_1d"
    elif n >= 3:
        if not alpha > (n - 2.0) / n:
            raise RegionError(f"alpha must exceed (n-2)/n={(n - 2.0) / n:g}")
        G = D.G_nd(n, alpha)
        e = 0.5 * (alpha - 1.0) * n + 1.0
        lhs = (d.second_moment() / G.second_moment()) ** e
        rhs = F.tsallis_fisher(G, alpha) / F.tsallis_fisher(d, alpha)
        fam_ok = _family(d) == "G_nd"
    else:
        raise RegionError("the Tsallis-Fisher Cramer-Rao inequality is stated for n = 1 and n >= 3")
    equality = fam_ok and _close(_param(d, "alpha", -1), alpha) and _centered(d)
    return make_report(
        "cramer_rao_tsallis", {"alpha": alpha, **_describe(d)}, lhs, rhs, lhs - rhs,
        TOL_CLOSED_FORM * rhs, equality, anchor="Tsallis-Fisher Cramer-Rao inequality",
    )


def cramer_rao_matrix(d: Density, alpha: float) -> VerdictReport:
    """Ihat_alpha(d) - 4 alpha (int p^((alpha+1)/2))^2/(alpha+1)^2 K^-1 is positive semidefinite.

    The margin is the smallest eigenvalue divided by the trace of the Fisher matrix.
    """
    alpha = float(alpha)
    n = d.dim
    if not alpha > (n - 2.0) / (n + 2.0):
        raise RegionError(f"alpha must exceed (n-2)/(n+2)={(n - 2.0) / (n + 2.0):g}")
    K = _covariance(d)
    if np.linalg.cond(K) > 1e12:
        raise ConditionError("the covariance matrix is singular")
    lam = 0.5 * (alpha + 1.0)
    Ihat = F.tsallis_fisher_matrix(d, alpha)
    P = F.power_integral(d, lam)
    diff = Ihat - 4.0 * alpha * P * P / (alpha + 1.0) ** 2 * np.linalg.inv(K)
    diff = 0.5 * (diff + diff.T)
    eig = np.linalg.eigvalsh(diff)
    tr = float(np.trace(Ihat))
    margin = float(eig[0]) / tr
    max_abs = float(np.max(np.abs(eig))) / tr
    equality = (_family(d) == "g_lambda" and _close(_param(d, "lambda", -1), lam)) or (
        _is_one(alpha) and _family(d) == "gaussian")
    tol = TOL_CLOSED_FORM if equality else TOL_PSD
    rep = make_report(
        "cramer_rao_matrix", {"alpha": alpha, **_describe(d)},
        {"eigenvalues": eig, "trace": tr}, 0.0, margin, tol, equality,
        anchor="matrix Tsallis-Fisher Cramer-Rao inequality",
        details={"max_abs_eigenvalue_over_trace": max_abs},
    )
    if equality and max_abs > tol:
        rep.passed = False
    return rep


# --------------------------------------------------------------------------
@dataclass(frozen=True)
class BellValues:
    order: int
    inputs: tuple
    values: tuple  # B_1 .. B_m

    def __post_init__(self):
        if self.order != len(self.values) or self.order != len(self.inputs):
            raise DomainError("order must match the number of inputs and values")


def bell_polynomials(x: Sequence) -> BellValues:
    """Complete exponential Bell polynomials B_1..B_m at (x_1, ..., x_m).

    Integer inputs give exact integers.
    """
    xs = tuple(x)
    m = len(xs)
    if m < 1:
        raise DomainError("at least one argument is needed")
    B = [1]
    for k in range(m):
        B.append(sum(math.comb(k, i) * B[k - i] * xs[i] for i in range(k + 1)))
    return BellValues(m, xs, tuple(B[1:]))


# --------------------------------------------------------------------------
def _cm_beta(alpha: float) -> float:
    if _is_one(alpha):
        return 1.0
    if 1.0 / 3.0 < alpha < 1.0:
        return 0.5 * (alpha + 1.0)
    if 1.0 < alpha <= CM_UPPER_ALPHA:
        return 0.5
    raise RegionError(f"no known concavity regime for alpha={alpha:g}")


def _noise_guard(est, what: str):
    if est.relative_gap > RICHARDSON_LIMIT:
        raise NoiseError(f"{what}: step-halving estimates disagree by {est.relative_gap:.1%}")


def cm_bound_check(d: Density, alpha: float, beta: Optional[float] = None, j: int = 1,
                   t0: float = 0.5, h: Optional[float] = None) -> VerdictReport:
    """(-1)^(j-1) d^j h_alpha(X_t)/dt^j at t0 against the complete-monotonicity lower bound.

    beta defaults to (alpha+1)/2 for 1/3 < alpha < 1, 1/2 for
    1 < alpha <= 3/2 + sqrt 2, and 1 at alpha = 1.  The variance enters as
    Var(X) + t0.
    """
    alpha = float(alpha)
    if d.dim != 1:
        raise DomainError("the complete-monotonicity bound is one-dimensional")
    default_beta = _cm_beta(alpha)
    beta = default_beta if beta is None else float(beta)
    if j not in (1, 2):
        raise DomainError("only j = 1 and j = 2 are supported")
    K = float(_covariance(d)[0, 0])
    est = time_derivative(d, t0, lambda g: F.renyi_entropy(g, alpha), order=j, h=h)
    _noise_guard(est, f"d^{j} h_alpha/dt^{j}")
    lhs = (-1.0) ** (j - 1) * est.value
    rhs = cm_bound_coefficients(alpha, beta, j, t0, K)
    rel = TOL_FD_FIRST if j == 1 else TOL_FD_SECOND
    equality = _is_one(alpha) and _family(d) == "gaussian"
    return make_report(
        "cm_bound", {"alpha": alpha, "beta": beta, "j": j, "t0": t0, **_describe(d)},
        lhs, rhs, lhs - rhs, rel * max(abs(lhs), abs(rhs)), equality,
        anchor="complete-monotonicity bound for Renyi entropy",
        details={"variance": K, "richardson_gap": est.richardson_gap, "step": est.step,
                 "beta_in_known_regime": _close(beta, default_beta)},
    )


def _h2_of_covariance(n: int, K: float) -> float:
    """Tsallis entropy of order 2 of the variance-K maximiser of h_2 (n = 1 here)."""
    return 1.0 - math.exp(max_renyi_power_integral(n, 2.0, n * math.log(K), 2.0))


def appendix_b_check(d: Density, t0: float, j: int = 1, h: Optional[float] = None) -> VerdictReport:
    """Log-Tsallis Fisher bound 1/2 I2script(X_t0) >= bound(Var X + t0), plus the Ihat_2 sign chain.

    The bound is computed twice: from its one-dimensional closed form and
    from r_{2,1} with the Tsallis entropy of the maximiser.
    """
    if d.dim != 1:
        raise DomainError("this check is one-dimensional")
    if j != 1:
        raise DomainError("only j = 1 is implemented")
    t0 = float(t0)
    g = to_grid(d, h)
    gt = evolve(g, t0) if t0 > 0 else g
    p2 = F.power_integral(gt, 2.0)
    if p2 >= 1.0:
        raise ConditionError(f"int p^2 = {p2:.6g} >= 1 at t0")
    K = float(_covariance(d)[0, 0])
    lhs = 0.5 * F.log_tsallis2_fisher(gt)
    rhs = appendix_b_bound(K, t0, 1)
    hh = _h2_of_covariance(1, K + t0)
    if not hh > 0:
        raise ConditionError("Tsallis entropy of the maximiser is not positive")
    r2 = optimal_constant(1, 2.0).value
    via_r = r2 * (1.0 - hh) ** 3 / (2.0 * hh)
    if abs(via_r - rhs) > CONSISTENCY_GATE * rhs:
        raise ConsistencyError(f"log-Tsallis bound: closed form {rhs!r} vs r-route {via_r!r}")
    signs = []
    for k in (1, 2, 3):
        est = time_derivative(g, t0, lambda x: F.tsallis_fisher(x, 2.0), order=k)
        signs.append((-1.0) ** k * est.value)
    return make_report(
        "appendix_b", {"t0": t0, "j": j, **_describe(d)}, lhs, rhs, lhs - rhs,
        TOL_QUADRATURE * rhs, False, anchor="log-Tsallis Fisher complete-monotonicity bound",
        details={"variance": K, "int_p2": p2, "bound_via_r": via_r,
                 "ihat2_sign_chain": signs, "sign_chain_ok": all(s >= 0 for s in signs)},
    )


def identity_chain(d: Density, alpha: float) -> dict:
    """Ihat_alpha, I_alpha int p^alpha, alpha Phi and alpha phi^(alpha+1) (all equal)."""
    alpha = float(alpha)
    lam = 0.5 * (alpha + 1.0)
    phi, Phi = F.phi_functionals(d, lam)
    return {
        "Ihat": F.tsallis_fisher(d, alpha),
        "I_times_P": F.renyi_fisher(d, alpha) * F.power_integral(d, alpha),
        "alpha_Phi": alpha * Phi,
        "alpha_phi_pow": alpha * phi ** (alpha + 1.0),
    }
