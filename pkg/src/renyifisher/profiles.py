"""Radial ground states and the optimal constants r_{alpha,n}.

The ground state u solves

    u'' + (n-1)/t u' + u^(r-1) = u^(s-1),   u'(0) = 0,

with (r, s) = (2, 2/alpha) for alpha in (1, 2] (compact support) and
(r, s) = (2/alpha, 2) for alpha < 1 (exponential decay).  u(0) is found by
shooting: a start that is too large drives u through zero, one that is too
small makes u turn back up while still positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import kve

from .constants import ALPHA_ONE_WINDOW, ConstantRecord, r_closed_form_1d, r_sobolev, r_zero_region
from .densities import EllipticalDensity, RadialProfile
from .errors import ConvergenceError, DomainError, UnsupportedRegionError
from .quadrature import Decay, RadialSupport, integrate_radial, sphere_area

__all__ = [
    "ProfileSolution",
    "profile_region",
    "solve_profile",
    "compute_Ms",
    "profile_density",
    "ode_residual",
    "length_scale",
    "optimal_constant",
    "r_from_Ms",
]

COMPACT = "compact_support"
DECAY = "infinite_decay"

T_START = 1e-4  # series start, in units of the local length scale
MAX_BISECTIONS = 200
BISECTION_RTOL = 1e-14
MATCH_LEVEL = 1e-6  # decay case: ODE solution is replaced by its linear tail below this level * u0
TAIL_LEVEL = 1e-10
T_END = 400.0


def profile_region(n: int, alpha: float) -> str:
    """Case of the ground-state problem at (n, alpha); raises outside the solvable range."""
    n = _check_n(n)
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be a finite positive real, got {alpha!r}")
    if n >= 6:
        lo = max(1.0, 2.0 * (n - 2) / (n + 2))
        if lo < alpha <= 2.0:
            return COMPACT
        raise UnsupportedRegionError(f"no ground state for n={n} outside ({lo:g}, 2], got alpha={alpha:g}")
    if 1.0 < alpha <= 2.0:
        return COMPACT
    lo = 0.0 if n <= 2 else (n - 2) / n
    if lo < alpha < 1.0:
        return DECAY
    raise UnsupportedRegionError(f"no ground state for n={n}, alpha={alpha:g}")


def _check_n(n) -> int:
    if isinstance(n, bool) or int(n) != n or int(n) < 1:
        raise DomainError(f"dimension must be a positive integer, got {n!r}")
    return int(n)


def _exponents(case: str, alpha: float) -> tuple[float, float]:
    return (2.0, 2.0 / alpha) if case == COMPACT else (2.0 / alpha, 2.0)


@dataclass
class ProfileSolution:
    """Ground state u on [0, T] (compact case) or [0, inf) (decay case)."""

    n: int
    alpha: float
    case: str
    u0: float
    T: Optional[float]
    samples: np.ndarray  # columns t, u, u'
    Ms: float
    t_max: float
    meta: dict = field(default_factory=dict)
    _ode: object = field(default=None, repr=False)
    _t_match: float = field(default=math.inf, repr=False)
    _tail_log_A: float = field(default=0.0, repr=False)

    @property
    def t_start(self) -> float:
        return _t_start(self.r_exp, self.s_exp, self.u0)

    @property
    def r_exp(self) -> float:
        return _exponents(self.case, self.alpha)[0]

    @property
    def s_exp(self) -> float:
        return _exponents(self.case, self.alpha)[1]

    def _series(self, t):
        c = self.u0 ** (self.s_exp - 1.0) - self.u0 ** (self.r_exp - 1.0)
        return self.u0 + c * t * t / (2.0 * self.n), c * t / self.n

    def _tail(self, t):
        nu = 0.5 * (self.n - 2)
        lu = self._tail_log_A - nu * np.log(t) + np.log(kve(nu, t)) - t
        ratio = kve(nu + 1.0, t) / kve(nu, t)
        return lu, -ratio

    def log_u(self, t) -> np.ndarray:
        """ln u(t) (``-inf`` beyond the support)."""
        return self._eval(t)[0]

    def dlog_u(self, t) -> np.ndarray:
        """u'(t)/u(t)."""
        return self._eval(t)[1]

    def u(self, t) -> np.ndarray:
        return np.exp(self.log_u(t))

    def du(self, t) -> np.ndarray:
        lu, d = self._eval(t)
        out = np.zeros_like(lu)
        ok = np.isfinite(lu)
        out[ok] = np.exp(lu[ok]) * d[ok]
        return out

    def _eval(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        shape = t.shape
        t = t.ravel()
        lu = np.full(t.shape, -np.inf)
        dl = np.zeros(t.shape)
        near = t < self.t_start
        if np.any(near):
            u, up = self._series(t[near])
            lu[near] = np.log(u)
            dl[near] = up / u
        end = self.T if self.case == COMPACT else self._t_match
        mid = (~near) & (t <= end)
        if np.any(mid):
            y = self._ode.sol(t[mid])
            u = y[0]
            pos = u > 0
            lv = np.full(u.shape, -np.inf)
            dv = np.zeros(u.shape)
            lv[pos] = np.log(u[pos])
            dv[pos] = y[1][pos] / u[pos]
            lu[mid] = lv
            dl[mid] = dv
        if self.case == DECAY:
            far = t > end
            if np.any(far):
                lu[far], dl[far] = self._tail(t[far])
        return lu.reshape(shape), dl.reshape(shape)


def _rhs(n: int, r: float, s: float):
    pr, ps = r - 1.0, s - 1.0

    def power(u, p):
        return u if p == 1.0 else max(u, 0.0) ** p

    def f(t, y):
        u, up = y
        return [up, -(n - 1) / t * up - power(u, pr) + power(u, ps)]

    return f


def _t_start(r: float, s: float, u0: float) -> float:
    c = abs(u0 ** (s - 1.0) - u0 ** (r - 1.0))
    return T_START * min(1.0, math.sqrt(u0 / c)) if c > 0 else T_START


def _shoot(n, r, s, u0, rtol, dense=False, extra_events=(), stop_at_zero=True):
    c = u0 ** (s - 1.0) - u0 ** (r - 1.0)
    t0 = _t_start(r, s, u0)
    y0 = [u0 + c * t0 ** 2 / (2.0 * n), c * t0 / n]

    def hit_zero(t, y):
        return y[0]

    hit_zero.terminal = stop_at_zero
    hit_zero.direction = -1

    def turn(t, y):
        return y[1]

    turn.terminal = True
    turn.direction = 1
    events = [hit_zero, turn, *extra_events]
    # small opening steps keep the dense interpolant accurate next to the 1/t singularity
    first = t0 if dense else None
    return solve_ivp(_rhs(n, r, s), (t0, T_END), y0, method="DOP853", rtol=rtol,
                     atol=rtol * 1e-2 * u0, events=events, dense_output=dense, first_step=first)


def _classify(res) -> str:
    if res.t_events[0].size:
        return "over"
    if res.t_events[1].size:
        # a dip below zero shorter than one step leaves no sign change at the step ends
        return "over" if res.y_events[1][0][0] < 0.0 else "under"
    raise ConvergenceError("shooting run neither crossed zero nor turned back")


def _bracket(n, r, s) -> tuple[float, float, int]:
    lo = 1.0 + 1e-6
    if _classify(_shoot(n, r, s, lo, 1e-10)) != "under":
        raise ConvergenceError("u0 = 1 + eps does not undershoot; the shooting bracket is invalid")
    hi = 2.0
    steps = 0
    while _classify(_shoot(n, r, s, hi, 1e-10)) != "over":
        lo = hi
        hi *= 2.0
        steps += 1
        if hi > 1e12:
            raise ConvergenceError("no overshooting start value found")
    return lo, hi, steps


@lru_cache(maxsize=64)
def _solve_cached(n: int, alpha: float, rtol: float) -> ProfileSolution:
    case = profile_region(n, alpha)
    r, s = _exponents(case, alpha)
    lo, hi, _ = _bracket(n, r, s)
    bracket0 = (lo, hi)
    steps = 0
    while (hi - lo) > BISECTION_RTOL * hi:
        if steps >= MAX_BISECTIONS:
            raise ConvergenceError(f"bisection did not converge in {MAX_BISECTIONS} steps")
        mid = 0.5 * (lo + hi)
        # loose tolerance while the bracket is wide, tight near the end
        tol = min(1e-8, max(rtol, 1e-3 * (hi - lo) / hi))
        if _classify(_shoot(n, r, s, mid, tol)) == "over":
            hi = mid
        else:
            lo = mid
        steps += 1
    u0 = lo
    meta = {"bracket": bracket0, "bisection_steps": steps, "u0_hi": hi, "r": r, "s": s}

    if case == COMPACT:
        # near the double root at T a tiny zero crossing is rounding noise, so T is read off u' = 0
        res = _shoot(n, r, s, u0, rtol, dense=True, stop_at_zero=False)
        if not res.t_events[1].size:
            raise ConvergenceError("final compact-support run did not flatten out")
        T = float(res.t_events[1][0])
        sol = ProfileSolution(n, alpha, case, u0, T, np.empty((0, 3)), 0.0, T, meta, _ode=res)
        t = np.concatenate([[0.0], np.linspace(sol.t_start, T, 2001)])
    else:
        def small(t, y):
            return y[0] - MATCH_LEVEL * u0

        small.terminal = True
        small.direction = -1
        res = _shoot(n, r, s, u0, rtol, dense=True, extra_events=(small,))
        if not res.t_events[2].size:
            raise ConvergenceError("decay-case run turned back before reaching the tail level")
        tm = float(res.t_events[2][0])
        nu = 0.5 * (n - 2)
        log_A = math.log(MATCH_LEVEL * u0) + nu * math.log(tm) - math.log(kve(nu, tm)) + tm
        sol = ProfileSolution(n, alpha, case, u0, None, np.empty((0, 3)), 0.0, tm, meta,
                              _ode=res, _t_match=tm, _tail_log_A=log_A)
        # extend the sample grid until the tail falls below TAIL_LEVEL * u0
        t_max = tm
        while sol.log_u(t_max) > math.log(TAIL_LEVEL * u0):
            t_max += 1.0
        sol.t_max = t_max
        meta["t_match"] = tm
        t = np.concatenate([[0.0], np.linspace(sol.t_start, t_max, 2001)])
    sol.samples = np.column_stack([t, sol.u(t), sol.du(t)])
    sol.Ms = compute_Ms(sol)
    return sol


def solve_profile(n: int, alpha: float, rtol: float = 1e-12) -> ProfileSolution:
    """Ground state for (n, alpha) by shooting on u(0)."""
    return _solve_cached(_check_n(n), float(alpha), float(rtol))


def _tail_decay(sol: ProfileSolution, power: float) -> Decay:
    """Envelope u^power <= coef exp(-power t) for t >= t_match."""
    tm = sol._t_match
    log_coef = power * (sol.log_u(tm) + tm)
    grad = power * (1.0 + abs(sol.n - 1) / tm)
    return Decay("exponential", power, coef=math.exp(log_coef), r0=tm, grad_coef=grad)


def _breakpoints(sol: ProfileSolution) -> tuple:
    # geometric splits resolve the narrow core of strongly nonlinear cases
    end = sol.T if sol.case == COMPACT else sol._t_match
    pts = []
    b = length_scale(sol)
    while b < 0.5 * end:
        pts.append(b)
        b *= 4.0
    if sol.case == DECAY:
        pts.append(end)
    return tuple(pts)


def _radial_power_integral(sol: ProfileSolution, power: float, tol: float = 1e-13) -> float:
    def g(t):
        lu = sol.log_u(t)
        out = np.zeros_like(lu)
        ok = np.isfinite(lu)
        out[ok] = np.exp(power * lu[ok])
        return out

    if sol.case == COMPACT:
        support = RadialSupport(sol.T, breakpoints=_breakpoints(sol))
    else:
        support = RadialSupport(decay=_tail_decay(sol, 1.0), breakpoints=_breakpoints(sol))
    area = sphere_area(sol.n)
    scale = area * sol.u0 ** power * sol.T ** sol.n if sol.case == COMPACT else area * sol.u0 ** power
    res = integrate_radial(g, sol.n, support, tol * scale, q=power)
    return res.value


def compute_Ms(sol: ProfileSolution) -> float:
    """M_s = int_{R^n} u^s(|x|) dx with s = 2/alpha (compact case) or 2 (decay case)."""
    s = 2.0 / sol.alpha if sol.case == COMPACT else 2.0
    return _radial_power_integral(sol, s)


def length_scale(sol: ProfileSolution) -> float:
    """Distance over which u changes appreciably near the origin."""
    ex = max(sol.r_exp, sol.s_exp) - 2.0
    return min(1.0, sol.u0 ** (-0.5 * ex))


def ode_residual(sol: ProfileSolution) -> float:
    """max |u'' + (n-1)/t u' + u^(r-1) - u^(s-1)| over the interior samples.

    u'' is a five-point difference of the integrator's dense u'.
    """
    h = 1e-4 * length_scale(sol)
    end = sol.T if sol.case == COMPACT else sol._t_match
    t = sol.samples[:, 0]
    t = t[(t >= 10 * sol.t_start) & (t < end - 3 * h)]

    def dup(k):
        return sol._ode.sol(t + k * h)[1]

    upp = (-dup(2) + 8.0 * dup(1) - 8.0 * dup(-1) + dup(-2)) / (12.0 * h)
    u, up = sol._ode.sol(t)
    uc = np.maximum(u, 0.0)

    def power(p):
        # same convention as the integrator: linear terms are not clipped
        return u if p == 1.0 else uc ** p

    res = upp + (sol.n - 1) / t * up + power(sol.r_exp - 1.0) - power(sol.s_exp - 1.0)
    return float(np.max(np.abs(res)))


def profile_density(sol: ProfileSolution, b: float = 1.0, c=0.0) -> EllipticalDensity:
    """Density proportional to u^(2/alpha)(|b x + c|), normalised on R^n."""
    b = float(b)
    if not b > 0:
        raise DomainError("b must be positive")
    k = 2.0 / sol.alpha
    log_Z = math.log(_radial_power_integral(sol, k))

    def log_phi(t):
        return k * sol.log_u(t) - log_Z

    def dlog_phi(t):
        return k * sol.dlog_u(t)

    if sol.case == COMPACT:
        prof = RadialProfile(log_phi, dlog_phi, radius=sol.T, breakpoints=_breakpoints(sol))
    else:
        d = _tail_decay(sol, k)
        d = Decay("exponential", k, coef=d.coef / math.exp(log_Z), r0=d.r0, grad_coef=d.grad_coef)
        prof = RadialProfile(log_phi, dlog_phi, decay=d, breakpoints=_breakpoints(sol))
    n = sol.n
    c = np.broadcast_to(np.asarray(c, dtype=float), (n,))
    return EllipticalDensity(n, prof, np.eye(n) / b, -c / b, "profile_density",
                             {"n": n, "alpha": sol.alpha, "b": b,
                              "c": float(c[0]) if n == 1 else tuple(float(v) for v in c)})


def r_from_Ms(n: int, alpha: float, Ms: float) -> float:
    """Optimal constant assembled from the ground-state integral M_s."""
    if alpha > 1.0:
        if n == 2:
            return 4.0 * (alpha - 1.0) * alpha ** ((2.0 * alpha - 1.0) / (1.0 - alpha)) * Ms
        k = n * (alpha - 1.0)
        return (4.0 * k / (alpha * (k + 2.0))) * (2.0 / (k + 2.0)) ** (2.0 / k) * Ms ** (2.0 / n)
    if n == 2:
        return 4.0 * (1.0 - alpha) * alpha ** ((3.0 * alpha - 2.0) / (1.0 - alpha)) * Ms
    k = n * (1.0 - alpha)
    return (2.0 * k / alpha) * ((2.0 - k) / 2.0) ** ((2.0 * alpha - k) / k) * Ms ** (2.0 / n)


def _ode_record(n: int, alpha: float, route: str) -> ConstantRecord:
    sol = solve_profile(n, alpha)
    return ConstantRecord(alpha, n, r_from_Ms(n, alpha, sol.Ms), route,
                          meta={"u0": sol.u0, "T": sol.T, "Ms": sol.Ms, "case": sol.case})


def optimal_constant(n: int, alpha: float, route: Optional[str] = None) -> ConstantRecord:
    """r_{alpha,n} for every (n, alpha) with a known value.

    ``route="ode"`` forces the ground-state route in one dimension, which
    otherwise uses the closed form.
    """
    n = _check_n(n)
    alpha = float(alpha)
    if not alpha >= 0 or math.isnan(alpha):
        raise DomainError(f"alpha must be non-negative, got {alpha!r}")
    if n == 1:
        if route == "ode":
            return _ode_record(1, alpha, "ode_profile")
        return r_closed_form_1d(alpha)
    if abs(alpha - 1.0) < ALPHA_ONE_WINDOW:
        return ConstantRecord(1.0, n, 2.0 * math.pi * math.e * n, "shannon_limit")
    if n >= 3:
        crit = (n - 2) / n
        if abs(alpha - crit) <= 1e-12 * crit:
            return r_sobolev(n)
        if 0.0 < alpha < crit:
            return r_zero_region(n, alpha)
    try:
        profile_region(n, alpha)
    except UnsupportedRegionError as exc:
        raise UnsupportedRegionError(f"r_(alpha,n) is not available at n={n}, alpha={alpha:g}") from exc
    return _ode_record(n, alpha, "ode_profile")
