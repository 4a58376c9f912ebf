"""Heat flow X_t = X + sqrt(t) Z for one-dimensional densities.

p_t is the trapezoid sum of p against the N(0, t) kernel on the sample
grid, i.e. the exact heat flow of the weighted Dirac comb.  For smooth p
this is spectrally accurate once the kernel width sqrt(t) spans a few grid
cells.  The gradient comes from the same sum with the kernel derivative,
so no finite differences in x are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import functionals as F
from .constants import gaussian_isoperimetric_value, r_closed_form_1d
from .densities import Density, GridDensity, grid_from_density
from .errors import DomainError, MassDriftError, NoiseError, ResolutionError
from .reports import VerdictReport, make_report

__all__ = [
    "FlowTrace",
    "DerivativeEstimate",
    "evolve",
    "to_grid",
    "trace",
    "time_derivative",
    "epi_gaussian_check",
    "concavity_probe",
    "secant_witness",
]

KERNEL_WIDTH = 8.0  # kernel truncated at this many standard deviations
MASS_DRIFT_LIMIT = 1e-8
RESOLUTION_FACTOR = 4.0  # grid spacing must not exceed sqrt(t) / RESOLUTION_FACTOR
DEFAULT_POINTS_PER_SIGMA = 1000.0


def _as_grid(d: Density, h: Optional[float]) -> GridDensity:
    if isinstance(d, GridDensity):
        return d
    if d.dim != 1:
        raise DomainError("heat flow is implemented for one-dimensional densities")
    if h is None:
        h = math.sqrt(float(d.covariance()[0, 0])) / DEFAULT_POINTS_PER_SIGMA
    return grid_from_density(d, h)


def to_grid(d: Density, h: Optional[float] = None) -> GridDensity:
    """Grid version of a one-dimensional density (identity on grids)."""
    return _as_grid(d, h)


def evolve(d: Density, t: float, h: Optional[float] = None) -> GridDensity:
    """Density of X + sqrt(t) Z on a grid extended by 8 sqrt(t) on each side."""
    g = _as_grid(d, h)
    t = float(t)
    if not t >= 0 or not math.isfinite(t):
        raise DomainError(f"flow time must be a finite nonnegative real, got {t!r}")
    if t == 0.0:
        return g
    s = math.sqrt(t)
    if g.h > s / RESOLUTION_FACTOR:
        raise ResolutionError(
            f"grid spacing {g.h:.3g} too coarse for t={t:.3g}; need h <= sqrt(t)/{RESOLUTION_FACTOR:g}"
        )
    K = int(math.ceil(KERNEL_WIDTH * s / g.h))
    k = np.arange(-K, K + 1) * g.h
    ker = np.exp(-0.5 * k * k / t) / math.sqrt(2.0 * math.pi * t)
    w = g.p.copy()
    w[0] *= 0.5
    w[-1] *= 0.5
    w *= g.h
    mass_in = float(np.sum(w))
    p = np.convolve(w, ker)
    # d/dx of the kernel at offset k is -k/t times the kernel
    dp = np.convolve(w, -k / t * ker)
    x = g.x[0] - K * g.h + np.arange(p.size) * g.h
    p = np.maximum(p, 0.0)
    ww = p.copy()
    ww[0] *= 0.5
    ww[-1] *= 0.5
    mass_out = float(np.sum(ww)) * g.h
    drift = abs(mass_out / mass_in - 1.0)
    if drift > MASS_DRIFT_LIMIT:
        raise MassDriftError(f"mass drifted by {drift:.3g} during the heat flow")
    params = dict(g.params)
    params["t"] = float(g.params.get("t", 0.0)) + t
    return GridDensity(x, p / mass_out, dp / mass_out, "grid_1d", params, check_uniform=False)


@dataclass
class DerivativeEstimate:
    """Finite-difference derivative with its step-halving comparison."""

    value: float
    richardson_gap: float
    step: float
    order: int
    t: float

    @property
    def relative_gap(self) -> float:
        return self.richardson_gap / abs(self.value) if self.value != 0 else math.inf


def _renyi(g: GridDensity, alpha: float) -> tuple[float, float]:
    return F.renyi_entropy(g, alpha), F.renyi_fisher(g, alpha)


def _stencil_values(g0: GridDensity, t: float, delta: float, fn) -> dict:
    """fn at t + k delta/2 for k = -4..4, from one long evolution plus short ones."""
    offsets = (-4, -3, -2, -1, 0, 1, 2, 3, 4)
    half = 0.5 * delta
    start = t - 2.0 * delta
    if start < 0:
        raise DomainError("stencil would reach negative time")
    base = evolve(g0, start) if start > 0 else g0
    out = {}
    for k in offsets:
        dt = (k + 4) * half
        out[k] = fn(evolve(base, dt) if dt > 0 else base)
    return out


def _forward_values(g0: GridDensity, t: float, delta: float, fn) -> dict:
    base = evolve(g0, t) if t > 0 else g0
    out = {}
    for k in range(9):
        dt = k * 0.5 * delta
        out[k] = fn(evolve(base, dt) if dt > 0 else base)
    return out


def _central(vals: dict, step_units: int, delta_unit: float, order: int) -> float:
    a = step_units
    hh = a * delta_unit
    fm2, fm1, f0, fp1, fp2 = vals[-2 * a], vals[-a], vals[0], vals[a], vals[2 * a]
    if order == 1:
        return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * hh)
    if order == 3:
        return (-fm2 + 2.0 * fm1 - 2.0 * fp1 + fp2) / (2.0 * hh ** 3)
    return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * hh * hh)


def _forward(vals: dict, step_units: int, delta_unit: float, order: int) -> float:
    a = step_units
    hh = a * delta_unit
    f = [vals[i * a] for i in range(5)]
    if order == 1:
        return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12.0 * hh)
    if order == 3:
        return (-5 * f[0] + 18 * f[1] - 24 * f[2] + 14 * f[3] - 3 * f[4]) / (2.0 * hh ** 3)
    return (35 * f[0] - 104 * f[1] + 114 * f[2] - 56 * f[3] + 11 * f[4]) / (12.0 * hh * hh)


def _estimate(vals: dict, delta: float, t: float, order: int, central: bool) -> DerivativeEstimate:
    # stencil steps delta and delta/2; the values are indexed in units of delta/2
    unit = 0.5 * delta
    rule = _central if central else _forward
    coarse = rule(vals, 2, unit, order)
    fine = rule(vals, 1, unit, order)
    if order == 3:
        p = 2
    else:
        p = 4 if central else (4 if order == 1 else 3)
    extrap = fine + (fine - coarse) / (2 ** p - 1)
    return DerivativeEstimate(extrap, abs(fine - coarse), delta, order, t)


def time_derivative(d: Density, t: float, fn, order: int = 1, delta: Optional[float] = None,
                    h: Optional[float] = None) -> DerivativeEstimate:
    """d^order/dt^order of fn(p_t) by five-point differences with a halving check.

    The default step is t/20 (central) or 1e-3 when t = 0 (forward).
    """
    g0 = _as_grid(d, h)
    t = float(t)
    if order not in (1, 2, 3):
        raise DomainError("time derivatives of order 1 to 3 are supported")
    if delta is None:
        delta = t / 20.0 if t > 0 else 1e-3
    central = t - 2.0 * delta >= 0.0
    if central:
        vals = _stencil_values(g0, t, delta, fn)
    else:
        vals = _forward_values(g0, t, delta, fn)
    return _estimate(vals, delta, t, order, central)


@dataclass
class FlowTrace:
    """Renyi functionals of X_t along a time grid."""

    alpha: float
    t_grid: np.ndarray
    h: np.ndarray
    N: np.ndarray
    I: np.ndarray
    dh_dt_fd: np.ndarray
    d2N_dt2_fd: np.ndarray
    dh_dt_gap: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def residual(self) -> np.ndarray:
        """dh/dt - I/2 at each time."""
        return self.dh_dt_fd - 0.5 * self.I

    def rows(self) -> list[dict]:
        return [
            {"t": float(t), "h": float(h), "N": float(N), "I": float(I),
             "dh_dt_fd": float(dh), "residual": float(dh - 0.5 * I)}
            for t, h, N, I, dh in zip(self.t_grid, self.h, self.N, self.I, self.dh_dt_fd)
        ]


def trace(d: Density, alpha: float, t_grid: Sequence[float], h: Optional[float] = None,
          delta: Optional[float] = None) -> FlowTrace:
    """h_alpha, N_alpha and I_alpha of X_t on ``t_grid`` with finite-difference t-derivatives."""
    alpha = float(alpha)
    ts = np.asarray(sorted(float(t) for t in t_grid))
    if ts.size == 0 or ts[0] < 0:
        raise DomainError("t_grid must be a nonempty set of nonnegative times")
    g0 = _as_grid(d, h)
    hs, Ns, Is, dh, d2N, gaps = [], [], [], [], [], []
    for t in ts:
        step = delta if delta is not None else (t / 20.0 if t > 0 else 1e-3)
        central = t - 2.0 * step >= 0.0

        def fn(g):
            return _renyi(g, alpha)

        vals = _stencil_values(g0, t, step, fn) if central else _forward_values(g0, t, step, fn)
        zero_key = 0
        hv, Iv = vals[zero_key]
        hs.append(hv)
        Is.append(Iv)
        Ns.append(math.exp(2.0 * hv))
        hvals = {k: v[0] for k, v in vals.items()}
        Nvals = {k: math.exp(2.0 * v[0]) for k, v in vals.items()}
        e1 = _estimate(hvals, step, t, 1, central)
        e2 = _estimate(Nvals, step, t, 2, central)
        dh.append(e1.value)
        gaps.append(e1.richardson_gap)
        d2N.append(e2.value)
    return FlowTrace(alpha, ts, np.array(hs), np.array(Ns), np.array(Is), np.array(dh), np.array(d2N),
                     np.array(gaps))


def epi_gaussian_check(d: Density, alpha: float, t_grid: Sequence[float], h: Optional[float] = None,
                       rel_tol: float = 1e-6) -> VerdictReport:
    """N_alpha(X + sqrt(t) Z) >= N_alpha(X) + r_{alpha,1} t on every t in ``t_grid``."""
    alpha = float(alpha)
    g0 = _as_grid(d, h)
    r = r_closed_form_1d(alpha).value
    N0 = F.renyi_power(g0, alpha)
    ts = [float(t) for t in t_grid]
    margins, Nt = [], []
    for t in ts:
        n_t = F.renyi_power(evolve(g0, t), alpha)
        Nt.append(n_t)
        margins.append(n_t - N0 - r * t)
    worst = min(margins)
    i = margins.index(worst)
    return make_report(
        "epi_gaussian",
        {"alpha": alpha, "family": getattr(d, "family", "grid_1d"), "t_grid": ts},
        Nt[i], N0 + r * ts[i], worst, rel_tol * N0, False,
        anchor="Gaussian-perturbation Renyi EPI",
        details={"margins": margins, "N0": N0, "r": r, "worst_t": ts[i]},
    )


def concavity_probe(d: Density, alpha: float, t0: float, h: Optional[float] = None,
                    rel_gap: float = 0.1) -> DerivativeEstimate:
    """d^2 N_alpha(X_t)/dt^2 at t0 (step t0/20, checked against t0/40).

    Raises NoiseError when the two steps disagree by more than ``rel_gap``
    relative, outside an absolute floor of 1e-6 N/t0^2.
    """
    t0 = float(t0)
    if not t0 > 0:
        raise DomainError("the concavity probe needs t0 > 0")
    alpha = float(alpha)
    est = time_derivative(d, t0, lambda g: F.renyi_power(g, alpha), order=2, h=h)
    N = F.renyi_power(evolve(_as_grid(d, h), t0), alpha)
    floor = 1e-6 * N / (t0 * t0)
    if est.richardson_gap > rel_gap * abs(est.value) + floor:
        raise NoiseError(
            f"second derivative estimate {est.value:.4g} unstable under step halving (gap {est.richardson_gap:.3g})"
        )
    return est


def secant_witness(d: Density, alpha: float, T: float = 100.0, h: Optional[float] = None) -> VerdictReport:
    """Compare the long-run secant slope of N_alpha(X_t) with its initial slope N_alpha I_alpha.

    A secant above the initial slope rules out concavity of t -> N_alpha(X_t).
    ``T`` is a tuning constant of the witness.
    """
    alpha = float(alpha)
    T = float(T)
    g0 = _as_grid(d, h)
    if g0.h > math.sqrt(T) / RESOLUTION_FACTOR:
        raise ResolutionError("grid too coarse for the requested horizon")
    N0 = F.renyi_power(g0, alpha)
    if isinstance(d, GridDensity):
        slope0 = N0 * F.renyi_fisher(g0, alpha)
    else:
        slope0 = F.renyi_power(d, alpha) * F.renyi_fisher(d, alpha)
    secant = (F.renyi_power(evolve(g0, T), alpha) - N0) / T
    asymptote = gaussian_isoperimetric_value(alpha)
    return make_report(
        "secant_witness",
        {"alpha": alpha, "T": T, "family": getattr(d, "family", "grid_1d")},
        secant, slope0, secant - slope0, 0.0, False,
        anchor="non-concavity of the Renyi entropy power",
        details={"initial_slope": slope0, "asymptotic_slope": asymptote,
                 "T_is_tuning_constant": True},
    )
