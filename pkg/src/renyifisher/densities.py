"""Probability densities: analytic families and uniform-grid samples.

Analytic families are *elliptical*: p(x) = phi(|L^{-1}(x - mu)|) / |det L|
for a radial profile phi normalised on R^n.  Every integral a functional
needs then reduces to a one-dimensional radial integral of phi, with the
linear map entering through closed-form factors.  The primitives exposed by
all densities are

* ``power_integral(a)``      int p^a
* ``gradient_integral(b)``   int |grad p|^2 p^(b-2)   (scalar)
* ``gradient_matrix(b)``     int grad p grad p^T p^(b-2)
* ``shannon_entropy()``      -int p ln p
* ``mean()``, ``covariance()``, ``second_moment()``

Analytic profiles are evaluated in log space, so their integrands are
restricted to the exact support; grid densities drop samples below P_FLOOR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from types import MappingProxyType
from typing import Callable, Optional

import numpy as np

from .errors import ConvergenceError, DivergenceError, DomainError, RegionError
from .quadrature import (
    Decay,
    IntegralResult,
    RadialSupport,
    integrate_radial,
    integrate_samples,
)
from .special_functions import log_beta, log_gamma

__all__ = [
    "P_FLOOR",
    "Support",
    "RadialProfile",
    "Density",
    "EllipticalDensity",
    "GridDensity",
    "make",
    "FAMILIES",
    "cos_power",
    "cosh_power",
    "sech_power",
    "two_sided_exp",
    "uniform_interval",
    "gaussian",
    "max_renyi",
    "g_lambda",
    "barenblatt",
    "barenblatt_normalizer",
    "sobolev_extremal",
    "G_1d",
    "G_nd",
    "grid_1d",
    "grid_from_density",
    "second_moment",
    "covariance",
    "fd_gradient",
]

P_FLOOR = 1e-300
_LOG_FLOOR = math.log(P_FLOOR)
DEFAULT_RTOL = 1e-11


# --------------------------------------------------------------------------
# radial profiles


@dataclass(frozen=True)
class RadialProfile:
    """Radial shape phi on [0, radius) with its log and logarithmic derivative.

    ``log_phi(r)`` returns ln phi (``-inf`` outside the support) and
    ``dlog_phi(r)`` returns phi'/phi.  ``edge_exponent`` e states
    phi ~ (radius - r)^e at a finite edge; ``decay`` bounds phi for an
    unbounded support.
    """

    log_phi: Callable[[np.ndarray], np.ndarray]
    dlog_phi: Callable[[np.ndarray], np.ndarray]
    radius: float = math.inf
    decay: Optional[Decay] = None
    edge_exponent: Optional[float] = None
    breakpoints: tuple = ()

    def phi(self, r: np.ndarray) -> np.ndarray:
        return np.exp(self.log_phi(np.asarray(r, dtype=float)))

    def dphi(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        lp = self.log_phi(r)
        out = np.zeros_like(r)
        ok = np.isfinite(lp)
        out[ok] = np.exp(lp[ok]) * self.dlog_phi(r[ok])
        return out


def _compact_power_profile(log_a: float, exponent: float, radius: float, shape: str) -> RadialProfile:
    """phi(r) = exp(log_a) * w(r)^exponent on [0, radius) for a few shapes w.

    shape ``"cos"``: w = cos r, radius pi/2.
    shape ``"quad"``: w = 1 - (r/radius)^2.
    """
    if shape == "cos":
        def log_phi(r):
            r = np.asarray(r, dtype=float)
            out = np.full_like(r, -np.inf)
            ok = r < radius
            out[ok] = log_a + exponent * np.log(np.cos(r[ok]))
            return out

        def dlog_phi(r):
            return -exponent * np.tan(np.asarray(r, dtype=float))

        edge = exponent
    elif shape == "quad":
        R2 = radius * radius

        def log_phi(r):
            r = np.asarray(r, dtype=float)
            out = np.full_like(r, -np.inf)
            ok = r < radius
            out[ok] = log_a + exponent * np.log1p(-(r[ok] * r[ok]) / R2)
            return out

        def dlog_phi(r):
            r = np.asarray(r, dtype=float)
            return -2.0 * exponent * r / (R2 - r * r)

        edge = exponent
    else:  # pragma: no cover - internal misuse
        raise DomainError(shape)
    return RadialProfile(log_phi, dlog_phi, radius=radius, edge_exponent=edge)


def _algebraic_tail_profile(log_a: float, kappa: float, power: float, n: int) -> RadialProfile:
    """phi(r) = exp(log_a) * (1 + kappa r^2)^(-power), a heavy-tailed profile."""

    def log_phi(r):
        r = np.asarray(r, dtype=float)
        return log_a - power * np.log1p(kappa * r * r)

    def dlog_phi(r):
        r = np.asarray(r, dtype=float)
        return -2.0 * power * kappa * r / (1.0 + kappa * r * r)

    coef = math.exp(log_a - power * math.log(kappa))
    decay = Decay("power", 2.0 * power, coef=coef, r0=0.0, grad_coef=2.0 * power, grad_power=-1.0)
    return RadialProfile(log_phi, dlog_phi, decay=decay)


def _gaussian_profile(n: int, s: float = 1.0) -> RadialProfile:
    """phi(r) = (2 pi s^2)^(-n/2) exp(-r^2/(2 s^2))."""
    log_a = -0.5 * n * math.log(2.0 * math.pi * s * s)

    def log_phi(r):
        r = np.asarray(r, dtype=float)
        return log_a - 0.5 * r * r / (s * s)

    def dlog_phi(r):
        return -np.asarray(r, dtype=float) / (s * s)

    decay = Decay("gaussian", s, coef=math.exp(log_a), grad_coef=1.0 / (s * s), grad_power=1.0)
    return RadialProfile(log_phi, dlog_phi, decay=decay)


def _log_cosh(r: np.ndarray) -> np.ndarray:
    a = np.abs(r)
    return a + np.log1p(np.exp(-2.0 * a)) - math.log(2.0)


# --------------------------------------------------------------------------
# support descriptors


@dataclass(frozen=True)
class Support:
    """Where a density is positive.

    kind: ``"full"`` (all of R^n), ``"interval"`` ([lower, upper], n = 1),
    ``"ball"`` (|x - center| < radius) or ``"ellipsoid"`` (image of a ball
    under an affine map, ``radius`` measured in whitened coordinates).
    """

    kind: str
    lower: Optional[float] = None
    upper: Optional[float] = None
    center: Optional[tuple] = None
    radius: Optional[float] = None


# --------------------------------------------------------------------------
# densities


class Density:
    """Common interface; see the module docstring for the integral primitives."""

    dim: int
    family: str
    params: MappingProxyType

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    @property
    def support(self) -> Support:
        raise NotImplementedError

    def __call__(self, x):
        return self.value(x)

    def describe(self) -> dict:
        return {"family": self.family, "dim": self.dim, "params": dict(self.params)}

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.family}[n={self.dim}]({inner})"


def _as_matrix(n: int, K) -> np.ndarray:
    K = np.asarray(K, dtype=float)
    if K.ndim == 0:
        K = np.eye(n) * float(K)
    if K.shape != (n, n):
        raise DomainError(f"matrix must be {n}x{n}, got shape {K.shape}")
    return K


def _cholesky(K: np.ndarray) -> np.ndarray:
    if not np.allclose(K, K.T, rtol=1e-12, atol=0.0):
        raise DomainError("covariance matrix must be symmetric")
    try:
        return np.linalg.cholesky(K)
    except np.linalg.LinAlgError as exc:
        raise DomainError("covariance matrix must be positive definite") from exc


class EllipticalDensity(Density):
    """p(x) = phi(|L^{-1}(x - center)|) / |det L| with a normalised radial profile."""

    def __init__(self, dim: int, profile: RadialProfile, L=None, center=None,
                 family: str = "elliptical", params: Optional[dict] = None):
        self.dim = int(dim)
        if self.dim < 1:
            raise DomainError("dimension must be positive")
        self.profile = profile
        self.L = np.eye(self.dim) if L is None else _as_matrix(self.dim, L)
        self.center = np.zeros(self.dim) if center is None else np.asarray(center, dtype=float).reshape(self.dim)
        det = float(np.linalg.det(self.L))
        if not det != 0.0 or not math.isfinite(det):
            raise DomainError("the linear map of an elliptical density must be invertible")
        self.abs_det = abs(det)
        self.log_det = math.log(self.abs_det)
        self.Linv = np.linalg.inv(self.L)
        self.family = family
        self.params = MappingProxyType(dict(params or {}))
        self._cache: dict = {}

    # -- pointwise ------------------------------------------------------
    def _whiten(self, x):
        x = np.asarray(x, dtype=float)
        if self.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            xs = x[..., None]
        else:
            xs = x
        if xs.shape[-1] != self.dim:
            raise DomainError(f"points must have trailing dimension {self.dim}")
        y = (xs - self.center) @ self.Linv.T
        return x, y, np.sqrt(np.sum(y * y, axis=-1))

    def value(self, x):
        x, _, r = self._whiten(x)
        return self.profile.phi(r) / self.abs_det

    def log_value(self, x):
        x, _, r = self._whiten(x)
        return self.profile.log_phi(r) - self.log_det

    def gradient(self, x):
        x0 = np.asarray(x, dtype=float)
        _, y, r = self._whiten(x0)
        dphi = self.profile.dphi(r) / self.abs_det
        with np.errstate(invalid="ignore", divide="ignore"):
            unit = np.where(r[..., None] > 0, y / r[..., None], 0.0)
        g = dphi[..., None] * (unit @ self.Linv)
        if self.dim == 1 and (x0.ndim == 0 or x0.shape[-1] != 1):
            return g[..., 0]
        return g

    @property
    def support(self) -> Support:
        R = self.profile.radius
        if not math.isfinite(R):
            return Support("full")
        if self.dim == 1:
            half = abs(self.L[0, 0]) * R
            c = float(self.center[0])
            return Support("interval", lower=c - half, upper=c + half)
        if np.allclose(self.L, self.L[0, 0] * np.eye(self.dim)):
            return Support("ball", center=tuple(self.center), radius=abs(self.L[0, 0]) * R)
        return Support("ellipsoid", center=tuple(self.center), radius=R)

    # -- transformations --------------------------------------------------
    def _clone(self, L, center, extra: dict) -> "EllipticalDensity":
        params = dict(self.params)
        params.update(extra)
        return EllipticalDensity(self.dim, self.profile, L, center, self.family, params)

    def scaled(self, a: float) -> "EllipticalDensity":
        """Density of aX: x -> p(x/a)/a^n."""
        a = float(a)
        if not a > 0:
            raise DomainError("scale must be positive")
        scale = float(self.params.get("scale", 1.0)) * a
        return self._clone(self.L * a, self.center * a, {"scale": scale})

    def shifted(self, c) -> "EllipticalDensity":
        """Density of X + c."""
        c = np.broadcast_to(np.asarray(c, dtype=float), (self.dim,))
        shift = np.asarray(self.params.get("shift", np.zeros(self.dim)), dtype=float) + c
        shift_v = float(shift[0]) if self.dim == 1 else tuple(float(v) for v in shift)
        return self._clone(self.L, self.center + c, {"shift": shift_v})

    # -- radial integrals -------------------------------------------------
    def _radial(self, integrand, q: float, m: float, edge_exponent: Optional[float],
                rtol: float, grad_factor: float = 1.0) -> IntegralResult:
        prof = self.profile
        if math.isfinite(prof.radius):
            support = RadialSupport(prof.radius, edge_exponent=edge_exponent, breakpoints=prof.breakpoints)
        else:
            d = prof.decay
            if grad_factor != 1.0:
                d = replace(d, coef=d.coef * grad_factor ** (1.0 / q))
            support = RadialSupport(decay=d, breakpoints=prof.breakpoints)
        rough = integrate_radial(integrand, self.dim, support, 1e-6, q=q, m=m)
        if not rough.converged:
            raise ConvergenceError("radial quadrature did not converge")
        target = rtol * max(abs(rough.value), 1e-300)
        res = integrate_radial(integrand, self.dim, support, target, q=q, m=m)
        if not math.isfinite(res.value):
            raise DivergenceError("radial integral is not finite")
        return res

    def _key(self, *args):
        return args

    def profile_power_integral(self, a: float, rtol: float = DEFAULT_RTOL) -> IntegralResult:
        """area(S^{n-1}) int phi^a r^(n-1) dr."""
        key = ("P", float(a), rtol)
        if key not in self._cache:
            lp = self.profile.log_phi

            def g(r):
                v = lp(r)
                out = np.zeros_like(r)
                ok = np.isfinite(v)
                out[ok] = np.exp(a * v[ok])
                return out

            e = self.profile.edge_exponent
            self._cache[key] = self._radial(g, a, 0.0, None if e is None else a * e, rtol)
        return self._cache[key]

    def profile_gradient_integral(self, b: float, rtol: float = DEFAULT_RTOL) -> IntegralResult:
        """area(S^{n-1}) int phi'^2 phi^(b-2) r^(n-1) dr."""
        key = ("G", float(b), rtol)
        if key not in self._cache:
            lp = self.profile.log_phi
            dl = self.profile.dlog_phi

            def g(r):
                v = lp(r)
                out = np.zeros_like(r)
                ok = np.isfinite(v)
                rr = r[ok]
                out[ok] = dl(rr) ** 2 * np.exp(b * v[ok])
                return out

            e = self.profile.edge_exponent
            edge = None
            if e is not None:
                edge = b * e - 2.0
                if edge <= -1.0:
                    raise DivergenceError(
                        f"gradient integral with exponent {b - 2:g} diverges at the support edge"
                    )
            d = self.profile.decay
            gf = 1.0 if d is None else d.grad_coef ** 2
            m = 0.0 if d is None else 2.0 * d.grad_power
            self._cache[key] = self._radial(g, b, m, edge, rtol, grad_factor=gf)
        return self._cache[key]

    def power_integral(self, a: float, rtol: float = DEFAULT_RTOL) -> float:
        """int p^a dx."""
        base = self.profile_power_integral(a, rtol).value
        return base * math.exp((1.0 - a) * self.log_det)

    def log_power_integral(self, a: float, rtol: float = DEFAULT_RTOL) -> float:
        base = self.profile_power_integral(a, rtol).value
        return math.log(base) + (1.0 - a) * self.log_det

    def _metric_trace(self) -> float:
        return float(np.sum(self.Linv * self.Linv))

    def gradient_integral(self, b: float, rtol: float = DEFAULT_RTOL) -> float:
        """int |grad p|^2 p^(b-2) dx."""
        base = self.profile_gradient_integral(b, rtol).value
        return base * math.exp((1.0 - b) * self.log_det) * self._metric_trace() / self.dim

    def gradient_matrix(self, b: float, rtol: float = DEFAULT_RTOL) -> np.ndarray:
        """int grad p grad p^T p^(b-2) dx."""
        base = self.profile_gradient_integral(b, rtol).value
        M = self.Linv.T @ self.Linv * (base * math.exp((1.0 - b) * self.log_det) / self.dim)
        return 0.5 * (M + M.T)

    def shannon_entropy(self, rtol: float = DEFAULT_RTOL) -> float:
        key = ("H", rtol)
        if key not in self._cache:
            lp = self.profile.log_phi

            def g(r):
                v = lp(r)
                out = np.zeros_like(r)
                ok = np.isfinite(v)
                out[ok] = -np.exp(v[ok]) * v[ok]
                return out

            e = self.profile.edge_exponent
            d = self.profile.decay
            q = 0.95
            # p |ln p| <= p^q / (e (1-q)) for p <= 1
            factor = 1.0
            if d is not None and d.kind != "power":
                factor = 1.0 / (math.e * (1.0 - q))
            self._cache[key] = self._radial(g, q, 0.0, e, rtol, grad_factor=factor)
        return self._cache[key].value + self.log_det

    def _radial_second_moment(self, rtol: float = DEFAULT_RTOL) -> float:
        key = ("M2", rtol)
        if key not in self._cache:
            lp = self.profile.log_phi

            def g(r):
                v = lp(r)
                out = np.zeros_like(r)
                ok = np.isfinite(v)
                out[ok] = r[ok] ** 2 * np.exp(v[ok])
                return out

            d = self.profile.decay
            if d is not None and d.kind == "power" and d.rate <= self.dim + 2:
                raise DivergenceError("second moment diverges for this tail")
            self._cache[key] = self._radial(g, 1.0, 2.0, self.profile.edge_exponent, rtol)
        return self._cache[key].value

    def mean(self) -> np.ndarray:
        d = self.profile.decay
        if d is not None and d.kind == "power" and d.rate <= self.dim + 1:
            raise DivergenceError("mean diverges for this tail")
        return self.center.copy()

    def covariance(self, rtol: float = DEFAULT_RTOL) -> np.ndarray:
        s = self._radial_second_moment(rtol) / self.dim
        K = self.L @ self.L.T * s
        return 0.5 * (K + K.T)

    def second_moment(self, rtol: float = DEFAULT_RTOL) -> float:
        return float(np.trace(self.covariance(rtol)) + self.center @ self.center)

    def mass(self, rtol: float = DEFAULT_RTOL) -> float:
        return self.power_integral(1.0, rtol)


class GridDensity(Density):
    """One-dimensional density sampled on a uniform grid.

    ``dp`` may carry exact derivative samples; otherwise 4th-order finite
    differences are used.  Integrals are trapezoid sums.
    """

    def __init__(self, x, p, dp=None, family: str = "grid_1d", params: Optional[dict] = None,
                 check_uniform: bool = True):
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=float)
        if x.ndim != 1 or x.shape != p.shape or x.size < 5:
            raise DomainError("grid needs matching 1-D x and p arrays with at least 5 points")
        h = (x[-1] - x[0]) / (x.size - 1)
        if not h > 0:
            raise DomainError("grid abscissae must increase")
        if check_uniform and np.max(np.abs(np.diff(x) - h)) > 1e-6 * h:
            raise DomainError("grid spacing must be uniform")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise DomainError("grid density values must be finite and nonnegative")
        self.dim = 1
        self.x = x
        self.h = float(h)
        self.p = p
        self.dp = fd_gradient(p, self.h) if dp is None else np.asarray(dp, dtype=float)
        self.family = family
        self.params = MappingProxyType(dict(params or {}))

    def value(self, x):
        return np.interp(np.asarray(x, dtype=float), self.x, self.p, left=0.0, right=0.0)

    def gradient(self, x):
        return np.interp(np.asarray(x, dtype=float), self.x, self.dp, left=0.0, right=0.0)

    @property
    def support(self) -> Support:
        return Support("interval", lower=float(self.x[0]), upper=float(self.x[-1]))

    def mass(self, rtol: float = 0.0) -> float:
        return integrate_samples(self.p, self.h)

    def power_integral(self, a: float, rtol: float = 0.0) -> float:
        ok = self.p > P_FLOOR
        y = np.zeros_like(self.p)
        y[ok] = self.p[ok] ** a
        return integrate_samples(y, self.h)

    def log_power_integral(self, a: float, rtol: float = 0.0) -> float:
        return math.log(self.power_integral(a))

    def gradient_integral(self, b: float, rtol: float = 0.0) -> float:
        ok = self.p > P_FLOOR
        y = np.zeros_like(self.p)
        y[ok] = self.dp[ok] ** 2 * self.p[ok] ** (b - 2.0)
        return integrate_samples(y, self.h)

    def gradient_matrix(self, b: float, rtol: float = 0.0) -> np.ndarray:
        return np.array([[self.gradient_integral(b)]])

    def shannon_entropy(self, rtol: float = 0.0) -> float:
        ok = self.p > P_FLOOR
        y = np.zeros_like(self.p)
        y[ok] = -self.p[ok] * np.log(self.p[ok])
        return integrate_samples(y, self.h)

    def mean(self) -> np.ndarray:
        return np.array([integrate_samples(self.x * self.p, self.h) / self.mass()])

    def covariance(self, rtol: float = 0.0) -> np.ndarray:
        mu = self.mean()[0]
        return np.array([[integrate_samples((self.x - mu) ** 2 * self.p, self.h) / self.mass()]])

    def second_moment(self, rtol: float = 0.0) -> float:
        return integrate_samples(self.x ** 2 * self.p, self.h) / self.mass()

    def shifted(self, c: float) -> "GridDensity":
        return GridDensity(self.x + float(c), self.p, self.dp, self.family, dict(self.params))

    def scaled(self, a: float) -> "GridDensity":
        a = float(a)
        if not a > 0:
            raise DomainError("scale must be positive")
        return GridDensity(self.x * a, self.p / a, self.dp / (a * a), self.family, dict(self.params))


def fd_gradient(p: np.ndarray, h: float) -> np.ndarray:
    """4th-order central differences with 4th-order one-sided stencils at the two ends."""
    p = np.asarray(p, dtype=float)
    n = p.size
    if n < 5:
        raise DomainError("need at least 5 samples for 4th-order differences")
    d = np.empty_like(p)
    d[2:-2] = (p[:-4] - 8.0 * p[1:-3] + 8.0 * p[3:-1] - p[4:]) / (12.0 * h)
    d[0] = (-25.0 * p[0] + 48.0 * p[1] - 36.0 * p[2] + 16.0 * p[3] - 3.0 * p[4]) / (12.0 * h)
    d[1] = (-3.0 * p[0] - 10.0 * p[1] + 18.0 * p[2] - 6.0 * p[3] + p[4]) / (12.0 * h)
    d[-1] = (25.0 * p[-1] - 48.0 * p[-2] + 36.0 * p[-3] - 16.0 * p[-4] + 3.0 * p[-5]) / (12.0 * h)
    d[-2] = (3.0 * p[-1] + 10.0 * p[-2] - 18.0 * p[-3] + 6.0 * p[-4] - p[-5]) / (12.0 * h)
    return d


def second_moment(d: Density) -> float:
    """sigma_2 = int |x|^2 p dx."""
    return d.second_moment()


def covariance(d: Density) -> np.ndarray:
    return d.covariance()


# --------------------------------------------------------------------------
# one-dimensional families


def _affine_1d(b: float, c: float):
    """L and center so that y = b x + c is the whitened coordinate."""
    b = float(b)
    if not b > 0:
        raise RegionError("b must be positive")
    return np.array([[1.0 / b]]), np.array([-float(c) / b])


def cos_power(alpha: float, b: float = 1.0, c: float = 0.0) -> EllipticalDensity:
    """a b cos(bx+c)^(2/(alpha-1)) on |bx+c| < pi/2, alpha > 1."""
    alpha = float(alpha)
    if not alpha > 1.0:
        raise RegionError(f"cos_power needs alpha > 1, got {alpha!r}")
    k = 2.0 / (alpha - 1.0)
    # int cos^k over (-pi/2, pi/2) = sqrt(pi) Gamma((k+1)/2)/Gamma(k/2+1)
    log_a = log_gamma(0.5 * k + 1.0) - log_gamma(0.5 * (k + 1.0)) - 0.5 * math.log(math.pi)
    prof = _compact_power_profile(log_a, k, 0.5 * math.pi, "cos")
    L, mu = _affine_1d(b, c)
    return EllipticalDensity(1, prof, L, mu, "cos_power", {"alpha": alpha, "b": float(b), "c": float(c)})


def sech_power(k: float, b: float = 1.0, c: float = 0.0, family: str = "sech_power",
               extra: Optional[dict] = None) -> EllipticalDensity:
    """Normalised b a cosh(bx+c)^(-k), k > 0."""
    k = float(k)
    if not k > 0:
        raise RegionError(f"sech_power needs k > 0, got {k!r}")
    # int cosh^-k = sqrt(pi) Gamma(k/2)/Gamma((k+1)/2)
    log_a = log_gamma(0.5 * (k + 1.0)) - log_gamma(0.5 * k) - 0.5 * math.log(math.pi)

    def log_phi(r):
        return log_a - k * _log_cosh(np.asarray(r, dtype=float))

    def dlog_phi(r):
        return -k * np.tanh(np.asarray(r, dtype=float))

    decay = Decay("exponential", k, coef=math.exp(log_a + k * math.log(2.0)), grad_coef=k)
    prof = RadialProfile(log_phi, dlog_phi, decay=decay)
    L, mu = _affine_1d(b, c)
    params = {"k": k, "b": float(b), "c": float(c)}
    if extra:
        params = {**extra, "b": float(b), "c": float(c)}
    return EllipticalDensity(1, prof, L, mu, family, params)


def cosh_power(alpha: float, b: float = 1.0, c: float = 0.0) -> EllipticalDensity:
    """Equality case of the isoperimetric inequality for 0 < alpha < 1.

    The density is proportional to cosh(bx+c)^(-2/(1-alpha)); it is the
    image p = f^(2/alpha) / int f^(2/alpha) of the Gagliardo-Nirenberg
    optimiser f = cosh^(-alpha/(1-alpha)).
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise RegionError(f"cosh_power needs 0 < alpha < 1, got {alpha!r}")
    return sech_power(2.0 / (1.0 - alpha), b, c, family="cosh_power", extra={"alpha": alpha})


def two_sided_exp(b: float = 1.0, c: float = 0.0) -> EllipticalDensity:
    """(b/2) exp(-|bx+c|)."""
    log_a = -math.log(2.0)

    def log_phi(r):
        return log_a - np.asarray(r, dtype=float)

    def dlog_phi(r):
        return -np.ones_like(np.asarray(r, dtype=float))

    prof = RadialProfile(log_phi, dlog_phi, decay=Decay("exponential", 1.0, coef=0.5, grad_coef=1.0))
    L, mu = _affine_1d(b, c)
    return EllipticalDensity(1, prof, L, mu, "two_sided_exp", {"b": float(b), "c": float(c)})


def uniform_interval(b: float = 1.0, c: float = 0.0) -> EllipticalDensity:
    """b/pi on the interval |bx+c| < pi/2 of length pi/b."""
    R = 0.5 * math.pi
    log_a = -math.log(math.pi)

    def log_phi(r):
        r = np.asarray(r, dtype=float)
        return np.where(r < R, log_a, -np.inf)

    def dlog_phi(r):
        return np.zeros_like(np.asarray(r, dtype=float))

    prof = RadialProfile(log_phi, dlog_phi, radius=R, edge_exponent=0.0)
    L, mu = _affine_1d(b, c)
    return EllipticalDensity(1, prof, L, mu, "uniform_interval", {"b": float(b), "c": float(c)})


# --------------------------------------------------------------------------
# n-dimensional families


def gaussian(n: int = 1, cov=1.0, mean=None) -> EllipticalDensity:
    """N(mean, cov) in R^n; ``cov`` is a scalar variance or an n x n matrix."""
    n = int(n)
    Sigma = _as_matrix(n, cov)
    L = _cholesky(Sigma)
    params = {"cov": Sigma.tolist() if n > 1 else float(Sigma[0, 0])}
    return EllipticalDensity(n, _gaussian_profile(n), L, mean, "gaussian", params)


def _check_above(n: int, alpha: float, name: str):
    if not alpha > n / (n + 2.0):
        raise RegionError(f"{name} needs alpha > n/(n+2)={n / (n + 2.0):g} for n={n}, got {alpha!r}")


def max_renyi(alpha: float, K=1.0, n: Optional[int] = None) -> EllipticalDensity:
    """Renyi-entropy maximiser f_alpha among densities with covariance K."""
    alpha = float(alpha)
    K_arr = np.asarray(K, dtype=float)
    n = int(n) if n is not None else (1 if K_arr.ndim == 0 else K_arr.shape[0])
    K_arr = _as_matrix(n, K_arr)
    _check_above(n, alpha, "max_renyi")
    params = {"alpha": alpha, "K": K_arr.tolist() if n > 1 else float(K_arr[0, 0])}
    if abs(alpha - 1.0) < 1e-9:
        d = gaussian(n, K_arr)
        return EllipticalDensity(n, d.profile, d.L, None, "max_renyi", params)
    half_n = 0.5 * n
    if alpha > 1.0:
        m = n + 2.0 / (alpha - 1.0)
        C = (m + 2.0) * K_arr
        log_a0 = log_gamma(0.5 * m + 1.0) - log_gamma(0.5 * (m - n) + 1.0) - half_n * math.log(math.pi)
        prof = _compact_power_profile(log_a0, 1.0 / (alpha - 1.0), 1.0, "quad")
    else:
        m = 2.0 / (1.0 - alpha) - n
        C = (m - 2.0) * K_arr
        log_a0 = log_gamma(0.5 * (m + n)) - log_gamma(0.5 * m) - half_n * math.log(math.pi)
        prof = _algebraic_tail_profile(log_a0, 1.0, 1.0 / (1.0 - alpha), n)
    return EllipticalDensity(n, prof, _cholesky(C), None, "max_renyi", params)


def g_lambda(lam: float, K=1.0, n: Optional[int] = None) -> EllipticalDensity:
    """A_lam (1 - (lam-1) beta_lam x^T K^{-1} x)_+^(1/(lam-1)), beta_lam = 1/(2 lam - n(1-lam))."""
    lam = float(lam)
    K_arr = np.asarray(K, dtype=float)
    n = int(n) if n is not None else (1 if K_arr.ndim == 0 else K_arr.shape[0])
    K_arr = _as_matrix(n, K_arr)
    _check_above(n, lam, "g_lambda")
    if abs(lam - 1.0) < 1e-9:
        raise RegionError("g_lambda is defined for lambda != 1")
    L = _cholesky(K_arr)
    log_det_K = 2.0 * float(np.sum(np.log(np.diag(L))))
    beta = 1.0 / (2.0 * lam - n * (1.0 - lam))
    s = abs(lam - 1.0) * beta
    half_n = 0.5 * n
    if lam > 1.0:
        log_A = (log_gamma(lam / (lam - 1.0) + half_n) + half_n * math.log(s)
                 - log_gamma(lam / (lam - 1.0)) - half_n * math.log(math.pi) - 0.5 * log_det_K)
        # in y = L^{-1} x the profile is A |K|^{1/2} (1 - s |y|^2)^(1/(lam-1))
        prof = _compact_power_profile(log_A + 0.5 * log_det_K, 1.0 / (lam - 1.0), 1.0 / math.sqrt(s), "quad")
    else:
        log_A = (log_gamma(1.0 / (1.0 - lam)) + half_n * math.log(s)
                 - log_gamma(1.0 / (1.0 - lam) - half_n) - half_n * math.log(math.pi) - 0.5 * log_det_K)
        prof = _algebraic_tail_profile(log_A + 0.5 * log_det_K, s, 1.0 / (1.0 - lam), n)
    params = {"lambda": lam, "K": K_arr.tolist() if n > 1 else float(K_arr[0, 0])}
    return EllipticalDensity(n, prof, L, None, "g_lambda", params)


def barenblatt_normalizer(n: int, alpha: float, tol: float = 1e-10) -> float:
    """C such that (C -/+ |x|^2)_+^(1/(alpha-1)) integrates to 1, found by bisection on quadrature."""
    n = int(n)
    alpha = float(alpha)
    _check_above(n, alpha, "barenblatt")
    if abs(alpha - 1.0) < 1e-9:
        raise RegionError("the Barenblatt profile is defined for alpha != 1")
    e = 1.0 / (alpha - 1.0)

    def mass(C: float) -> float:
        if alpha > 1.0:
            R = math.sqrt(C)
            sup = RadialSupport(R, edge_exponent=e)

            def g(r):
                return np.maximum(C - r * r, 0.0) ** e
        else:
            sup = RadialSupport(decay=Decay("power", -2.0 * e, coef=1.0))

            def g(r):
                return (C + r * r) ** e
        return integrate_radial(g, n, sup, 1e-3 * tol).value

    increasing = alpha > 1.0
    lo, hi = 1.0, 1.0
    m1 = mass(1.0)
    if (m1 < 1.0) == increasing:
        while (mass(hi) < 1.0) == increasing:
            hi *= 2.0
    else:
        while (mass(lo) < 1.0) != increasing:
            lo *= 0.5
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        mm = mass(mid)
        if abs(mm - 1.0) <= 1e-3 * tol:
            return mid
        if (mm < 1.0) == increasing:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    mid = math.sqrt(lo * hi)
    if abs(mass(mid) - 1.0) > tol:
        raise ConvergenceError("Barenblatt normaliser bisection did not reach tolerance")
    return mid


def barenblatt(alpha: float, n: int = 1) -> EllipticalDensity:
    """Barenblatt profile (C -/+ |x|^2)_+^(1/(alpha-1)) normalised by the choice of C."""
    n = int(n)
    alpha = float(alpha)
    C = barenblatt_normalizer(n, alpha)
    e = 1.0 / (alpha - 1.0)
    if alpha > 1.0:
        prof = _compact_power_profile(e * math.log(C), e, math.sqrt(C), "quad")
    else:
        prof = _algebraic_tail_profile(e * math.log(C), 1.0 / C, -e, n)
    return EllipticalDensity(n, prof, None, None, "barenblatt", {"alpha": alpha, "C": C})


def sobolev_extremal(n: int = 3, b: float = 1.0, x0=None) -> EllipticalDensity:
    """a / (1 + b|x - x0|^2)^n with a fixed by normalisation."""
    n = int(n)
    b = float(b)
    if n < 1 or not b > 0:
        raise RegionError("sobolev_extremal needs n >= 1 and b > 0")
    log_a = 0.5 * n * math.log(b) + log_gamma(float(n)) - 0.5 * n * math.log(math.pi) - log_gamma(0.5 * n)
    prof = _algebraic_tail_profile(log_a, b, float(n), n)
    return EllipticalDensity(n, prof, None, x0, "sobolev_extremal",
                             {"b": b, "a": math.exp(log_a), "alpha": (n - 2.0) / n})


def G_1d(alpha: float) -> EllipticalDensity:
    """a (1 + (1-alpha)/2 x^2)_+^(2/(alpha-1)); a e^{-x^2} at alpha = 1."""
    alpha = float(alpha)
    if not alpha > 0:
        raise RegionError("G_1d needs alpha > 0")
    if abs(alpha - 1.0) < 1e-9:
        d = _gaussian_profile(1, math.sqrt(0.5))
        return EllipticalDensity(1, d, None, None, "G_1d", {"alpha": 1.0})
    kappa = abs(1.0 - alpha) / 2.0
    if alpha > 1.0:
        m = 2.0 / (alpha - 1.0)
        log_a = 0.5 * math.log(kappa) - log_beta(0.5, m + 1.0)
        prof = _compact_power_profile(log_a, m, 1.0 / math.sqrt(kappa), "quad")
    else:
        m = 2.0 / (1.0 - alpha)
        log_a = 0.5 * math.log(kappa) - log_beta(0.5, m - 0.5)
        prof = _algebraic_tail_profile(log_a, kappa, m, 1)
    return EllipticalDensity(1, prof, None, None, "G_1d", {"alpha": alpha})


def G_nd(n: int, alpha: float) -> EllipticalDensity:
    """b (1 - kappa |x|^2)_+^(2/(alpha-1)), kappa = (alpha-1)/((n+2)(alpha+1) - 2n)."""
    n = int(n)
    alpha = float(alpha)
    D = (n + 2.0) * (alpha + 1.0) - 2.0 * n
    if not D > 0:
        raise RegionError(f"G_nd needs alpha > (n-2)/(n+2)={(n - 2.0) / (n + 2.0):g}")
    half_n = 0.5 * n
    if abs(alpha - 1.0) < 1e-9:
        return EllipticalDensity(n, _gaussian_profile(n), None, None, "G_nd", {"alpha": 1.0})
    kappa = abs(alpha - 1.0) / D
    if alpha > 1.0:
        m = 2.0 / (alpha - 1.0)
        log_b = half_n * math.log(kappa / math.pi) + log_gamma(m + 1.0 + half_n) - log_gamma(m + 1.0)
        prof = _compact_power_profile(log_b, m, 1.0 / math.sqrt(kappa), "quad")
    else:
        m = 2.0 / (1.0 - alpha)
        log_b = half_n * math.log(kappa / math.pi) + log_gamma(m) - log_gamma(m - half_n)
        prof = _algebraic_tail_profile(log_b, kappa, m, n)
    return EllipticalDensity(n, prof, None, None, "G_nd", {"alpha": alpha, "n": n})


# --------------------------------------------------------------------------
# grids


def grid_1d(x, p, dp=None) -> GridDensity:
    """Density from samples on a uniform grid."""
    return GridDensity(x, p, dp)


def grid_from_density(d: Density, h: float, tail_tol: float = 1e-17, power: float = 1.0,
                      pad: float = 0.0) -> GridDensity:
    """Sample a one-dimensional density on a uniform grid of spacing ``h``.

    The window covers the support (compact case) or the region outside which
    the envelope of p^power is below ``tail_tol``; ``pad`` is added on both
    sides.  Grid points are aligned on multiples of ``h``.
    """
    if d.dim != 1:
        raise DomainError("grids are one-dimensional")
    if isinstance(d, GridDensity):
        return d
    sup = d.support
    if sup.kind == "interval":
        lo, hi = sup.lower, sup.upper
    else:
        prof = d.profile
        R = prof.decay.truncation(tail_tol, q=power)
        half = abs(d.L[0, 0]) * R
        c = float(d.center[0])
        lo, hi = c - half, c + half
    lo -= pad
    hi += pad
    i0 = math.floor(lo / h)
    i1 = math.ceil(hi / h)
    x = np.arange(i0, i1 + 1) * h
    p = d.value(x)
    dp = d.gradient(x)
    params = dict(d.params)
    params["source"] = d.family
    return GridDensity(x, p, dp, "grid_1d", params, check_uniform=False)


# --------------------------------------------------------------------------
# registry


FAMILIES = {
    "cos_power": cos_power,
    "cosh_power": cosh_power,
    "sech_power": sech_power,
    "two_sided_exp": two_sided_exp,
    "uniform_interval": uniform_interval,
    "gaussian": gaussian,
    "max_renyi": max_renyi,
    "barenblatt": barenblatt,
    "sobolev_extremal": sobolev_extremal,
    "G_1d": G_1d,
    "G_nd": G_nd,
    "g_lambda": g_lambda,
}

_ALIASES = {"lambda": "lam", "lam": "lam", "sigma2": "cov", "var": "cov", "variance": "cov", "dim": "n"}


def make(family_tag: str, params: Optional[dict] = None, **kwargs) -> Density:
    """Build a density from a family tag and parameter mapping."""
    merged = dict(params or {})
    merged.update(kwargs)
    if family_tag == "profile_density":
        from .profiles import profile_density, solve_profile

        n = int(merged.pop("n", merged.pop("dim", 1)))
        sol = solve_profile(n, float(merged.pop("alpha")))
        return profile_density(sol, **merged)
    if family_tag not in FAMILIES:
        raise DomainError(f"unknown family {family_tag!r}; known: {sorted(FAMILIES)}")
    args = {_ALIASES.get(k, k): v for k, v in merged.items()}
    try:
        return FAMILIES[family_tag](**args)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {family_tag}: {exc}") from exc
