import math

import numpy as np
import pytest

from renyifisher import densities as D
from renyifisher import functionals as F
from renyifisher.constants import r_closed_form_1d
from renyifisher.errors import DomainError, ResolutionError
from renyifisher.heatflow import (
    concavity_probe,
    epi_gaussian_check,
    evolve,
    secant_witness,
    time_derivative,
    to_grid,
    trace,
)

PI = math.pi
H = 2e-3


def _mass(g):
    return float(np.sum(0.5 * (g.p[1:] + g.p[:-1])) * g.h)


def _gauss_pdf(x, var):
    return np.exp(-0.5 * x * x / var) / math.sqrt(2 * PI * var)


def test_gaussian_semigroup_pointwise():
    g = evolve(D.gaussian(1, 1.0), 1.0, h=H)
    assert np.max(np.abs(g.p - _gauss_pdf(g.x, 2.0))) <= 1e-8


@pytest.mark.parametrize("d", [D.cos_power(2.0), D.two_sided_exp(), D.uniform_interval(1.0)], ids=repr)
def test_mass_conserved(d):
    g = evolve(d, 0.3, h=H)
    assert _mass(g) == pytest.approx(1.0, abs=1e-10)
    assert np.all(g.p >= 0)


def test_semigroup_property():
    d = D.cos_power(2.0)
    a = evolve(evolve(d, 0.2, h=H), 0.3)
    b = evolve(d, 0.5, h=H)
    pb = np.interp(a.x, b.x, b.p)
    assert np.max(np.abs(a.p - pb)) <= 1e-7


def test_resolution_guard():
    with pytest.raises(ResolutionError):
        evolve(D.cos_power(2.0), 1e-4, h=0.01)
    with pytest.raises(DomainError):
        evolve(D.cos_power(2.0), -1.0, h=H)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_gaussian_trace_closed_form(alpha):
    ts = [0.1, 0.5, 1.0]
    tr = trace(D.gaussian(1, 1.0), alpha, ts, h=H)
    shift = 0.5 if alpha == 1.0 else math.log(alpha) / (2 * (alpha - 1))
    for t, h, I, dh in zip(tr.t_grid, tr.h, tr.I, tr.dh_dt_fd):
        assert h == pytest.approx(0.5 * math.log(2 * PI * (1 + t)) + shift, abs=1e-8)
        assert I == pytest.approx(1 / (1 + t), rel=1e-6)
        assert dh == pytest.approx(1 / (2 * (1 + t)), abs=1e-6)


@pytest.mark.parametrize("d", [D.gaussian(1, 1.0), D.cos_power(2.0), D.two_sided_exp()], ids=repr)
@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_de_bruijn_residual(d, alpha):
    tr = trace(d, alpha, np.linspace(0.05, 1.0, 6), h=H)
    assert np.max(np.abs(tr.residual)) <= 1e-4
    assert all(r["residual"] == pytest.approx(r["dh_dt_fd"] - r["I"] / 2) for r in tr.rows())


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.0])
def test_entropy_increases_along_flow(alpha):
    tr = trace(D.cos_power(2.0), alpha, [0.05, 0.2, 0.5, 1.0], h=H)
    assert np.all(np.diff(tr.h) > 0)
    assert np.all(tr.N > 0)


@pytest.mark.parametrize("alpha", [0.5, 2.0, 3.0])
def test_epi_gaussian_margin_on_gaussian(alpha):
    ts = [0.25, 1.0, 2.0]
    rep = epi_gaussian_check(D.gaussian(1, 1.0), alpha, ts, h=H)
    r = r_closed_form_1d(alpha).value
    expected = [2 * PI * t * (alpha ** (1 / (alpha - 1)) - r / (2 * PI)) for t in ts]
    assert np.allclose(rep.details["margins"], expected, rtol=1e-6)
    assert rep.passed and rep.margin > 0


def test_epi_gaussian_equality_at_alpha_one():
    rep = epi_gaussian_check(D.gaussian(1, 1.0), 1.0, [0.5, 1.0, 3.0], h=H)
    assert rep.passed
    assert max(abs(m) for m in rep.details["margins"]) <= 1e-6 * rep.details["N0"]


def test_epi_margin_vanishes_at_the_extremizer():
    ratios = []
    for t in (0.02, 0.005):
        rep = epi_gaussian_check(D.cos_power(2.0), 2.0, [t], h=5e-4)
        assert rep.passed
        ratios.append(rep.margin / t)
    # margin/t shrinks with t: equality of slopes at t = 0
    assert ratios[1] < ratios[0]


def test_concavity_probe_linear_at_alpha_one():
    est = concavity_probe(D.gaussian(1, 1.0), 1.0, 0.5, h=H)
    assert abs(est.value) <= 1e-4


def test_secant_witness_beats_initial_slope():
    rep = secant_witness(D.cos_power(2.0), 2.0, T=100.0, h=0.01)
    assert rep.passed and rep.margin > 0
    assert rep.lhs <= rep.details["asymptotic_slope"]


def test_third_derivative_of_quadratic_fisher():
    # hat I_2 of N(0, s) is 1/(2 sqrt(pi) s^(3/2))
    t0 = 0.5
    est = time_derivative(D.gaussian(1, 1.0), t0, lambda g: F.tsallis_fisher(g, 2.0), order=3, h=H)
    s = 1 + t0
    exact = (-1.5) * (-2.5) * (-3.5) * s ** -4.5 / (2 * math.sqrt(PI))
    assert est.value == pytest.approx(exact, rel=1e-3)


def test_first_derivative_forward_at_zero():
    est = time_derivative(D.gaussian(1, 1.0), 0.0, lambda g: F.renyi_entropy(g, 2.0), order=1, h=H)
    assert est.value == pytest.approx(0.5, rel=1e-4)


def test_derivative_order_guard():
    with pytest.raises(DomainError):
        time_derivative(D.gaussian(1, 1.0), 0.5, lambda g: 0.0, order=4, h=H)


def test_to_grid_is_identity_on_grids():
    g = to_grid(D.cos_power(2.0), h=H)
    assert to_grid(g) is g
