import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renyifisher.errors import DivergenceError, DomainError
from renyifisher.quadrature import (
    Decay,
    RadialSupport,
    integrate_half_line,
    integrate_interval,
    integrate_line,
    integrate_radial,
    integrate_samples,
    sphere_area,
)


def test_sine_over_half_period():
    r = integrate_interval(np.sin, 0.0, math.pi, 1e-12)
    assert abs(r.value - 2.0) <= 1e-12
    assert r.converged


def test_inverse_square_root_endpoint():
    r = integrate_interval(lambda x: x ** -0.5, 0.0, 1.0, 1e-10, left_exponent=-0.5)
    assert abs(r.value - 2.0) <= 1e-10


def test_cos_squared_normalisation():
    r = integrate_interval(lambda x: (2 / math.pi) * np.cos(x) ** 2, -math.pi / 2, math.pi / 2, 1e-12)
    assert abs(r.value - 1.0) <= 1e-12


def test_reversed_limits_flip_sign():
    assert integrate_interval(np.exp, 1.0, 0.0, 1e-12).value == pytest.approx(-(math.e - 1.0), rel=1e-13)


def test_breakpoint_handles_kink():
    r = integrate_interval(np.abs, -1.0, 2.0, 1e-13, breakpoints=(0.0,))
    assert r.value == pytest.approx(2.5, rel=1e-14)


def test_interval_domain_errors():
    with pytest.raises(DomainError):
        integrate_interval(np.sin, 0.0, math.inf)
    with pytest.raises(DomainError):
        integrate_interval(np.sin, 0.0, 1.0, tol=0.0)


def test_line_gaussian_and_laplace():
    g = integrate_line(lambda x: np.exp(-x * x / 2) / math.sqrt(2 * math.pi), Decay("gaussian", 1.0, 1.0), 1e-12)
    assert abs(g.value - 1.0) <= 1e-12
    e = integrate_line(lambda x: 0.5 * np.exp(-np.abs(x)), Decay("exponential", 1.0, 0.5), 1e-12)
    assert abs(e.value - 1.0) <= 1e-12


def test_line_sech_integral():
    r = integrate_line(lambda x: 1.0 / np.cosh(x), Decay("exponential", 1.0, 2.0), 1e-10)
    assert abs(r.value - math.pi) <= 1e-10


def test_power_tail_mapped_exactly():
    r = integrate_half_line(lambda x: 1.0 / (1.0 + x * x), Decay("power", 2.0, 1.0), 1e-11)
    assert r.value == pytest.approx(math.pi / 2, rel=1e-11)


def test_slow_power_tail_rejected():
    with pytest.raises(DivergenceError):
        integrate_half_line(lambda x: 1.0 / (1.0 + x), Decay("power", 1.0, 1.0), 1e-8)


def test_decay_descriptor_validation():
    with pytest.raises(DomainError):
        Decay("weird", 1.0)
    with pytest.raises(DomainError):
        Decay("exponential", 0.0)


def test_decay_truncation_meets_target():
    d = Decay("exponential", 2.0, 3.0)
    L = d.truncation(1e-12)
    assert d.tail(L) <= 1e-12


def test_radial_ball_volume():
    r = integrate_radial(lambda t: np.ones_like(t), 3, RadialSupport(1.0), 1e-12)
    assert r.value == pytest.approx(4 * math.pi / 3, rel=1e-12)


def test_radial_gaussian_2d():
    r = integrate_radial(lambda t: np.exp(-t * t / 2) / (2 * math.pi), 2, RadialSupport(decay=Decay("gaussian", 1.0)), 1e-12)
    assert abs(r.value - 1.0) <= 1e-11


def test_radial_algebraic_beta_oracle():
    # int_0^inf t^2 (1+t^2)^-3 dt = pi/16
    r = integrate_radial(lambda t: (1 + t * t) ** -3.0, 3, RadialSupport(decay=Decay("power", 6.0)), 1e-12)
    assert r.value == pytest.approx(4 * math.pi * math.pi / 16, rel=1e-11)


def test_radial_one_dimension_is_even_line_integral():
    g = lambda t: np.exp(-t) * (1 + t * t)
    rad = integrate_radial(g, 1, RadialSupport(decay=Decay("exponential", 0.5, 10.0)), 1e-13).value
    half = integrate_half_line(g, Decay("exponential", 0.5, 10.0), 1e-13).value
    assert rad == pytest.approx(2 * half, rel=1e-12)
    assert rad == pytest.approx(6.0, rel=1e-12)


def test_sphere_area_values():
    assert sphere_area(1) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 3.0), st.floats(0.1, 3.0), st.floats(-2.0, 2.0))
def test_linearity(a, b, c):
    f = lambda x: np.exp(-a * x * x)
    g = lambda x: np.cos(b * x + c)
    tol = 1e-11
    both = integrate_interval(lambda x: f(x) + g(x), -1.0, 2.0, tol).value
    sep = integrate_interval(f, -1.0, 2.0, tol).value + integrate_interval(g, -1.0, 2.0, tol).value
    assert abs(both - sep) <= 2 * tol


def test_refinement_monotone():
    errs = [abs(integrate_interval(lambda x: x ** -0.5, 0.0, 1.0, tol, left_exponent=-0.5).value - 2.0)
            for tol in (1e-6, 1e-9, 1e-12)]
    assert errs[1] <= max(errs[0], 1e-15) and errs[2] <= max(errs[1], 1e-15)


def test_trapezoid_samples():
    x = np.linspace(-12, 12, 2401)
    y = np.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    assert integrate_samples(y, x[1] - x[0]) == pytest.approx(1.0, abs=1e-13)
