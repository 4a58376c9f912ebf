import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renyifisher.errors import DomainError
from renyifisher.special_functions import (
    beta,
    gamma,
    gamma_ratio_gap_check,
    log_beta,
    log_gamma,
    log_gamma_ratio,
    nagy_w,
)

mpmath.mp.dps = 40


@pytest.mark.parametrize("x, expected", [(0.5, 0.5723649429247001), (5.0, math.log(24.0)), (1.0, 0.0), (2.0, 0.0)])
def test_log_gamma_reference_points(x, expected):
    assert log_gamma(x) == pytest.approx(expected, rel=1e-13, abs=1e-15)


def test_log_gamma_at_two_and_a_half_matches_high_precision():
    assert log_gamma(2.5) == pytest.approx(math.log(1.3293403881791355), rel=1e-13)
    assert log_gamma(2.5) == pytest.approx(float(mpmath.loggamma(2.5)), rel=1e-13)


@pytest.mark.parametrize("x", [1e-8, 1e-3, 0.1, 0.77, 0.99, 1.01, 1.3, 1.8, 1.999, 2.2, 3.7, 17.5, 123.4, 1e5, 1e12])
def test_log_gamma_against_mpmath(x):
    ref = float(mpmath.loggamma(x))
    assert abs(log_gamma(x) - ref) <= 1e-13 * max(abs(ref), 1e-3) + 1e-16


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5, math.nan])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-3.0, max_value=math.log10(50.0)))
def test_gamma_recurrence(logx):
    x = 10.0 ** logx
    assert log_gamma(x + 1.0) - log_gamma(x) == pytest.approx(math.log(x), rel=1e-12, abs=1e-13)


def test_gamma_and_beta_values():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert beta(2.0, 3.0) == pytest.approx(1.0 / 12.0, rel=1e-14)
    assert log_beta(0.5, 0.5) == pytest.approx(math.log(math.pi), rel=1e-14)
    assert log_gamma_ratio(7.5, 2.25) == pytest.approx(float(mpmath.loggamma(7.5) - mpmath.loggamma(2.25)), rel=1e-13)


def test_nagy_w_convention_and_values():
    assert nagy_w(3.7, 0.0) == 1.0
    assert nagy_w(0.0, 2.2) == 1.0
    assert nagy_w(1.0, 1.0) == pytest.approx(0.5, rel=1e-14)
    for u in (0.3, 1.0, 4.5, 20.0):
        assert nagy_w(u, 1.0) == pytest.approx((1.0 + 1.0 / u) ** (-u), rel=1e-13)


def test_nagy_w_against_mpmath():
    u, v = mpmath.mpf("2.3"), mpmath.mpf("0.7")
    ref = mpmath.gamma(1 + u + v) / (mpmath.gamma(1 + u) * mpmath.gamma(1 + v)) * (u / (u + v)) ** u * (v / (u + v)) ** v
    assert nagy_w(2.3, 0.7) == pytest.approx(float(ref), rel=1e-13)


def test_nagy_w_domain():
    with pytest.raises(DomainError):
        nagy_w(-1.0, 0.5)


@settings(max_examples=150, deadline=None)
@given(st.floats(min_value=0.01, max_value=50.0), st.floats(min_value=0.001, max_value=0.999))
def test_nagy_w_two_sided_bound(u, v):
    w = nagy_w(u, v)
    lower = (1.0 + 1.0 / u) ** (-u)
    assert 1.0 > w > lower * (1 - 1e-13)
    assert lower > 1.0 / math.e


def test_nagy_w_continuous_as_v_vanishes():
    gaps = [abs(nagy_w(2.0, v) - 1.0) for v in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-6


def test_gamma_ratio_gap_examples():
    m = gamma_ratio_gap_check(1.0, 0.5)
    assert m == pytest.approx(2.0 / math.sqrt(math.pi) - math.sqrt(1.25), rel=1e-12)
    assert m > 0
    assert gamma_ratio_gap_check(10.0, 0.5) > 0
    assert gamma_ratio_gap_check(0.1, 0.9) > 0


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e3), st.floats(min_value=0.01, max_value=0.99))
def test_gamma_ratio_gap_positive(x, s):
    assert gamma_ratio_gap_check(x, s) > -1e-12 * x


@pytest.mark.parametrize("x, s", [(0.0, 0.5), (1.0, 0.0), (1.0, 1.0)])
def test_gamma_ratio_gap_domain(x, s):
    with pytest.raises(DomainError):
        gamma_ratio_gap_check(x, s)
