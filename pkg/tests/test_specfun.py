import math

import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, settings, strategies as st

from mathieuseries.errors import DomainError
from mathieuseries.specfun import (
    BESSEL_ATOL,
    bernoulli_over_factorial,
    bessel_j,
    clausen2,
    gamma_fn,
    normalized_bessel,
    upper_incomplete_gamma_bound,
    zeta_fn,
    zeta_with_error,
)
from oracles import besselj_ref, clausen_ref, gamma_ref, zeta_ref


# -- gamma -------------------------------------------------------------------

@pytest.mark.parametrize("x", [0.01, 0.3, 0.5, 1.0, 1.5, 2.5, 3.7, 7.0, 10.5, 11.2, 23.5, 57.3, 120.0, 169.9])
def test_gamma_against_mpmath(x):
    ref = float(gamma_ref(x))
    assert gamma_fn(x) == pytest.approx(ref, rel=1e-13)


def test_gamma_half_integer_closed_form():
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma_fn(3.5) == pytest.approx(15.0 * math.sqrt(math.pi) / 8.0, rel=1e-14)


def test_gamma_integer_is_factorial():
    for n in range(1, 20):
        assert gamma_fn(float(n)) == math.factorial(n - 1)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5, float("nan")])
def test_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        gamma_fn(x)


def test_gamma_overflow():
    with pytest.raises(OverflowError):
        gamma_fn(171.5)


@given(st.floats(0.05, 100.0))
@settings(max_examples=80, deadline=None)
def test_gamma_recurrence(x):
    assert gamma_fn(x + 1.0) == pytest.approx(x * gamma_fn(x), rel=5e-13)


# -- zeta --------------------------------------------------------------------

@pytest.mark.parametrize("s", [1.001, 1.1, 1.5, 2.0, 3.0, 3.5, 5.0, 11.0, 30.0, 61.0])
def test_zeta_against_mpmath(s):
    value, err = zeta_with_error(s)
    ref = float(zeta_ref(s))
    assert abs(value - ref) <= max(err, 1e-12 * ref)
    assert value == pytest.approx(ref, rel=1e-12)


def test_zeta_known_values():
    assert zeta_fn(2.0) == pytest.approx(math.pi ** 2 / 6, rel=1e-14)
    assert zeta_fn(4.0) == pytest.approx(math.pi ** 4 / 90, rel=1e-14)
    assert zeta_fn(3.0) == pytest.approx(1.2020569031595942, rel=1e-14)


@pytest.mark.parametrize("s", [1.0, 0.5, -2.0])
def test_zeta_rejects_s_le_1(s):
    with pytest.raises(DomainError):
        zeta_fn(s)


@given(st.floats(1.05, 40.0), st.floats(0.01, 5.0))
@settings(max_examples=60, deadline=None)
def test_zeta_decreasing_towards_one(s, ds):
    assert zeta_fn(s + ds) <= zeta_fn(s)
    assert zeta_fn(s) > 1.0


def test_bernoulli_ratio():
    assert bernoulli_over_factorial(1) == pytest.approx(1.0 / 12.0)
    assert bernoulli_over_factorial(2) == pytest.approx(-1.0 / 720.0)


def test_incomplete_gamma_bound_is_upper():
    for a, x in [(0.5, 1.0), (1.0, 2.0), (2.5, 3.0), (4.0, 10.0), (7.3, 50.0)]:
        exact = sc.gammaincc(a, x) * sc.gamma(a)
        bound = upper_incomplete_gamma_bound(a, x)
        assert bound >= exact * (1.0 - 1e-14)  # exact for integer a
        assert bound <= 3.0 * exact + 1e-300 or x < a


# -- Bessel ------------------------------------------------------------------

NU = [0.0, 0.5, 1.0, 1.5, 2.5, 3.0, 4.5, 7.25]
X = [1e-3, 0.5, 3.0, 11.9, 12.1, 18.0, 24.9, 25.1, 40.0, 150.0, 1000.0]


@pytest.mark.parametrize("nu", NU)
def test_bessel_against_scipy(nu):
    x = np.array(X)
    got = bessel_j(nu, x)
    ref = sc.jv(nu, x)
    assert np.max(np.abs(got - ref)) <= BESSEL_ATOL


@pytest.mark.parametrize("nu,x", [(0.0, 2.404825557695773), (1.5, 30.0), (10.0, 60.0), (2.5, 13.0)])
def test_bessel_against_mpmath(nu, x):
    assert abs(bessel_j(nu, x) - float(besselj_ref(nu, x))) <= BESSEL_ATOL


def test_bessel_half_order_closed_form():
    x = np.linspace(0.1, 60.0, 200)
    expected = np.sqrt(2.0 / (math.pi * x)) * np.sin(x)
    assert np.max(np.abs(bessel_j(0.5, x) - expected)) <= BESSEL_ATOL


def test_bessel_shapes_and_zero():
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(2.0, 0.0) == 0.0
    out = bessel_j(1.0, np.ones((2, 3)))
    assert out.shape == (2, 3)
    assert isinstance(bessel_j(1.0, 2.0), float)


def test_bessel_domain():
    with pytest.raises(DomainError):
        bessel_j(-1.0, 1.0)
    with pytest.raises(DomainError):
        bessel_j(1.0, -1.0)


@given(st.floats(0.0, 6.0), st.floats(0.1, 80.0))
@settings(max_examples=80, deadline=None)
def test_bessel_three_term_recurrence(nu, x):
    lhs = bessel_j(nu, x) + bessel_j(nu + 2.0, x)
    rhs = 2.0 * (nu + 1.0) / x * bessel_j(nu + 1.0, x)
    assert abs(lhs - rhs) <= 4.0 * BESSEL_ATOL * (1.0 + 2.0 * (nu + 1.0) / x)


@given(st.floats(0.0, 5.0), st.floats(0.0, 100.0))
@settings(max_examples=80, deadline=None)
def test_bessel_bounded(nu, x):
    assert abs(bessel_j(nu, x)) <= 1.0 + BESSEL_ATOL


def test_normalized_bessel():
    assert normalized_bessel(1.5, 0.0) == 1.0
    for mu, x in [(0.5, 3.0), (1.0, 20.0), (2.5, 7.0)]:
        expected = 2.0 ** mu * math.gamma(mu + 1.0) * sc.jv(mu, x) / x ** mu
        assert normalized_bessel(mu, x) == pytest.approx(expected, abs=1e-11)
    # negative order above -1 goes through the recurrence
    assert normalized_bessel(-0.5, 20.0) == pytest.approx(math.cos(20.0), abs=1e-10)


# -- Clausen -----------------------------------------------------------------

@pytest.mark.parametrize("theta", [1e-6, 0.1, 1.0, math.pi / 3, 2.0, math.pi - 1e-3, 4.0, 6.0, 10.0, -2.5])
def test_clausen_against_mpmath(theta):
    assert clausen2(theta) == pytest.approx(float(clausen_ref(theta)), abs=2e-15)


def test_clausen_special_values():
    assert clausen2(math.pi) == pytest.approx(0.0, abs=1e-15)
    assert clausen2(math.pi / 2) == pytest.approx(0.915965594177219015, rel=1e-14)  # Catalan
    assert clausen2(math.pi / 3) == pytest.approx(1.0149416064096536, rel=1e-14)


def test_clausen_array():
    th = np.linspace(0.1, 6.0, 7)
    out = clausen2(th)
    assert out.shape == th.shape
    assert np.allclose(out, [clausen2(float(t)) for t in th], rtol=0, atol=0)


@given(st.floats(-50.0, 50.0))
@settings(max_examples=80, deadline=None)
def test_clausen_odd_and_periodic(theta):
    assert clausen2(-theta) == -clausen2(theta)
    # argument reduction costs ~ulp(theta) in the argument, times |log| slope
    assert clausen2(theta + 2 * math.pi) == pytest.approx(clausen2(theta), abs=1e-13)
