import math

import pytest
from hypothesis import given, settings, strategies as st

from mathieuseries.errors import DomainError
from mathieuseries.mathieu import (
    Evaluation,
    MathieuPoint,
    Method,
    mathieu_s,
    mathieu_s_deriv_mu,
    mathieu_s_deriv_r,
    tail_bound,
)
from mathieuseries.specfun import zeta_fn
from oracles import s_ref

POINTS = [(0.25, 0.5), (0.5, 1.0), (1.0, 0.1), (1.0, 1.0), (1.0, 7.0), (1.5, 2.0), (2.0, 0.5),
          (2.5, 4.0), (3.0, 25.0), (1.0, 40.0), (0.3, 100.0), (5.0, 0.01), (0.05, 3.0)]


@pytest.mark.parametrize("mu,r", POINTS)
def test_against_hurwitz_oracle(mu, r):
    ev = mathieu_s(MathieuPoint(mu, r), 1e-12)
    ref = float(s_ref(mu, r))
    assert abs(ev.value - ref) <= ev.err_bound + 1e-15 * abs(ref)
    assert ev.err_bound <= 1e-11


@pytest.mark.parametrize("mu,r", POINTS[:8])
def test_rtol_is_relative(mu, r):
    ev = mathieu_s(MathieuPoint(mu, r), math.inf, rtol=1e-9)
    ref = float(s_ref(mu, r))
    assert abs(ev.value - ref) <= 1e-9 * ref


def test_mathieu_series_known_value():
    # S(1) = sum 2n/(n^2+1)^2
    ev = mathieu_s(MathieuPoint(1.0, 1.0), 1e-13)
    assert ev.value == pytest.approx(0.794233542759319, abs=1e-13)
    assert ev.method is Method.DIRECT_SUM


@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0, 3.0, 5.0])
def test_r_zero_is_twice_zeta(mu):
    ev = mathieu_s(MathieuPoint(mu, 0.0))
    assert ev.method is Method.CLOSED_FORM
    assert ev.value == pytest.approx(2.0 * zeta_fn(2 * mu + 1), rel=1e-15)


def test_routes_are_reported():
    routes = {mathieu_s(MathieuPoint(mu, r), 1e-12).details["route"]
              for mu, r in [(3.0, 1.0), (0.25, 1.0), (1.0, 50.0)]}
    assert routes == {"truncated", "euler_maclaurin", "asymptotic"}


def test_tail_bound_dominates_true_tail():
    for mu, r, N in [(1.0, 1.0, 10), (0.5, 3.0, 5), (2.0, 10.0, 3), (1.0, 10.0, 20)]:
        p = MathieuPoint(mu, r)
        exact = float(s_ref(mu, r)) - sum(2 * n / (n * n + r * r) ** (mu + 1) for n in range(1, N + 1))
        bound = tail_bound(p, N)
        assert exact <= bound
        assert bound <= 3.0 * exact + 2 * N / (N * N + r * r) ** (mu + 1)


def test_tail_bound_rejects_small_N():
    with pytest.raises(DomainError):
        tail_bound(MathieuPoint(1.0, 1.0), 0)


@pytest.mark.parametrize("mu,r", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.1), (float("nan"), 1.0)])
def test_point_domain(mu, r):
    with pytest.raises(DomainError):
        MathieuPoint(mu, r)


def test_tol_must_be_positive():
    with pytest.raises(DomainError):
        mathieu_s(MathieuPoint(1.0, 1.0), 0.0)


def test_evaluation_rejects_negative_error():
    with pytest.raises(DomainError):
        Evaluation(1.0, -1.0, Method.DIRECT_SUM, 1)


@pytest.mark.parametrize("mu,r", [(1.0, 0.25), (2.0, 1.0), (4.0, 8.0), (0.5, 2.0)])
def test_deriv_r_closed_form(mu, r):
    d = mathieu_s_deriv_r(MathieuPoint(mu, r), 1e-12)
    expected = -2.0 * r * (mu + 1.0) * float(s_ref(mu + 1.0, r))
    assert d.value == pytest.approx(expected, rel=1e-11)
    assert mathieu_s_deriv_r(MathieuPoint(mu, 0.0)).value == 0.0


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("mu,r", [(1.0, 1.0), (0.5, 0.1), (2.0, 3.0)])
def test_deriv_mu_against_oracle(mu, r, m):
    d = mathieu_s_deriv_mu(MathieuPoint(mu, r), m, 1e-11)
    ref = float(s_ref(mu, r, m))
    assert math.copysign(1.0, d.value) == (-1.0) ** m
    assert d.value == pytest.approx(ref, rel=1e-9)


def test_deriv_mu_order_validation():
    for m in (0, -1, 1.5):
        with pytest.raises(DomainError):
            mathieu_s_deriv_mu(MathieuPoint(1.0, 1.0), m)


@given(st.floats(0.1, 6.0), st.floats(0.0, 30.0), st.floats(0.01, 3.0))
@settings(max_examples=60, deadline=None)
def test_decreasing_in_r_and_mu(mu, r, dr):
    a = mathieu_s(MathieuPoint(mu, r), math.inf, rtol=1e-10).value
    assert mathieu_s(MathieuPoint(mu, r + dr), math.inf, rtol=1e-10).value < a
    # mu -> S_mu is decreasing only where every term is below 1 in base
    if r >= 0.0 and 1.0 + r * r > 1.0:
        assert mathieu_s(MathieuPoint(mu + dr, r), math.inf, rtol=1e-10).value < a


@given(st.floats(0.1, 6.0), st.floats(0.01, 50.0))
@settings(max_examples=60, deadline=None)
def test_err_bound_honoured(mu, r):
    tol = 1e-9
    ev = mathieu_s(MathieuPoint(mu, r), tol)
    assert ev.err_bound <= 10 * tol
    tight = mathieu_s(MathieuPoint(mu, r), 1e-13, rtol=1e-14)
    assert abs(ev.value - tight.value) <= ev.err_bound + tight.err_bound + 1e-15 * abs(tight.value)


@given(st.floats(0.1, 4.0), st.floats(0.05, 20.0))
@settings(max_examples=40, deadline=None)
def test_derivative_relation_by_finite_difference(mu, r):
    h = 1e-5 * max(1.0, r)
    p = MathieuPoint(mu, r)
    f = lambda x: mathieu_s(MathieuPoint(mu, x), math.inf, rtol=1e-14).value
    fd = (f(r + h) - f(r - h)) / (2 * h)
    d = mathieu_s_deriv_r(p, math.inf, rtol=1e-13).value
    assert fd == pytest.approx(d, rel=1e-6)
