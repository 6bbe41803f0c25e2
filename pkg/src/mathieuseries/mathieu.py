"""Generalized Mathieu series S_mu(r) = sum_{n>=1} 2n / (n**2 + r**2)**(mu+1).

Values come with a guaranteed truncation bound.  Three evaluation routes
are used, chosen by cost:

* plain summation to the index N where the integral-comparison tail
  drops below tol/2 (when N is small enough to sum directly);
* summation to a cut-off a followed by an Euler-Maclaurin tail, the
  derivatives of the summand at a coming from truncated Taylor jets;
* for large r, the Euler-Maclaurin expansion at 0, an asymptotic series
  in 1/r**2 whose remainder is exponentially small.

The mu-derivatives use the same machinery on the term-wise derivative
2n log(n**2+r**2)**m / (n**2+r**2)**(mu+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import AccuracyError, DomainError
from .specfun import EPS, bernoulli_over_factorial, zeta_with_error

DIRECT_CAP = 20000
ASYMPTOTIC_R = 30.0
EM_ORDER = 8


class Method(str, Enum):
    DIRECT_SUM = "direct_sum"
    BESSEL_INTEGRAL = "bessel_integral"
    EMERSLEBEN = "emersleben"
    LAPLACE_KAPTEYN = "laplace_kapteyn"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class MathieuPoint:
    mu: float
    r: float

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError(f"mu must be > 0, got {self.mu!r}")
        if not self.r >= 0:
            raise DomainError(f"r must be >= 0, got {self.r!r}")


@dataclass(frozen=True)
class Evaluation:
    value: float
    err_bound: float
    method: Method
    terms_or_nodes: int
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.err_bound >= 0:
            raise DomainError("err_bound must be non-negative")

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "err_bound": self.err_bound,
            "method": self.method.value,
            "terms_or_nodes": self.terms_or_nodes,
        }


def _summand(mu: float, r: float, n: float, m: int = 0) -> float:
    u = n * n + r * r
    value = 2.0 * n * u ** (-mu - 1.0)
    if m:
        value *= math.log(u) ** m
    return value


def _integral_from(mu: float, r: float, x: float, m: int = 0) -> float:
    """int_x^inf 2t log(t**2+r**2)**m (t**2+r**2)**(-mu-1) dt in closed form."""
    u = x * x + r * r
    if m == 0:
        return u ** -mu / mu
    y = mu * math.log(u)
    poly = math.fsum(y ** k / math.factorial(k) for k in range(m + 1))
    return math.factorial(m) * u ** -mu * poly / mu ** (m + 1)


def _decreasing_from(mu: float, r: float, m: int, start: int) -> int:
    # summand decreasing for x >= n once u/x**2 + 2m/log(u) < 2(mu+1); both
    # terms fall with x, so the first such integer works for all larger x
    n = max(start, 1)
    while True:
        u = n * n + r * r
        lu = math.log(u)
        if m == 0 or lu > 0:
            if u / (n * n) + (2.0 * m / lu if m else 0.0) < 2.0 * (mu + 1.0):
                return n
        n += 1


def tail_bound(p: MathieuPoint, N: int, m: int = 0) -> float:
    """Upper bound on sum_{n>N} of the (m-th mu-derivative) summand.

    Integral comparison from the first index at which the summand is
    decreasing; terms before that index are added explicitly.
    """
    if N < 1:
        raise DomainError(f"tail_bound requires N >= 1, got {N!r}")
    start = _decreasing_from(p.mu, p.r, m, N)
    head = math.fsum(_summand(p.mu, p.r, float(n), m) for n in range(N + 1, start + 1))
    return head + _integral_from(p.mu, p.r, float(start), m)


def _truncation_index(mu: float, r: float, target: float, m: int, cap: int) -> int | None:
    if m == 0:
        # 1 / (mu (N**2 + r**2)**mu) <= target, solved in closed form
        log_x = -math.log(mu * target) / mu
        if log_x > math.log((cap + 1.0) ** 2 + r * r):
            return None
        x = math.exp(log_x)
        n = max(1, math.ceil(math.sqrt(max(0.0, x - r * r))))
    else:
        n = 1
        while _integral_from(mu, r, float(n), m) > target:
            n *= 2
            if n > cap:
                return None
    p = MathieuPoint(mu, r)
    while tail_bound(p, n, m) > target:
        n += 1 + n // 8
        if n > cap:
            return None
    return n


def _partial_sum(mu: float, r: float, n_max: int, m: int = 0, n_min: int = 1) -> float:
    if n_max < n_min:
        return 0.0
    n = np.arange(n_min, n_max + 1, dtype=float)
    u = n * n + r * r
    terms = 2.0 * n * u ** (-mu - 1.0)
    if m:
        terms *= np.log(u) ** m
    return math.fsum(terms[::-1])


def _rounding(mu: float, m: int, value: float, count: int) -> float:
    return 2.0 * (mu + 4.0 + 2.0 * m) * EPS * abs(value) + 1e-300 * count


# -- Taylor jets -------------------------------------------------------------


def _jet_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: len(a)]


def _summand_jet(mu: float, r: float, x0: float, m: int, order: int) -> np.ndarray:
    """Taylor coefficients about x0 of 2x log(u)**m u**(-mu-1), u = x**2 + r**2."""
    u = np.zeros(order + 1)
    u[0] = x0 * x0 + r * r
    u[1] = 2.0 * x0
    if order >= 2:
        u[2] = 1.0
    alpha = -mu - 1.0
    w = np.zeros(order + 1)
    w[0] = u[0] ** alpha
    for n in range(1, order + 1):
        acc = 0.0
        for k in (1, 2):
            if k <= n:
                acc += ((alpha + 1.0) * k - n) * u[k] * w[n - k]
        w[n] = acc / (n * u[0])
    if m:
        lg = np.zeros(order + 1)
        lg[0] = math.log(u[0])
        for n in range(1, order + 1):
            acc = n * u[n]
            for k in range(max(1, n - 2), n):
                acc -= k * lg[k] * u[n - k]
            lg[n] = acc / (n * u[0])
        power = lg
        for _ in range(m - 1):
            power = _jet_mul(power, lg)
        w = _jet_mul(w, power)
    lin = np.zeros(order + 1)
    lin[0] = 2.0 * x0
    lin[1] = 2.0
    return _jet_mul(lin, w)


def _em_tail(mu: float, r: float, m: int, a: int, order: int = EM_ORDER) -> tuple[float, float]:
    """sum_{n>=a} of the summand by Euler-Maclaurin at a, and an error bound.

    The bound is twice the first omitted correction; a is chosen far
    enough beyond r that the high derivatives keep a constant sign there.
    """
    jet = _summand_jet(mu, r, float(a), m, 2 * order + 1)
    parts = [_integral_from(mu, r, float(a), m), 0.5 * jet[0]]
    for k in range(1, order + 1):
        deriv = math.factorial(2 * k - 1) * jet[2 * k - 1]
        parts.append(-bernoulli_over_factorial(k) * deriv)
    nxt = math.factorial(2 * order + 1) * jet[2 * order + 1]
    bound = 2.0 * abs(bernoulli_over_factorial(order + 1) * nxt)
    return math.fsum(parts), bound


def _em_cutoff(r: float) -> int:
    return max(32, math.ceil(8.0 * r) + 16)


def _asymptotic(mu: float, r: float, order: int = 9) -> tuple[float, float]:
    """Euler-Maclaurin at 0: S ~ 1/(mu r**2mu) - sum_k (B_2k/k) C(-mu-1, k-1) r**(-2mu-2k)."""
    r2 = r * r
    parts = [r2 ** -mu / mu]
    binom = 1.0  # binom(-mu-1, k-1)
    last = 0.0
    for k in range(1, order + 2):
        b2k = bernoulli_over_factorial(k) * math.factorial(2 * k)
        term = -(b2k / k) * binom * r2 ** (-mu - k)
        if k <= order:
            parts.append(term)
        else:
            last = term
        binom *= (-mu - 1.0 - (k - 1)) / k
    return math.fsum(parts), 2.0 * abs(last) + math.exp(-math.pi * r)


def _lower_bound(mu: float, r: float) -> float:
    first = 2.0 * (1.0 + r * r) ** (-mu - 1.0)
    start = max(1, math.ceil(r / math.sqrt(2.0 * mu + 1.0)))
    return max(first, _integral_from(mu, r, float(start)))


def _series(mu: float, r: float, m: int, tol: float) -> tuple[float, float, int, str]:
    """Unsigned sum of the m-th derivative summand, its error bound, work, and route."""
    n = _truncation_index(mu, r, 0.5 * tol, m, DIRECT_CAP)
    if n is not None:
        value = _partial_sum(mu, r, n, m)
        err = tail_bound(MathieuPoint(mu, r), n, m) + _rounding(mu, m, value, n)
        return value, err, n, "truncated"
    if m == 0 and r >= ASYMPTOTIC_R:
        value, err = _asymptotic(mu, r)
        return value, err + _rounding(mu, 0, value, 1), 0, "asymptotic"
    a = _em_cutoff(r)
    tail, tail_err = _em_tail(mu, r, m, a)
    while tail_err > 0.5 * tol and a < DIRECT_CAP:
        a *= 2
        tail, tail_err = _em_tail(mu, r, m, a)
    value = _partial_sum(mu, r, a - 1, m) + tail
    return value, tail_err + _rounding(mu, m, value, a), a, "euler_maclaurin"


def _settle(value: float, err: float, tol: float) -> dict:
    # rounding can put err slightly above a very small tol; past 10x it is an error
    if err <= tol:
        return {}
    if err <= 10.0 * tol:
        return {"rounding_limited": True}
    raise AccuracyError(f"error bound {err:.3g} exceeds 10 x tol = {10.0 * tol:.3g} "
                        f"(|value| = {abs(value):.3g})")


def mathieu_s(p: MathieuPoint, tol: float = 1e-10, *, rtol: float | None = None) -> Evaluation:
    """S_mu(r) with err_bound <= tol.

    With rtol, the absolute tolerance becomes rtol times a lower bound on
    S_mu(r), so the result is accurate relative to its own size.
    """
    if not tol > 0:
        raise DomainError("tol must be > 0")
    mu, r = p.mu, p.r
    if r == 0.0:
        z, z_err = zeta_with_error(2.0 * mu + 1.0)
        return Evaluation(2.0 * z, 2.0 * z_err, Method.CLOSED_FORM, 0)
    if rtol is not None:
        tol = min(tol, rtol * _lower_bound(mu, r))
    value, err, work, route = _series(mu, r, 0, tol)
    details = {"route": route, **_settle(value, err, tol)}
    return Evaluation(value, err, Method.DIRECT_SUM, work, details)


def mathieu_s_deriv_r(p: MathieuPoint, tol: float = 1e-10, *, rtol: float | None = None) -> Evaluation:
    """dS_mu/dr = -2 r (mu+1) S_{mu+1}(r)."""
    if p.r == 0.0:
        return Evaluation(0.0, 0.0, Method.CLOSED_FORM, 0)
    scale = 2.0 * p.r * (p.mu + 1.0)
    inner = mathieu_s(MathieuPoint(p.mu + 1.0, p.r), tol / scale, rtol=rtol)
    return Evaluation(-scale * inner.value, scale * inner.err_bound, inner.method,
                      inner.terms_or_nodes, inner.details)


def mathieu_s_deriv_mu(p: MathieuPoint, m: int, tol: float = 1e-10, *, rtol: float | None = None) -> Evaluation:
    """m-th mu-derivative by term-wise differentiation; its sign is (-1)**m."""
    if m < 1 or int(m) != m:
        raise DomainError(f"derivative order must be an integer >= 1, got {m!r}")
    m = int(m)
    if not tol > 0:
        raise DomainError("tol must be > 0")
    mu, r = p.mu, p.r
    if rtol is not None:
        # the n = 2 term alone is a lower bound on the unsigned sum
        floor = _summand(mu, r, 2.0, m)
        tol = min(tol, rtol * floor)
    value, err, work, route = _series(mu, r, m, tol)
    details = {"route": route, **_settle(value, err, tol)}
    sign = -1.0 if m % 2 else 1.0
    return Evaluation(sign * value, err, Method.DIRECT_SUM, work, details)
