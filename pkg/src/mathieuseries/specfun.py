"""Real-argument special functions: Gamma, Riemann zeta, Bessel J, Clausen.

Everything here works in double precision and is written so that each
routine can be checked against an independent closed form or brute-force
sum.  The Bessel routine and the Clausen function accept numpy arrays as
well as scalars because the quadrature code evaluates them node-wise in
bulk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, DomainError

EPS = np.finfo(float).eps
TWO_PI = 2.0 * math.pi

GAMMA_RTOL = 1e-13
ZETA_RTOL = 1e-12
BESSEL_ATOL = 1e-11

# B_2, B_4, ..., B_20
BERNOULLI_EVEN = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
)


def bernoulli_over_factorial(k: int) -> float:
    """B_{2k} / (2k)! as a float, for 1 <= k <= 10."""
    return float(BERNOULLI_EVEN[k - 1] / math.factorial(2 * k))


@dataclass(frozen=True)
class Accuracy:
    abs_tol: float
    achieved: float

    def __post_init__(self):
        if self.abs_tol < 0 or self.achieved < 0:
            raise DomainError("accuracy fields must be non-negative")


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(TWO_PI)


def _lanczos(x: float) -> float:
    # valid for x >= 0.5
    x -= 1.0
    a = _LANCZOS_COEF[0]
    t = x + _LANCZOS_G + 0.5
    for i in range(1, 9):
        a += _LANCZOS_COEF[i] / (x + i)
    # split the power so that t**(x+0.5) does not overflow near x = 170
    h = t ** (0.5 * (x + 0.5))
    return _SQRT_2PI * h * (h * math.exp(-t)) * a


def gamma_fn(x: float) -> float:
    """Gamma function for 0 < x <= 170."""
    if not x > 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    if x > 170.0:
        raise OverflowError(f"gamma_fn overflows for x > 170, got {x!r}")
    if x == math.floor(x) and x <= 23:
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * _lanczos(1.0 - x))
    if x > 11.0:
        # the fixed coefficient set loses accuracy for large x; step down
        n = int(x) - 10
        base = x - n
        return _lanczos(base) * math.prod(base + j for j in range(n))
    return _lanczos(x)


# ---------------------------------------------------------------------------
# Riemann zeta
# ---------------------------------------------------------------------------


def _zeta_em(s: float, n_direct: int, n_corr: int = 6) -> tuple[float, float]:
    """Euler-Maclaurin value of zeta(s) and a bound on the remainder.

    For x**-s every derivative has constant sign, so the remainder after
    n_corr Bernoulli terms is bounded by the first omitted term.
    """
    n = float(n_direct)
    parts = [k ** -s for k in range(n_direct - 1, 0, -1)]
    parts.append(n ** (1.0 - s) / (s - 1.0))
    parts.append(0.5 * n ** -s)
    rising = s  # s (s+1) ... (s+2k-2)
    power = n ** (-s - 1.0)
    for k in range(1, n_corr + 1):
        parts.append(bernoulli_over_factorial(k) * rising * power)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= n * n
    remainder = abs(bernoulli_over_factorial(n_corr + 1) * rising * power)
    return math.fsum(parts), remainder


def zeta_with_error(s: float) -> tuple[float, float]:
    """zeta(s) for real s > 1 together with an absolute error bound."""
    if not s > 1.0:
        raise DomainError(f"zeta_fn requires s > 1, got {s!r}")
    n_direct = 20
    while True:
        value, rem = _zeta_em(s, n_direct)
        if rem <= 1e-16 * value or n_direct >= 5120:
            break
        n_direct *= 2
    return value, rem + 4.0 * EPS * value


def zeta_fn(s: float) -> float:
    """Riemann zeta function for real s > 1 (Euler-Maclaurin, B_2..B_12)."""
    return zeta_with_error(s)[0]


# ---------------------------------------------------------------------------
# Upper incomplete gamma (bound only; used for quadrature tails)
# ---------------------------------------------------------------------------


def upper_incomplete_gamma_bound(a: float, x: float) -> float:
    """Rigorous upper bound on Gamma(a, x) = int_x^inf t**(a-1) e**-t dt.

    Uses Gamma(a+1, x) = a Gamma(a, x) + x**a e**-x to step a down to
    a0 in (0, 1], where Gamma(a0, x) <= x**(a0-1) e**-x.
    """
    if a <= 0 or x <= 0:
        raise DomainError("upper_incomplete_gamma_bound needs a > 0, x > 0")
    n = max(0, math.ceil(a - 1.0))
    a0 = a - n
    value = math.exp((a0 - 1.0) * math.log(x) - x)
    for j in range(n):
        aj = a0 + j
        value = aj * value + math.exp(aj * math.log(x) - x)
    return value


# ---------------------------------------------------------------------------
# Bessel J_nu
# ---------------------------------------------------------------------------

SERIES_MAX_X = 12.0
HANKEL_MIN_X = 25.0


def _bessel_series(nu: float, x: np.ndarray) -> np.ndarray:
    half = 0.5 * x
    with np.errstate(divide="ignore"):
        if nu == 0.0:
            term = np.ones_like(x)
        else:
            term = np.where(x > 0, np.exp(nu * np.log(np.where(x > 0, half, 1.0)) - math.lgamma(nu + 1.0)), 0.0)
    total = term.copy()
    q = half * half
    for k in range(1, 200):
        term = -term * q / (k * (nu + k))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total) + 1e-300):
            break
    return total


def _bessel_hankel(nu: float, x: np.ndarray) -> np.ndarray:
    mu4 = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 60):
        term = term * (mu4 - (2 * k - 1) ** 2) / (8.0 * k * x)
        mag = np.abs(term)
        active &= mag <= prev
        prev = mag
        if k % 2 == 0:
            p += np.where(active, (-1) ** (k // 2) * term, 0.0)
        else:
            q += np.where(active, (-1) ** ((k - 1) // 2) * term, 0.0)
        if not np.any(active & (mag > 1e-18)):
            break
    phase = (0.5 * nu + 0.25) * math.pi
    cp, sp = math.cos(phase), math.sin(phase)
    cx, sx = np.cos(x), np.sin(x)
    cos_chi = cx * cp + sx * sp
    sin_chi = sx * cp - cx * sp
    return np.sqrt(2.0 / (math.pi * x)) * (p * cos_chi - q * sin_chi)


def _bessel_miller(nu: float, x: np.ndarray) -> np.ndarray:
    """Backward recurrence normalised by (x/2)**nu = sum_j c_j J_{nu+2j}(x)."""
    xmax = float(np.max(x))
    m = int(xmax + 40 + 12 * math.sqrt(xmax))
    m += m % 2
    j = np.arange(m // 2 + 1, dtype=float)
    coef = np.empty_like(j)
    coef[0] = math.exp(math.lgamma(nu + 1.0))
    lg = np.array([math.lgamma(nu + jj) - math.lgamma(jj + 1.0) for jj in j[1:]])
    coef[1:] = (nu + 2.0 * j[1:]) * np.exp(lg)
    f_up = np.zeros_like(x)
    f = np.full_like(x, 1e-280)
    norm = coef[m // 2] * f
    for k in range(m, 0, -1):
        f_down = 2.0 * (nu + k) / x * f - f_up
        f_up, f = f, f_down
        if (k - 1) % 2 == 0:
            norm = norm + coef[(k - 1) // 2] * f
        big = (np.abs(f) > 1e150) | (np.abs(norm) > 1e250)
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            f *= scale
            f_up *= scale
            norm *= scale
    return f * np.exp(nu * np.log(0.5 * x)) / norm


def _bessel_array(nu: float, x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    hankel_from = max(HANKEL_MIN_X, 2.0 * nu * nu)
    low = x <= SERIES_MAX_X
    high = x >= hankel_from
    mid = ~(low | high)
    if np.any(low):
        out[low] = _bessel_series(nu, x[low])
    if np.any(high):
        out[high] = _bessel_hankel(nu, x[high])
    if np.any(mid):
        out[mid] = _bessel_miller(nu, x[mid])
    return out


def bessel_j(nu: float, x):
    """Bessel function of the first kind J_nu(x) for nu >= 0, x >= 0.

    Three regimes: ascending series for x <= 12, Hankel asymptotics for
    x >= max(25, 2 nu**2) truncated at the smallest term, and Miller's
    backward recurrence in between.  Accepts a scalar or an array for x.
    """
    if nu < 0:
        raise DomainError(f"bessel_j requires nu >= 0, got {nu!r}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("bessel_j requires x >= 0")
    if arr.ndim == 0:
        return float(_bessel_array(float(nu), arr.reshape(1))[0])
    return _bessel_array(float(nu), arr.ravel()).reshape(arr.shape)


def normalized_bessel(mu: float, x: float) -> float:
    """2**mu Gamma(mu+1) J_mu(x) / x**mu, equal to 1 at x = 0.

    Checks the bound |value| <= 1 (valid for mu > -1/2) at runtime.
    """
    if not mu > -1.0:
        raise DomainError(f"normalized_bessel requires mu > -1, got {mu!r}")
    ax = abs(float(x))
    if ax <= SERIES_MAX_X:
        # sum_k (-x**2/4)**k / (k! (mu+1)_k)
        q = 0.25 * ax * ax
        term = total = 1.0
        for k in range(1, 200):
            term *= -q / (k * (mu + k))
            total += term
            if abs(term) <= 1e-17 * abs(total):
                break
        value = total
    else:
        if mu >= 0:
            jmu = bessel_j(mu, ax)
        else:
            jmu = 2.0 * (mu + 1.0) / ax * bessel_j(mu + 1.0, ax) - bessel_j(mu + 2.0, ax)
        value = math.exp(mu * math.log(2.0) + math.lgamma(mu + 1.0) - mu * math.log(ax)) * jmu
    if mu > -0.5 and abs(value) > 1.0 + 1e-9:
        raise AccuracyError(f"normalized Bessel bound violated: mu={mu}, x={x}, value={value}")
    return value


# ---------------------------------------------------------------------------
# Clausen function Cl_2
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _clausen_coefficients() -> np.ndarray:
    # zeta(2n) / (n (2n+1) (2 pi)**(2n)), n = 1..30
    return np.array([zeta_fn(2.0 * n) / (n * (2 * n + 1) * TWO_PI ** (2 * n)) for n in range(1, 31)])


def _clausen_reduced(theta: np.ndarray) -> np.ndarray:
    # theta in [0, pi]
    coef = _clausen_coefficients()
    t2 = theta * theta
    acc = np.zeros_like(theta)
    for c in coef[::-1]:
        acc = acc * t2 + c
    with np.errstate(divide="ignore", invalid="ignore"):
        log_part = np.where(theta > 0, theta * np.log(np.where(theta > 0, theta, 1.0)), 0.0)
    return theta - log_part + theta * t2 * acc


def clausen2(theta):
    """Clausen function Cl_2(theta) = sum sin(n theta) / n**2."""
    arr = np.asarray(theta, dtype=float)
    sign = np.where(arr < 0, -1.0, 1.0)
    red = np.mod(np.abs(arr), TWO_PI)
    flip = red > math.pi
    red = np.where(flip, TWO_PI - red, red)
    out = sign * np.where(flip, -1.0, 1.0) * _clausen_reduced(red)
    if out.ndim == 0:
        return float(out)
    return out
