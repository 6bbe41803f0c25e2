"""Integral representations of S_mu(r), the Kapteyn-series kernels, and
the closed-form identities tying them to Gamma and zeta.

Representations
---------------
* Emersleben:   S_1(r) = (1/r) int_0^inf x sin(rx) / (e^x - 1) dx
* Bessel:       S_mu(r) = C_mu(r) int_0^inf x^(mu+1/2) J_(mu-1/2)(rx) / (e^x - 1) dx
* Laplace:      S_mu(r) = c_mu int_0^inf e^(-rt) K_mu(t) dt,   mu >= 1
  with K_mu(t) = t^(mu+1/2) g_mu(t) and the Kapteyn series
  g_mu(t) = sum_n J_(mu+1/2)(nt) / n^(mu-1/2).  For mu = 1 the kernel is
  c_1 K_1 = K with K(t) = Cl_2(t) + t log(2|sin(t/2)|).

The Kapteyn series converges like sum n^-mu cos(nt - phase), far too
slowly to sum term by term inside a quadrature.  Two exact
reorganisations are used instead:

* for t <= SMALL_T, the Riemann-sum expansion
  g_mu(t) = t^(nu-2) 2^(1-nu)/Gamma(nu) - sum_k p_k(t),   nu = mu + 1/2,
  a power series that converges for 0 < t < 2 pi;
* otherwise, the head n < N (N t in the Hankel range) is summed with
  J_nu, and the tail is written through the Hankel amplitude as a finite
  combination of polylogarithms Li_p(e^(it)), p = mu + q.  With
  t = 2 pi k + s, |s| <= pi, the expansion of Li_p in powers of s converges
  and carries the log or power singularity at t = 2 pi k exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError, HypothesisError
from .mathieu import Evaluation, MathieuPoint, Method, mathieu_s
from .quadrature import (
    MAX_TRUNCATION,
    QuadratureProblem,
    integrate_periodic_chunks,
    integrate_semiinf,
)
from .reports import IdentityReport
from .specfun import (
    BESSEL_ATOL,
    EPS,
    HANKEL_MIN_X,
    SERIES_MAX_X,
    TWO_PI,
    _bessel_series,
    _zeta_em,
    bessel_j,
    clausen2,
    gamma_fn,
    upper_incomplete_gamma_bound,
    zeta_fn,
    zeta_with_error,
)

KAPTEYN_CAP = 100_000
SMALL_T = 4.0
ABEL_RADII = (0.1, 0.05, 0.025)
APERY_MIN_TOL = 1e-6


# -- constants ---------------------------------------------------------------


def C_mu_of_r(mu: float, r: float) -> float:
    """sqrt(pi) / ((2r)^(mu-1/2) Gamma(mu+1))."""
    if not (mu > 0 and r > 0):
        raise DomainError("C_mu(r) needs mu > 0 and r > 0")
    return math.sqrt(math.pi) / ((2.0 * r) ** (mu - 0.5) * gamma_fn(mu + 1.0))


def c_mu(mu: float) -> float:
    """sqrt(pi) / (2^(mu-1/2) Gamma(mu+1)), the Laplace-kernel constant."""
    if not mu > 0:
        raise DomainError("c_mu needs mu > 0")
    return math.sqrt(math.pi) / (2.0 ** (mu - 0.5) * gamma_fn(mu + 1.0))


def c_mu_1(mu: float) -> float:
    """sqrt(pi) / (2^(2mu-1) Gamma(mu+1/2) Gamma(mu+1))."""
    if not mu > 0:
        raise DomainError("c_mu_1 needs mu > 0")
    return math.sqrt(math.pi) / (2.0 ** (2.0 * mu - 1.0) * gamma_fn(mu + 0.5) * gamma_fn(mu + 1.0))


@dataclass(frozen=True)
class RepresentationConstants:
    C_mu_of_r: float
    c_mu: float
    c_mu_1: float

    def __post_init__(self):
        if not (self.C_mu_of_r > 0 and self.c_mu > 0 and self.c_mu_1 > 0):
            raise DomainError("representation constants must be positive")

    @classmethod
    def at(cls, mu: float, r: float) -> "RepresentationConstants":
        return cls(C_mu_of_r(mu, r), c_mu(mu), c_mu_1(mu))


@dataclass(frozen=True)
class KernelConfig:
    mu: float
    kapteyn_terms_max: int = KAPTEYN_CAP
    accel: bool = True

    def __post_init__(self):
        if not self.mu >= 1.0:
            raise HypothesisError(f"Kapteyn kernels need mu >= 1, got {self.mu!r}")
        if self.kapteyn_terms_max < 2:
            raise DomainError("kapteyn_terms_max must be at least 2")


# -- helpers -----------------------------------------------------------------


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise DomainError("tol must be > 0")


def _bose_tail(a: float, T: float, shift: float = 1.0, power: int = 1) -> float:
    # int_T^inf x^(a-1) e^(-shift x) / (1 - e^-T)^power, bounding x^(a-1)/(e^x-1)^power
    lead = upper_incomplete_gamma_bound(a, shift * T) / shift ** a
    return lead / (-math.expm1(-T)) ** power


def _require_converged(res, what: str) -> None:
    if not res.converged:
        raise ConvergenceError(f"{what}: quadrature stopped at err {res.err_estimate:.3g}")


def _bessel_any(nu: float, x: np.ndarray) -> np.ndarray:
    """J_nu(x) for nu > -1; negative orders step down from nu+1, nu+2."""
    if nu >= 0:
        return bessel_j(nu, x)
    out = np.empty_like(x)
    low = x <= SERIES_MAX_X
    if np.any(low):
        out[low] = _bessel_series(nu, x[low])
    if np.any(~low):
        xh = x[~low]
        out[~low] = 2.0 * (nu + 1.0) / xh * bessel_j(nu + 1.0, xh) - bessel_j(nu + 2.0, xh)
    return out


# -- Emersleben and Bessel integrals ----------------------------------------


def s_via_emersleben(r: float, tol: float = 1e-10) -> Evaluation:
    """S(r) = S_1(r) from the Emersleben sine integral."""
    if not r > 0:
        raise DomainError("s_via_emersleben needs r > 0")
    _check_tol(tol)

    def f(x):
        return x * np.sin(r * x) / np.expm1(x)

    prob = QuadratureProblem(f, 0.0, math.inf, tol * r, tail_estimator=lambda T: _bose_tail(2.0, T),
                             vectorized=True)
    res = integrate_semiinf(prob)
    _require_converged(res, "emersleben")
    value = res.value / r
    err = res.err_estimate / r + 4.0 * EPS * abs(value)
    return Evaluation(value, err, Method.EMERSLEBEN, 15 * res.panels, {"truncation_at": res.truncation_at})


def s_via_bessel_integral(p: MathieuPoint, tol: float = 1e-10) -> Evaluation:
    """S_mu(r) from the Bessel-kernel integral with C_mu(r) prefactor."""
    mu, r = p.mu, p.r
    if not r > 0:
        raise DomainError("s_via_bessel_integral needs r > 0")
    _check_tol(tol)
    nu = mu - 0.5
    scale = C_mu_of_r(mu, r)

    def f(x):
        return x ** (mu + 0.5) * _bessel_any(nu, r * x) / np.expm1(x)

    # |J_nu| <= 1 on the tail; x^(mu+1/2)/(e^x-1) integrates to Gamma(mu+3/2, T)
    prob = QuadratureProblem(f, 0.0, math.inf, tol / scale,
                             tail_estimator=lambda T: _bose_tail(mu + 1.5, T), vectorized=True)
    res = integrate_semiinf(prob)
    _require_converged(res, "bessel integral")
    value = scale * res.value
    # pointwise Bessel error integrated against the Bose weight
    bessel_part = BESSEL_ATOL * gamma_fn(mu + 1.5) * zeta_fn(mu + 1.5)
    err = scale * (res.err_estimate + bessel_part) + 4.0 * EPS * abs(value)
    return Evaluation(value, err, Method.BESSEL_INTEGRAL, 15 * res.panels, {"truncation_at": res.truncation_at})


# -- Kapteyn kernels --------------------------------------------------------


def _hankel_coefficients(nu: float, count: int) -> list[float]:
    a = [1.0]
    for k in range(1, count + 1):
        a.append(a[-1] * (4.0 * nu * nu - (2 * k - 1) ** 2) / (8.0 * k))
    return a


@lru_cache(maxsize=4096)
def _zeta_real(x: float) -> float:
    """zeta on the real line minus the pole, for the polylog expansion."""
    if x > 1.0:
        return zeta_fn(x)
    if x == 1.0:
        raise DomainError("zeta has a pole at 1")
    if x > 0.0:
        return _zeta_em(x, 40)[0]
    if x == 0.0:
        return -0.5
    if x == math.floor(x) and int(x) % 2 == 0:
        return 0.0
    # functional equation zeta(x) = 2^x pi^(x-1) sin(pi x/2) Gamma(1-x) zeta(1-x)
    size = math.exp(x * math.log(2.0) + (x - 1.0) * math.log(math.pi) + math.lgamma(1.0 - x))
    return size * math.sin(0.5 * math.pi * x) * zeta_fn(1.0 - x)


def _g_series(mu: float, t: float) -> tuple[float, float, int]:
    nu = mu + 0.5
    lt = math.log(t)
    lead = math.exp((nu - 2.0) * lt + (1.0 - nu) * math.log(2.0) - math.lgamma(nu))
    parts = [lead]
    p = 0.0
    k = 0
    for k in range(1, 400):
        logp = (math.log(2.0 * _zeta_real(2.0 * k)) + math.lgamma(2.0 * k)
                + (nu + 2.0 * k - 2.0) * (lt - math.log(2.0)) - 2.0 * k * math.log(TWO_PI)
                - math.lgamma(k) - math.lgamma(nu + k))
        p = math.exp(logp)
        parts.append(-p)
        if p <= 1e-18 * lead:
            break
    value = math.fsum(parts)
    # the p_k shrink geometrically by about (t/2pi)^2
    ratio = (t / TWO_PI) ** 2
    err = 2.0 * p * ratio / (1.0 - ratio) + 4.0 * EPS * math.fsum(abs(x) for x in parts)
    return value, err, k


def _envelope_constant(nu: float) -> float:
    """Upper estimate of sup_x sqrt(x) |J_nu(x)|."""
    return _envelope_cached(round(nu, 12))


@lru_cache(maxsize=64)
def _envelope_cached(nu: float) -> float:
    x0 = max(HANKEL_MIN_X, 2.0 * nu * nu)
    grid = np.linspace(1e-3, x0, 4000)
    inner = float(np.max(np.sqrt(grid) * np.abs(bessel_j(nu, grid))))
    a = _hankel_coefficients(nu, 2)
    outer = math.sqrt(2.0 / math.pi) * (1.0 + abs(a[1]) / x0 + abs(a[2]) / x0 ** 2)
    return 1.02 * max(inner, outer)


def _tail_envelope(mu: float, t: float, N: int) -> float:
    # sum_{n>=N} B (nt)^(-1/2) n^(1/2-mu) = B t^(-1/2) sum_{n>=N} n^-mu
    if mu <= 1.0:
        return math.inf
    start = max(N - 1, 1)
    return _envelope_constant(mu + 0.5) / math.sqrt(t) * start ** (1.0 - mu) / (mu - 1.0)


POLYLOG_TERMS = 96
_FACT = np.array([math.factorial(k) for k in range(POLYLOG_TERMS)], dtype=float)


@lru_cache(maxsize=256)
def _polylog_table(p: float) -> tuple[np.ndarray, int | None]:
    """zeta(p-k)/k! for k < POLYLOG_TERMS, with the pole slot zeroed."""
    m = round(p)
    integer = m if (abs(p - m) < 1e-12 and m >= 1) else None
    col = np.empty(POLYLOG_TERMS)
    for k in range(POLYLOG_TERMS):
        if integer is not None and k == integer - 1:
            col[k] = 0.0
        else:
            col[k] = _zeta_real(p - k) / _FACT[k]
    return col, integer


def _polylog_unit(p: float, s: float) -> tuple[complex, float]:
    """Li_p(e^(is)) for |s| <= pi, p >= 1, and an error estimate.

    Li_p(e^w) = Gamma(1-p) (-w)^(p-1) + sum_k zeta(p-k) w^k / k!, |w| < 2 pi,
    with the pole pair replaced by w^(m-1)/(m-1)! (H_(m-1) - log(-w)) for integer p = m.
    """
    col, integer = _polylog_table(p)
    w = 1j * s
    powers = w ** np.arange(POLYLOG_TERMS)
    terms = col * powers
    value = complex(np.sum(terms))
    if integer is not None:
        if s == 0.0:
            if integer == 1:
                raise DomainError("Li_1(1) diverges")
            sing = 0j
        else:
            harmonic = math.fsum(1.0 / j for j in range(1, integer))
            sing = w ** (integer - 1) / math.factorial(integer - 1) * (harmonic - np.log(-w))
    else:
        sing = 0j if s == 0.0 else math.gamma(1.0 - p) * (-w) ** (p - 1.0)
    value += sing
    err = 4.0 * float(np.abs(terms[-1])) + 8.0 * EPS * (float(np.sum(np.abs(terms))) + abs(sing))
    return value, err


def _hankel_start(mu: float, t: float) -> int:
    nu = mu + 0.5
    return max(math.ceil(max(HANKEL_MIN_X, 2.0 * nu * nu) / t), 2)


def _g_hankel(mu: float, t: float, cap: int, head_j: np.ndarray | None = None) -> tuple[float, float, int]:
    """g_mu for t > SMALL_T: Bessel head, Hankel-amplitude tail summed via polylogs.

    The tail sum_{n>=N} Re e^(int) h(n) with h(n) = C sum_q i^q a_q t^-q n^-(mu+q)
    is Re C sum_q c_q (Li_(mu+q)(e^(is)) - sum_{n<N} e^(ins) n^-(mu+q)),
    t = 2 pi k + s with |s| <= pi; the expansion of Li_p in s carries the
    2 pi k singularity exactly.
    """
    nu = mu + 0.5
    N = _hankel_start(mu, t)
    if N > cap:
        return _g_plain(mu, t, cap)
    n = np.arange(1, N, dtype=float)
    if head_j is None:
        head_j = bessel_j(nu, n * t)
    head_terms = head_j * n ** (1.0 - nu)
    head = math.fsum(head_terms)
    err = BESSEL_ATOL * float(np.sum(n ** (1.0 - nu))) + 4.0 * EPS * float(np.sum(np.abs(head_terms)))

    a = _hankel_coefficients(nu, 60)
    K = 0
    for k in range(1, 60):
        if a[k] == 0.0 or abs(a[k]) / (N * t) ** k < 1e-18:
            break
        if abs(a[k + 1]) / (N * t) >= abs(a[k]):
            break
        K = k
    K_next = a[K + 1] if K + 1 < len(a) else 0.0

    s = math.remainder(t, TWO_PI)
    phase = (0.5 * nu + 0.25) * math.pi
    C = math.sqrt(2.0 / (math.pi * t)) * complex(math.cos(phase), -math.sin(phase))
    carrier = np.exp(1j * s * n)
    acc = 0j
    for q in range(K + 1):
        p = mu + q
        li, li_err = _polylog_unit(p, s)
        partial = complex(np.sum(carrier * n ** -p))
        cq = (1j ** q) * a[q] * t ** -q
        acc += cq * (li - partial)
        err += abs(C * cq) * (li_err + 4.0 * EPS * float(np.sum(n ** -p)))
    tail = (C * acc).real
    # Hankel amplitude truncation after K terms
    p_next = mu + K + 1
    err += abs(C) * abs(K_next) * t ** -(K + 1) * (N ** -p_next + N ** (1.0 - p_next) / (p_next - 1.0))
    return head + tail, err, N


def _g_plain(mu: float, t: float, cap: int) -> tuple[float, float, int]:
    n = np.arange(1, cap + 1, dtype=float)
    terms = bessel_j(mu + 0.5, n * t) * n ** (0.5 - mu)
    value = math.fsum(terms)
    err = BESSEL_ATOL * float(np.sum(n ** (0.5 - mu))) + _tail_envelope(mu, t, cap + 1)
    return value, err, cap


_G_CACHE: dict = {}
_G_CACHE_MAX = 500_000


def _g_cached(mu: float, t: float, cap: int, accel: bool,
              head_j: np.ndarray | None = None) -> tuple[float, float, int, str]:
    key = (mu, t, cap, accel)
    hit = _G_CACHE.get(key)
    if hit is not None:
        return hit
    if not accel:
        out = (*_g_plain(mu, t, cap), "plain")
    elif t <= SMALL_T:
        out = (*_g_series(mu, t), "power_series")
    else:
        out = (*_g_hankel(mu, t, cap, head_j), "hankel_tail")
    if len(_G_CACHE) >= _G_CACHE_MAX:
        _G_CACHE.clear()
    _G_CACHE[key] = out
    return out


def _g_batch(mu: float, ts: np.ndarray, cap: int, accel: bool) -> tuple[np.ndarray, np.ndarray]:
    """g_mu and its error at many t; Bessel heads share one vectorised call."""
    heads: dict = {}
    if accel:
        todo = [float(t) for t in ts
                if t > SMALL_T and (mu, float(t), cap, accel) not in _G_CACHE and _hankel_start(mu, t) <= cap]
        if todo:
            counts = [_hankel_start(mu, t) - 1 for t in todo]
            args = np.concatenate([np.arange(1, c + 1, dtype=float) * t for t, c in zip(todo, counts)])
            values = bessel_j(mu + 0.5, args)
            offset = 0
            for t, c in zip(todo, counts):
                heads[t] = values[offset:offset + c]
                offset += c
    vals = np.empty(len(ts))
    errs = np.empty(len(ts))
    for i, t in enumerate(ts):
        t = float(t)
        g, e, _, _ = _g_cached(mu, t, cap, accel, heads.get(t))
        vals[i] = g
        errs[i] = e
    return vals, errs


def kapteyn_g(cfg: KernelConfig, t: float, tol: float = 1e-10) -> Evaluation:
    """g_mu(t) = sum_n J_(mu+1/2)(nt) / n^(mu-1/2).

    With cfg.accel off the series is summed plainly to the cap, with an
    envelope bound on the remainder (infinite for mu = 1).
    """
    if not t > 0:
        raise DomainError("kapteyn_g needs t > 0")
    _check_tol(tol)
    value, err, work, route = _g_cached(float(cfg.mu), float(t), int(cfg.kapteyn_terms_max), bool(cfg.accel))
    return Evaluation(value, err, Method.LAPLACE_KAPTEYN, work,
                      {"route": route, "slow_convergence": not err <= tol})


def kernel_K_mu(cfg: KernelConfig, t: float, tol: float = 1e-10) -> Evaluation:
    """K_mu(t) = t^(mu+1/2) g_mu(t)."""
    g = kapteyn_g(cfg, t, tol)
    scale = t ** (cfg.mu + 0.5)
    err = scale * g.err_bound
    return Evaluation(scale * g.value, err, g.method, g.terms_or_nodes,
                      {**g.details, "slow_convergence": not err <= tol})


def kernel_K(t):
    """K(t) = Cl_2(t) + t log(2|sin(t/2)|); log-singular at t in 2 pi Z."""
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("kernel_K needs t > 0")
    s = np.abs(np.sin(0.5 * arr))
    if np.any(s == 0.0):
        raise DomainError("kernel_K is singular at multiples of 2 pi")
    out = clausen2(arr) + arr * np.log(2.0 * s)
    if np.ndim(out) == 0:
        return float(out)
    return out


# -- Laplace representation --------------------------------------------------


@lru_cache(maxsize=1)
def _abs_log_sine_period() -> float:
    # int_0^2pi |log(2 sin(t/2))| dt = 4 Cl_2(pi/3)
    return 4.0 * clausen2(math.pi / 3.0)


def _laplace_tail_k(r: float, T: float) -> float:
    """Bound on int_T^inf e^(-rt) |K(t)| dt, using |Cl_2| <= pi^2/6 and whole periods."""
    q = math.exp(-TWO_PI * r)
    k0 = math.floor(T / TWO_PI)
    periods = TWO_PI * _abs_log_sine_period() * q ** k0 * ((k0 + 1) / (1.0 - q) + q / (1.0 - q) ** 2)
    return math.pi ** 2 / 6.0 * math.exp(-r * T) / r + periods


def _laplace_tail_kmu(mu: float, r: float, T: float) -> float:
    # |K_mu(t)| <= B zeta(mu) t^mu with B = sup sqrt(x)|J_(mu+1/2)(x)|
    bound = _envelope_constant(mu + 0.5) * zeta_fn(mu)
    return bound * upper_incomplete_gamma_bound(mu + 1.0, r * T) / r ** (mu + 1.0)


def _truncation_length(tail, tol: float) -> float:
    length = 1.0
    while tail(length) > 0.5 * tol:
        length *= 2.0
        if length > MAX_TRUNCATION:
            raise ConvergenceError("laplace integral: no truncation point below 1e6")
    return length


def s_via_laplace(p: MathieuPoint, tol: float = 1e-8, cfg: KernelConfig | None = None) -> Evaluation:
    """S_mu(r) = c_mu int_0^inf e^(-rt) K_mu(t) dt for mu >= 1.

    mu = 1 uses the closed-form kernel K = c_1 K_1; otherwise the Kapteyn
    kernel K_mu.  Quadrature panels are split at every 2 pi k.
    """
    mu, r = p.mu, p.r
    if not mu >= 1.0:
        raise HypothesisError("s_via_laplace needs mu >= 1")
    if not r > 0:
        raise DomainError("s_via_laplace needs r > 0")
    _check_tol(tol)
    if mu == 1.0:
        tail = lambda T: _laplace_tail_k(r, T)  # noqa: E731
        length = _truncation_length(tail, tol)
        points = [TWO_PI * k for k in range(1, int(length / TWO_PI) + 1)]

        def f(t):
            return np.exp(-r * t) * kernel_K(t)

        prob = QuadratureProblem(f, 0.0, math.inf, tol, tail_estimator=tail, singular_points=points,
                                 vectorized=True)
        res = integrate_semiinf(prob)
        _require_converged(res, "laplace")
        err = res.err_estimate + 4.0 * EPS * abs(res.value)
        return Evaluation(res.value, err, Method.LAPLACE_KAPTEYN, 15 * res.panels,
                          {"truncation_at": res.truncation_at, "kernel": "closed_form"})

    cfg = cfg or KernelConfig(mu)
    if cfg.mu != mu:
        raise DomainError("KernelConfig.mu does not match the evaluation point")
    scale = c_mu(mu)
    tail = lambda T: scale * _laplace_tail_kmu(mu, r, T)  # noqa: E731
    quad_tol = 0.5 * tol
    length = _truncation_length(tail, quad_tol)
    points = [TWO_PI * k for k in range(1, int(length / TWO_PI) + 1)]
    nu = mu + 0.5
    worst = [0.0]

    def f(ts):
        g, e = _g_batch(mu, ts, cfg.kapteyn_terms_max, cfg.accel)
        w = ts ** nu
        # int e^(-rt) t^nu err <= sup(e^(-rt/2) t^nu err) * 2/r
        worst[0] = max(worst[0], float(np.max(np.exp(-0.5 * r * ts) * w * e)))
        return scale * np.exp(-r * ts) * w * g

    prob = QuadratureProblem(f, 0.0, math.inf, quad_tol, tail_estimator=tail, singular_points=points,
                             vectorized=True)
    res = integrate_semiinf(prob)
    _require_converged(res, "laplace")
    kernel_err = 2.0 * scale * worst[0] / r
    err = res.err_estimate + kernel_err + 4.0 * EPS * abs(res.value)
    return Evaluation(res.value, err, Method.LAPLACE_KAPTEYN, 15 * res.panels,
                      {"truncation_at": res.truncation_at, "kernel": "kapteyn", "kernel_err": kernel_err})


# -- zeta(2mu+1) from the undamped kernel -----------------------------------


def _richardson_zero(hs: list[float], values: list[float]) -> tuple[float, float, list[float]]:
    """Polynomial extrapolation to h = 0; returns value, last change, weights."""
    weights = []
    for i, hi in enumerate(hs):
        w = 1.0
        for j, hj in enumerate(hs):
            if j != i:
                w *= hj / (hj - hi)
        weights.append(w)
    value = math.fsum(w * v for w, v in zip(weights, values))
    # same extrapolation with the smallest radius dropped, as a change estimate
    sub = hs[:-1]
    sub_w = []
    for i, hi in enumerate(sub):
        w = 1.0
        for j, hj in enumerate(sub):
            if j != i:
                w *= hj / (hj - hi)
        sub_w.append(w)
    coarse = math.fsum(w * v for w, v in zip(sub_w, values[:-1]))
    return value, abs(value - coarse), weights


def _abel_limit(mu: float, tol: float, radii=ABEL_RADII) -> tuple[float, float, dict]:
    """lim_{r->0} S_mu(r) via Laplace values at small r, extrapolated in r^2."""
    evals = []
    for r in radii:
        evals.append(s_via_laplace(MathieuPoint(mu, r), tol=0.1 * tol))
    hs = [r * r for r in radii]
    value, change, weights = _richardson_zero(hs, [e.value for e in evals])
    err = change + math.fsum(abs(w) * e.err_bound for w, e in zip(weights, evals))
    return value, err, {"radii": list(radii), "laplace_values": [e.value for e in evals]}


def _chunked_integral(mu: float, tol: float, max_chunks: int) -> dict:
    """The undamped integral as a sum over 2 pi chunks (diagnostic)."""
    if mu == 1.0:
        f, vectorized = kernel_K, True
        scale = 1.0
    else:
        cfg = KernelConfig(mu)

        def f(ts):
            return ts ** (mu + 0.5) * _g_batch(mu, ts, cfg.kapteyn_terms_max, True)[0]

        vectorized = True
        scale = c_mu(mu)
    prob = QuadratureProblem(f, 0.0, math.inf, tol / scale, period=TWO_PI, vectorized=vectorized)
    try:
        res = integrate_periodic_chunks(prob, max_chunks=max_chunks)
    except ConvergenceError as exc:
        return {"value": None, "error": str(exc)}
    chunks = res.details["chunks"]
    return {"value": scale * res.value, "err": scale * res.err_estimate,
            "first_chunk": scale * chunks[0], "chunks_used": len(chunks)}


def zeta_via_kapteyn(mu: float, tol: float = 1e-6) -> Evaluation:
    """zeta(2mu+1) = (c_mu/2) int_0^inf K_mu(t) dt, read as an Abel limit.

    The chunked (improper Riemann) sum is reported under details["chunked"]
    but is not used: every 2 pi chunk of the kernel integrates to zero for
    mu = 1, and the partial integrals oscillate without settling.
    """
    if not mu >= 1.0:
        raise HypothesisError("zeta_via_kapteyn needs mu >= 1")
    _check_tol(tol)
    value, err, info = _abel_limit(mu, 2.0 * tol)
    chunked = _chunked_integral(mu, tol, max_chunks=64)
    if chunked.get("value") is not None:
        chunked["value"] *= 0.5
    return Evaluation(0.5 * value, 0.5 * err, Method.LAPLACE_KAPTEYN, len(ABEL_RADII),
                      {"mode": "abel", **info, "chunked": chunked})


def apery_via_kernel(tol: float = 1e-6, mode: str = "abel") -> Evaluation:
    """zeta(3) = (1/2) int_0^inf K(t) dt in chunked or Abel mode.

    Both modes are always computed and reported in details; mode selects
    which one becomes the returned value.
    """
    if not tol >= APERY_MIN_TOL:
        raise DomainError(f"apery_via_kernel needs tol >= {APERY_MIN_TOL}")
    if mode not in ("abel", "chunked"):
        raise DomainError(f"unknown mode {mode!r}")
    chunked = _chunked_integral(1.0, tol, max_chunks=1000)
    abel, abel_err, info = _abel_limit(1.0, 2.0 * tol)
    details = {
        "chunked": None if chunked.get("value") is None else 0.5 * chunked["value"],
        "chunked_err": None if chunked.get("value") is None else 0.5 * chunked["err"],
        "first_chunk": chunked.get("first_chunk"),
        "abel": 0.5 * abel,
        "abel_err": 0.5 * abel_err,
        **info,
    }
    if mode == "chunked":
        if details["chunked"] is None:
            raise ConvergenceError(chunked.get("error", "chunked sum did not settle"))
        return Evaluation(details["chunked"], details["chunked_err"], Method.LAPLACE_KAPTEYN,
                          chunked["chunks_used"], {"mode": "chunked", **details})
    return Evaluation(0.5 * abel, 0.5 * abel_err, Method.LAPLACE_KAPTEYN, len(ABEL_RADII),
                      {"mode": "abel", **details})


# -- identity checks ---------------------------------------------------------


def identity_bose(mu: float, tol: float = 1e-11) -> IdentityReport:
    """int_0^inf x^mu / (e^x - 1) dx = Gamma(mu+1) zeta(mu+1)."""
    if not mu > 0:
        raise DomainError("identity_bose needs mu > 0")
    _check_tol(tol)
    prob = QuadratureProblem(lambda x: x ** mu / np.expm1(x), 0.0, math.inf, tol,
                             tail_estimator=lambda T: _bose_tail(mu + 1.0, T), vectorized=True)
    res = integrate_semiinf(prob)
    _require_converged(res, "bose integral")
    g = gamma_fn(mu + 1.0)
    z, z_err = zeta_with_error(mu + 1.0)
    rhs = g * z
    rhs_err = g * z_err + 1e-13 * abs(rhs)
    return IdentityReport.build("bose", {"mu": mu}, res.value, rhs, res.err_estimate + rhs_err)


def identity_squared_bose(mu: float, tol: float = 1e-11) -> IdentityReport:
    """int_0^inf t^(mu-1) / (e^t - 1)^2 dt = Gamma(mu) (zeta(mu-1) - zeta(mu))."""
    if not mu > 2:
        raise DomainError("identity_squared_bose needs mu > 2")
    _check_tol(tol)
    prob = QuadratureProblem(lambda t: t ** (mu - 1.0) / np.expm1(t) ** 2, 0.0, math.inf, tol,
                             tail_estimator=lambda T: _bose_tail(mu, T, shift=2.0, power=2),
                             vectorized=True)
    res = integrate_semiinf(prob)
    _require_converged(res, "squared bose integral")
    g = gamma_fn(mu)
    z1, e1 = zeta_with_error(mu - 1.0)
    z2, e2 = zeta_with_error(mu)
    rhs = g * (z1 - z2)
    rhs_err = g * (e1 + e2) + 1e-13 * g * (abs(z1) + abs(z2))
    return IdentityReport.build("squared_bose", {"mu": mu}, res.value, rhs, res.err_estimate + rhs_err)


def integral_of_s_closed_form(mu: float) -> float:
    """sqrt(pi) Gamma(mu+1/2) zeta(2mu) / Gamma(mu+1)."""
    if not mu > 0.5:
        raise DomainError("the closed form needs mu > 1/2")
    return math.sqrt(math.pi) * gamma_fn(mu + 0.5) * zeta_fn(2.0 * mu) / gamma_fn(mu + 1.0)


def identity_integral_of_s(mu: float, tol: float = 1e-8) -> IdentityReport:
    """int_0^inf S_mu(r) dr against its Gamma-zeta closed form (mu > 1/2).

    The integrand is S_mu(r) - L(r) with L(r) = (r^2 + 1/6)^-mu / mu,
    whose integral is known in closed form and which removes the slowly
    decaying r^-2mu part.  The tail bound uses
    |S_mu(r) - r^-2mu/mu| <= max_x 2x/(x^2+r^2)^(mu+1) (unimodal summand)
    and |L(r) - r^-2mu/mu| <= r^(-2mu-2)/6.
    """
    if not mu > 0.5:
        raise DomainError("identity_integral_of_s needs mu > 1/2 (zeta(2mu) diverges at 1/2)")
    _check_tol(tol)
    a = 1.0 / 6.0
    peak = 2.0 / math.sqrt(2.0 * mu + 1.0) * ((2.0 * mu + 2.0) / (2.0 * mu + 1.0)) ** (-(mu + 1.0))

    def tail(T):
        return peak * T ** (-2.0 * mu) / (2.0 * mu) + a * T ** (-2.0 * mu - 1.0) / (2.0 * mu + 1.0)

    inner_rtol = 1e-12

    def f(r):
        s = mathieu_s(MathieuPoint(mu, r), 1.0, rtol=inner_rtol).value
        return s - (r * r + a) ** (-mu) / mu

    prob = QuadratureProblem(f, 0.0, math.inf, tol, tail_estimator=tail)
    res = integrate_semiinf(prob)
    _require_converged(res, "integral of S")
    l_integral = a ** (0.5 - mu) * math.sqrt(math.pi) * gamma_fn(mu - 0.5) / (2.0 * gamma_fn(mu)) / mu
    lhs = res.value + l_integral
    rhs = integral_of_s_closed_form(mu)
    errors = res.err_estimate + inner_rtol * abs(rhs) + 1e-12 * (abs(lhs) + abs(rhs))
    return IdentityReport.build("integral_of_s", {"mu": mu}, lhs, rhs, errors,
                                notes=("restricted to mu > 1/2",))
