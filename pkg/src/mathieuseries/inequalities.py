"""Numerical certification of inequalities for S_mu(r) and zeta.

Every check evaluates both sides at one parameter point and returns an
InequalityReport whose margin is oriented so that margin >= 0 means the
inequality holds as written.  Where a statement admits two readings (a
constant, a power of 2, an exponent) both are computed and the report
carries all of them under extra["variants"]; such checks are flagged as
adjudication checks and never count as failures in a verification run.

Tolerances passed to the checks are relative: each S_mu(r) is evaluated
with err_bound <= tol * S_mu(r).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, HypothesisError
from .mathieu import MathieuPoint, mathieu_s, mathieu_s_deriv_mu
from .reports import InequalityReport, Verdict, verdict_for
from .specfun import EPS, GAMMA_RTOL, bessel_j, gamma_fn, zeta_with_error

LANDAU_C = 0.78574687  # sup_{x>0} x^(1/3) J_0(x), as published
DEFAULT_TOL = 1e-10
SWEEP_TOL = 1e-6
S_EPS_DEFAULT = 1e-2


# -- evaluation helpers ------------------------------------------------------


def _need(ok: bool, what: str) -> None:
    if not ok:
        raise HypothesisError(f"hypothesis violated: {what}")


def _s(mu: float, r: float, tol: float) -> tuple[float, float]:
    ev = mathieu_s(MathieuPoint(mu, r), math.inf, rtol=tol)
    return ev.value, float(ev.err_bound)


def _zeta(s: float) -> tuple[float, float]:
    v, e = zeta_with_error(s)
    return v, float(e)


def _gamma(x: float) -> tuple[float, float]:
    v = gamma_fn(x)
    return v, GAMMA_RTOL * abs(v)


def _prod(*factors: tuple[float, float, float]) -> tuple[float, float]:
    """Product of v**power over (v, err, power) with a first-order error bound."""
    value, rel = 1.0, 0.0
    for v, e, power in factors:
        value *= v ** power
        rel += abs(power) * e / abs(v) + 2.0 * EPS
    return value, abs(value) * rel


def _power(v: float, e: float, power: float) -> tuple[float, float]:
    out = v ** power
    return out, abs(power) * abs(out) * e / abs(v)


def _ratio(a: tuple[float, float], b: tuple[float, float]) -> tuple[float, float]:
    return _prod((a[0], a[1], 1.0), (b[0], b[1], -1.0))


def _point(**kw) -> dict:
    return {k: v for k, v in kw.items() if v is not None}


def _with_variants(name: str, point: dict, selected: str, sides: dict, *,
                   adjudication: bool = True, notes: tuple = (),
                   extra: dict | None = None) -> InequalityReport:
    """sides maps variant -> (lhs, rhs, margin, errors); the selected one is primary."""
    if selected not in sides:
        raise DomainError(f"unknown variant {selected!r} for {name}; choose from {sorted(sides)}")
    built = {v: InequalityReport.build(name, point, *args, variant=v) for v, args in sides.items()}
    table = {v: {"lhs": r.lhs, "rhs": r.rhs, "margin": r.margin,
                 "err_budget": r.err_budget, "verdict": r.verdict.value}
             for v, r in built.items()}
    lhs, rhs, margin, errors = sides[selected]
    return InequalityReport.build(name, point, lhs, rhs, margin, errors, variant=selected,
                                  adjudication=adjudication, notes=notes,
                                  extra={"variants": table, **(extra or {})})


# -- upper bounds from the Bessel representation ------------------------------


def _jensen_rhs(mu: float, r: float, p: float) -> tuple[float, float]:
    # C_mu(r)^p Gamma^(p-1)(mu+1/2) zeta^(p-1)(mu+1/2) Gamma(p+mu+1/2) zeta(p+mu+1/2)
    g1, z1 = _gamma(mu + 0.5), _zeta(mu + 0.5)
    g2, z2 = _gamma(p + mu + 0.5), _zeta(p + mu + 0.5)
    g0 = _gamma(mu + 1.0)
    scale = (math.sqrt(math.pi) * (2.0 * r) ** (0.5 - mu)) ** p
    v, e = _prod((g0[0], g0[1], -p), (g1[0], g1[1], p - 1.0), (z1[0], z1[1], p - 1.0),
                 (g2[0], g2[1], 1.0), (z2[0], z2[1], 1.0))
    return scale * v, scale * e


def check_jensen_upper(mu: float, r: float, p: float, variant: str = "general",
                       tol: float = DEFAULT_TOL) -> InequalityReport:
    """S_mu^p(r) <= C_mu^p(r) G^(p-1) Z^(p-1) Gamma(p+mu+1/2) zeta(p+mu+1/2).

    The sharp variant carries an extra 2^(-p/2) and needs mu >= 3/2.
    """
    _need(p > 1.0, "p > 1")
    _need(r > 0.0, "r > 0")
    if variant == "general":
        _need(mu >= 1.0, "mu >= 1 for the general bound")
    elif variant == "sharp":
        _need(mu >= 1.5, "mu >= 3/2 for the sharp bound")
    else:
        raise DomainError(f"variant must be 'general' or 'sharp', got {variant!r}")
    s, s_err = _s(mu, r, tol)
    lhs, lhs_err = _power(s, s_err, p)
    general, g_err = _jensen_rhs(mu, r, p)
    factor = 2.0 ** (-0.5 * p) if variant == "sharp" else 1.0
    rhs, rhs_err = factor * general, factor * g_err
    return InequalityReport.build("jensen_upper", _point(mu=mu, r=r, p=p), lhs, rhs,
                                  rhs - lhs, lhs_err + rhs_err, variant=variant,
                                  extra={"general_rhs": general, "sharp_rhs": 2.0 ** (-0.5 * p) * general})


def special_upper_constants(which: str) -> dict:
    """Constants A in S <= A / r^k: as typeset, and re-derived from the p = 2 bound."""
    z32, z72 = _zeta(1.5)[0], _zeta(3.5)[0]
    if which == "S1":
        return {
            "mu": 1.0,
            "as_typeset": (math.pi * math.sqrt(15.0 * math.pi * z32 * z72) / (4.0 * math.sqrt(2.0)), 0.5),
            "rederived": (math.pi * math.sqrt(15.0 * z32 * z72) / (4.0 * math.sqrt(2.0)), 0.5),
        }
    if which == "S32":
        general = 2.0 * math.pi ** 3 / (9.0 * math.sqrt(10.0))
        return {
            "mu": 1.5,
            "as_typeset": (math.pi ** 3 / (9.0 * math.sqrt(10.0)), 2.0),
            "rederived": (general, 1.0),
            "rederived_sharp": (general / math.sqrt(2.0), 1.0),
        }
    raise DomainError(f"which must be 'S1' or 'S32', got {which!r}")


def check_special_upper(r: float, which: str = "S1", variant: str = "as_typeset",
                        tol: float = DEFAULT_TOL) -> InequalityReport:
    """S(r) and S_{3/2}(r) upper bounds, as typeset and with re-derived constants.

    The re-derived forms come from the p = 2 Jensen bound at mu = 1 and
    mu = 3/2 (general and, for 3/2, sharp).  extra["constants_agree"]
    says whether the typeset bound coincides with the re-derived one.
    """
    _need(r > 0.0, "r > 0")
    consts = special_upper_constants(which)
    mu = consts.pop("mu")
    _need(variant != "rederived_sharp" or mu >= 1.5, "the sharp constant needs mu >= 3/2")
    s, s_err = _s(mu, r, tol)
    sides = {}
    for v, (a, k) in consts.items():
        rhs = a / r ** k
        sides[v] = (s, rhs, rhs - s, s_err + 4.0 * EPS * rhs)
    typeset, derived = consts["as_typeset"], consts["rederived"]
    agree = typeset[1] == derived[1] and math.isclose(typeset[0], derived[0], rel_tol=1e-12)
    return _with_variants("special_upper", _point(r=r, which=which), variant, sides,
                          extra={"constants_agree": agree,
                                 "constants": {v: {"A": a, "r_power": k} for v, (a, k) in consts.items()}})


# -- recurrence lower bound --------------------------------------------------


def check_recurrence_lower(mu: float, r: float, variant: str = "as_stated",
                           tol: float = DEFAULT_TOL) -> InequalityReport:
    """S_mu >= (2mu-1)/(2mu r^3) S_{mu-1} - (2mu-1) sqrt(pi) G(2mu) zeta(2mu-1) / (2^j r^3 G(mu+1) G(mu+1/2)).

    as_stated uses j = 2mu - 2, as_proved j = 2mu - 1.
    """
    _need(mu > 1.5, "mu > 3/2")
    _need(r > 0.0, "r > 0")
    s, s_err = _s(mu, r, tol)
    prev, prev_err = _s(mu - 1.0, r, tol)
    r3 = r ** 3
    lead = (2.0 * mu - 1.0) / (2.0 * mu * r3)
    g2, z, g1, gh = _gamma(2.0 * mu), _zeta(2.0 * mu - 1.0), _gamma(mu + 1.0), _gamma(mu + 0.5)
    core, core_err = _prod((g2[0], g2[1], 1.0), (z[0], z[1], 1.0), (g1[0], g1[1], -1.0),
                           (gh[0], gh[1], -1.0))
    core *= (2.0 * mu - 1.0) * math.sqrt(math.pi) / r3
    core_err *= (2.0 * mu - 1.0) * math.sqrt(math.pi) / r3
    sides = {}
    for v, j in (("as_stated", 2.0 * mu - 2.0), ("as_proved", 2.0 * mu - 1.0)):
        sub = core / 2.0 ** j
        rhs = lead * prev - sub
        err = s_err + lead * prev_err + core_err / 2.0 ** j + 4.0 * EPS * (lead * prev + sub)
        sides[v] = (s, rhs, s - rhs, err)
    return _with_variants("recurrence_lower", _point(mu=mu, r=r), variant, sides)


# -- Turan, monotonicity and log-convexity ------------------------------------


def check_turan_mathieu(mu: float, r: float, tol: float = DEFAULT_TOL) -> InequalityReport:
    """S_{mu+2}(r) S_mu(r) - S_{mu+1}(r)^2 >= 0.

    extra["log_convexity"] recomputes the same statement as the midpoint
    log-convexity log S_{mu+1} <= (log S_mu + log S_{mu+2}) / 2.
    """
    _need(mu > 0.0, "mu > 0")
    _need(r >= 0.0, "r >= 0")
    a, ae = _s(mu, r, tol)
    b, be = _s(mu + 1.0, r, tol)
    c, ce = _s(mu + 2.0, r, tol)
    lhs, rhs = c * a, b * b
    err = c * ae + a * ce + 2.0 * b * be
    log_margin = 0.5 * (math.log(a) + math.log(c)) - math.log(b)
    log_err = 0.5 * (ae / a + ce / c) + be / b + 4.0 * EPS * max(1.0, abs(math.log(b)))
    return InequalityReport.build("turan_mathieu", _point(mu=mu, r=r), lhs, rhs, lhs - rhs, err,
                                  extra={"log_convexity": {"margin": log_margin, "err_budget": log_err,
                                                           "verdict": verdict_for(log_margin, log_err).value}})


def check_complete_monotonicity(mu: float, r: float, m_max: int = 4,
                                tol: float = DEFAULT_TOL) -> InequalityReport:
    """(-1)^m d^m S_mu / d mu^m > 0 for m = 1..m_max; margin is the smallest of them."""
    _need(mu > 0.0, "mu > 0")
    _need(r >= 0.0, "r >= 0")
    if int(m_max) != m_max or not 1 <= m_max <= 4:
        raise DomainError(f"m_max must be an integer in 1..4, got {m_max!r}")
    p = MathieuPoint(mu, r)
    signed = {}
    worst = None
    for m in range(1, int(m_max) + 1):
        ev = mathieu_s_deriv_mu(p, m, math.inf, rtol=tol)
        value = (-1.0) ** m * ev.value
        signed[m] = value
        if worst is None or value < worst[0]:
            worst = (value, float(ev.err_bound))
    return InequalityReport.build("complete_monotonicity", _point(mu=mu, r=r, m_max=int(m_max)),
                                  worst[0], 0.0, worst[0], worst[1],
                                  extra={"signed_derivatives": {str(m): v for m, v in signed.items()}})


def check_ratio_monotone(mu1: float, mu2: float, r: float, tol: float = DEFAULT_TOL) -> InequalityReport:
    """mu -> S_{mu+1}/S_mu is increasing: margin = ratio(mu2) - ratio(mu1)."""
    _need(0.0 < mu1 <= mu2, "0 < mu1 <= mu2")
    _need(r >= 0.0, "r >= 0")
    lo = _ratio(_s(mu1 + 1.0, r, tol), _s(mu1, r, tol))
    hi = _ratio(_s(mu2 + 1.0, r, tol), _s(mu2, r, tol)) if mu2 != mu1 else lo
    return InequalityReport.build("ratio_monotone", _point(mu1=mu1, mu2=mu2, r=r), hi[0], lo[0],
                                  hi[0] - lo[0], (hi[1] + lo[1]) if mu2 != mu1 else 0.0)


def check_kimberling(mu: float, nu: float, r: float, baseline: str = "S1",
                     eps: float = S_EPS_DEFAULT, tol: float = DEFAULT_TOL) -> InequalityReport:
    """S_{mu+nu}(r) S_b(r) >= S_mu(r) S_nu(r), with S_b = S_1 or S_eps."""
    _need(mu > 0.0 and nu > 0.0, "mu, nu > 0")
    _need(r >= 0.0, "r >= 0")
    _need(eps > 0.0, "eps > 0")
    top, top_e = _s(mu + nu, r, tol)
    a, ae = _s(mu, r, tol)
    b, be = _s(nu, r, tol)
    rhs, rhs_err = a * b, a * be + b * ae
    sides = {}
    for v, lam in (("S1", 1.0), ("S_eps", eps)):
        base, base_e = _s(lam, r, tol)
        lhs = top * base
        sides[v] = (lhs, rhs, lhs - rhs, top * base_e + base * top_e + rhs_err)
    return _with_variants("kimberling", _point(mu=mu, nu=nu, r=r), baseline, sides,
                          extra={"eps": eps})


def _normalized_root(lam: float, r: float, k: float, tol: float) -> tuple[float, float]:
    # [S_lam(r) / (k zeta(2 lam + 1))]^(1/(lam+1))
    s, z = _s(lam, r, tol), _zeta(2.0 * lam + 1.0)
    x, xe = _ratio(s, z)
    return _power(x / k, xe / k, 1.0 / (lam + 1.0))


def check_power_mean(mu: float, nu: float, r: float, two_factor: bool = False,
                     tol: float = DEFAULT_TOL) -> InequalityReport:
    """[S_nu/(k zeta(2nu+1))]^(1/(nu+1)) >= [S_mu/(k zeta(2mu+1))]^(1/(mu+1)), mu >= nu.

    k = 1 as stated, k = 2 with two_factor (the normalization S_lam(0) = 2 zeta(2 lam + 1)).
    """
    _need(mu >= nu > 0.0, "mu >= nu > 0")
    _need(r >= 0.0, "r >= 0")
    sides = {}
    for v, k in (("as_stated", 1.0), ("two_factor", 2.0)):
        lhs, le = _normalized_root(nu, r, k, tol)
        rhs, re_ = (lhs, le) if mu == nu else _normalized_root(mu, r, k, tol)
        sides[v] = (lhs, rhs, lhs - rhs, 0.0 if mu == nu else le + re_)
    return _with_variants("power_mean", _point(mu=mu, nu=nu, r=r),
                          "two_factor" if two_factor else "as_stated", sides)


def check_am_gm(mu: float, r: float, two_factor: bool = False,
                tol: float = DEFAULT_TOL) -> InequalityReport:
    """[S_mu/(k zeta(2mu+1))]^(1/(mu+1)) + zeta(2mu+3) S_mu / (zeta(2mu+1) S_{mu+1}) >= 2."""
    _need(mu > 0.0, "mu > 0")
    _need(r >= 0.0, "r >= 0")
    s, s1 = _s(mu, r, tol), _s(mu + 1.0, r, tol)
    z1, z3 = _zeta(2.0 * mu + 1.0), _zeta(2.0 * mu + 3.0)
    second, second_e = _prod((z3[0], z3[1], 1.0), (s[0], s[1], 1.0), (z1[0], z1[1], -1.0),
                             (s1[0], s1[1], -1.0))
    sides = {}
    for v, k in (("as_stated", 1.0), ("two_factor", 2.0)):
        first, first_e = _normalized_root(mu, r, k, tol)
        lhs = first + second
        sides[v] = (lhs, 2.0, lhs - 2.0, first_e + second_e)
    return _with_variants("am_gm", _point(mu=mu, r=r), "two_factor" if two_factor else "as_stated",
                          sides, extra={"ratio_term": second})


def landau_constant(lo: float = 0.1, hi: float = 2.4, xtol: float = 1e-10) -> tuple[float, float]:
    """Golden-section maximization of x^(1/3) J_0(x) on its first lobe; returns (sup, argmax).

    Later lobes peak lower, since x^(1/3) |J_0(x)| decays like x^(-1/6).
    """
    f = lambda x: x ** (1.0 / 3.0) * float(bessel_j(0.0, x))
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return f(x), x


def check_landau_upper(mu: float, r: float, tol: float = DEFAULT_TOL) -> InequalityReport:
    """S_mu(r) <= c_L sqrt(pi) Gamma(mu+7/6) zeta(mu-1/6) / (2^(mu-1/2) Gamma(mu+1) r^(mu+7/6))."""
    _need(mu > 7.0 / 6.0, "mu > 7/6")
    _need(r > 0.0, "r > 0")
    s, s_err = _s(mu, r, tol)
    g1, z, g0 = _gamma(mu + 7.0 / 6.0), _zeta(mu - 1.0 / 6.0), _gamma(mu + 1.0)
    core, core_err = _prod((g1[0], g1[1], 1.0), (z[0], z[1], 1.0), (g0[0], g0[1], -1.0))
    scale = LANDAU_C * math.sqrt(math.pi) / (2.0 ** (mu - 0.5) * r ** (mu + 7.0 / 6.0))
    rhs = scale * core
    return InequalityReport.build("landau_upper", _point(mu=mu, r=r), s, rhs, rhs - s,
                                  s_err + scale * core_err, extra={"c_L": LANDAU_C})


# -- zeta inequalities -------------------------------------------------------


def check_zeta_turan(mu: float) -> InequalityReport:
    """zeta(mu) zeta(mu+2) - zeta(mu+1)^2 >= 0 for mu > 1."""
    _need(mu > 1.0, "mu > 1")
    a, b, c = _zeta(mu), _zeta(mu + 1.0), _zeta(mu + 2.0)
    lhs, rhs = a[0] * c[0], b[0] * b[0]
    err = a[0] * c[1] + c[0] * a[1] + 2.0 * b[0] * b[1]
    return InequalityReport.build("zeta_turan", _point(mu=mu), lhs, rhs, lhs - rhs, err)


def compare_laforgia(mu: float) -> InequalityReport:
    """zeta(mu) zeta(mu+2) >= mu/(mu+1) zeta(mu+1)^2, set against the Turan form.

    The Turan right-hand side is (mu+1)/mu times this one, so the Turan
    form implies this one; extra carries the ratio and the Turan margin.
    """
    _need(mu > 1.0, "mu > 1")
    turan = check_zeta_turan(mu)
    rhs_t = turan.rhs
    rhs = (mu / (mu + 1.0)) * rhs_t
    ratio = rhs_t / rhs
    return InequalityReport.build("compare_laforgia", _point(mu=mu), turan.lhs, rhs, turan.lhs - rhs,
                                  turan.err_budget,
                                  extra={"turan_rhs": rhs_t, "turan_margin": turan.margin,
                                         "turan_verdict": turan.verdict.value,
                                         "rhs_ratio": ratio, "expected_ratio": (mu + 1.0) / mu,
                                         "turan_implies": ratio >= 1.0})


def check_zeta_upper_147(mu: float) -> InequalityReport:
    """zeta(2mu) <= sqrt(3 pi / 2) Gamma(mu+1) / Gamma(mu+1/2) for mu >= 1."""
    _need(mu >= 1.0, "mu >= 1")
    z = _zeta(2.0 * mu)
    g1, gh = _gamma(mu + 1.0), _gamma(mu + 0.5)
    rhs, rhs_err = _prod((g1[0], g1[1], 1.0), (gh[0], gh[1], -1.0))
    rhs *= math.sqrt(1.5 * math.pi)
    rhs_err *= math.sqrt(1.5 * math.pi)
    return InequalityReport.build("zeta_upper_147", _point(mu=mu), z[0], rhs, rhs - z[0], z[1] + rhs_err)


def check_zeta_ratio_zer(mu: float, exponent: str = "paper_3_2") -> InequalityReport:
    """zeta^e(2mu+1) / (zeta^2(2mu) zeta(2mu+3)) <= (mu+1) Gamma^2(mu+1/2) / Gamma^2(mu+1).

    e = 3/2 as typeset (paper_3_2) or e = 3 (derived_3).
    """
    _need(mu >= 1.0, "mu >= 1")
    z1, z2, z3 = _zeta(2.0 * mu + 1.0), _zeta(2.0 * mu), _zeta(2.0 * mu + 3.0)
    gh, g1 = _gamma(mu + 0.5), _gamma(mu + 1.0)
    rhs, rhs_err = _prod((gh[0], gh[1], 2.0), (g1[0], g1[1], -2.0))
    rhs *= mu + 1.0
    rhs_err *= mu + 1.0
    sides = {}
    for v, e in (("paper_3_2", 1.5), ("derived_3", 3.0)):
        lhs, lhs_err = _prod((z1[0], z1[1], e), (z2[0], z2[1], -2.0), (z3[0], z3[1], -1.0))
        sides[v] = (lhs, rhs, rhs - lhs, lhs_err + rhs_err)
    return _with_variants("zeta_ratio_zer", _point(mu=mu), exponent, sides)


def check_alzer(mu: float, r: float, tol: float = DEFAULT_TOL) -> InequalityReport:
    """S_mu(r) < 1/(r^2 + 1/6) for mu >= 1."""
    _need(mu >= 1.0, "mu >= 1")
    _need(r >= 0.0, "r >= 0")
    s, s_err = _s(mu, r, tol)
    rhs = 1.0 / (r * r + 1.0 / 6.0)
    return InequalityReport.build("alzer", _point(mu=mu, r=r), s, rhs, rhs - s, s_err)


def check_gaussian_lower(mu: float, r: float, tol: float = DEFAULT_TOL) -> InequalityReport:
    """2 zeta(2mu+1) exp(-(mu+1) zeta(2mu+3)/zeta(2mu+1) r^2) <= S_mu(r); equality at r = 0."""
    _need(mu > 0.0, "mu > 0")
    _need(r >= 0.0, "r >= 0")
    s, s_err = _s(mu, r, tol)
    z1, z3 = _zeta(2.0 * mu + 1.0), _zeta(2.0 * mu + 3.0)
    q, q_err = _ratio(z3, z1)
    expo = (mu + 1.0) * q * r * r
    lower = 2.0 * z1[0] * math.exp(-expo)
    lower_err = lower * (z1[1] / z1[0] + (mu + 1.0) * r * r * q_err + 4.0 * EPS * (1.0 + expo))
    return InequalityReport.build("gaussian_lower", _point(mu=mu, r=r), s, lower, s - lower,
                                  s_err + lower_err)


# -- grids and sweeps --------------------------------------------------------


@dataclass(frozen=True)
class Axis:
    """One grid parameter: a linear or log range, or an explicit list."""

    name: str
    values: tuple
    scale: str = "list"

    @classmethod
    def span(cls, name: str, lo: float, hi: float, count: int, scale: str = "linear") -> "Axis":
        if count < 2:
            raise DomainError(f"grid axis {name}: count must be >= 2, got {count}")
        if scale == "log":
            if not (lo > 0 and hi > 0):
                raise DomainError(f"grid axis {name}: log scale needs positive endpoints")
            vals = np.geomspace(lo, hi, count)
        elif scale == "linear":
            vals = np.linspace(lo, hi, count)
        else:
            raise DomainError(f"grid axis {name}: unknown scale {scale!r}")
        return cls(name, tuple(float(v) for v in vals), scale)

    def as_dict(self) -> dict:
        return {"name": self.name, "scale": self.scale, "values": list(self.values)}


def _grid_value(text: str):
    try:
        return float(text)
    except ValueError:
        return text


@dataclass(frozen=True)
class GridSpec:
    """Cartesian grid, iterated in axis order with the last axis fastest.

    Text form: comma-separated axes, each either name=lo:hi:count[:log]
    or an explicit list name=v1|v2|...
    """

    axes: tuple

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        axes = []
        for part in filter(None, (p.strip() for p in text.split(","))):
            name, sep, body = part.partition("=")
            name = name.strip()
            if not sep or not name or not body:
                raise DomainError(f"bad grid axis {part!r}; expected name=lo:hi:count[:log] or name=a|b")
            if ":" in body:
                fields = body.split(":")
                if len(fields) not in (3, 4) or (len(fields) == 4 and fields[3] not in ("log", "lin", "linear")):
                    raise DomainError(f"bad range {body!r}; expected lo:hi:count[:log]")
                try:
                    lo, hi, count = float(fields[0]), float(fields[1]), int(fields[2])
                except ValueError as exc:
                    raise DomainError(f"bad range {body!r}: {exc}") from None
                scale = "log" if len(fields) == 4 and fields[3] == "log" else "linear"
                axes.append(Axis.span(name, lo, hi, count, scale))
            else:
                axes.append(Axis(name, tuple(_grid_value(v.strip()) for v in body.split("|"))))
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise DomainError(f"repeated grid axis in {text!r}")
        if not axes:
            raise DomainError("empty grid")
        return cls(tuple(axes))

    def points(self) -> list[dict]:
        names = [a.name for a in self.axes]
        return [dict(zip(names, combo)) for combo in itertools.product(*(a.values for a in self.axes))]

    def as_dict(self) -> dict:
        return {"axes": [a.as_dict() for a in self.axes]}


def _flag(value) -> bool:
    if isinstance(value, str):
        if value.lower() in ("true", "1", "yes"):
            return True
        if value.lower() in ("false", "0", "no"):
            return False
        raise DomainError(f"expected a boolean, got {value!r}")
    return bool(value)


@dataclass(frozen=True)
class CheckSpec:
    name: str
    func: Callable
    params: tuple
    default_grid: str
    adjudication: bool = False
    takes_tol: bool = True
    adapt: Callable | None = None


def _gap(small: str, large: str):
    def adapt(point: dict) -> dict:
        kw = dict(point)
        if "gap" in kw:
            kw[large] = kw[small] + kw.pop("gap")
        return kw
    return adapt


def _with_flag(name: str):
    def adapt(point: dict) -> dict:
        kw = _gap("nu", "mu")(point) if "gap" in point else dict(point)
        if name in kw:
            kw[name] = _flag(kw[name])
        return kw
    return adapt


def _with_int(name: str):
    def adapt(point: dict) -> dict:
        kw = dict(point)
        if name in kw:
            kw[name] = int(kw[name])
        return kw
    return adapt


REGISTRY: dict[str, CheckSpec] = {spec.name: spec for spec in (
    CheckSpec("jensen_upper", check_jensen_upper, ("mu", "r", "p", "variant"),
              "mu=1|1.001|1.5|1.501|2|3|5,r=0.1:10:8:log,p=1.001|1.5|2|3,variant=general|sharp"),
    CheckSpec("special_upper", check_special_upper, ("r", "which", "variant"),
              "r=0.05:20:12:log,which=S1|S32,variant=as_typeset|rederived|rederived_sharp",
              adjudication=True),
    CheckSpec("recurrence_lower", check_recurrence_lower, ("mu", "r", "variant"),
              "mu=1.501|2|2.5|3|4,r=0.1:10:10:log,variant=as_stated|as_proved", adjudication=True),
    CheckSpec("turan_mathieu", check_turan_mathieu, ("mu", "r"),
              "mu=0.25:5:20,r=0.1:10:20:log"),
    CheckSpec("complete_monotonicity", check_complete_monotonicity, ("mu", "r", "m_max"),
              "mu=0.25:5:8,r=0.1:10:8:log,m_max=4", adapt=_with_int("m_max")),
    CheckSpec("ratio_monotone", check_ratio_monotone, ("mu1", "mu2", "gap", "r"),
              "mu1=0.25:4:6,gap=0.5|1|2,r=0.1:10:6:log", adapt=_gap("mu1", "mu2")),
    CheckSpec("kimberling", check_kimberling, ("mu", "nu", "r", "baseline", "eps"),
              "mu=0.2|0.5|1|2|3,nu=0.3|1|3,r=0.1:10:6:log,baseline=S1|S_eps", adjudication=True),
    CheckSpec("power_mean", check_power_mean, ("mu", "nu", "gap", "r", "two_factor"),
              "nu=0.5:3:5,gap=0|0.5|2,r=0.05:10:6:log,two_factor=false|true",
              adjudication=True, adapt=_with_flag("two_factor")),
    CheckSpec("am_gm", check_am_gm, ("mu", "r", "two_factor"),
              "mu=0.25:5:6,r=0.05:10:6:log,two_factor=false|true",
              adjudication=True, adapt=_with_flag("two_factor")),
    CheckSpec("landau_upper", check_landau_upper, ("mu", "r"),
              "mu=1.1677|1.5|2|3|5,r=0.1:20:8:log"),
    CheckSpec("zeta_turan", check_zeta_turan, ("mu",), "mu=1.1:30:30", takes_tol=False),
    CheckSpec("compare_laforgia", compare_laforgia, ("mu",), "mu=1.001|1.1|1.5|2|5|10|30",
              takes_tol=False),
    CheckSpec("zeta_upper_147", check_zeta_upper_147, ("mu",), "mu=1:20:20", takes_tol=False),
    CheckSpec("zeta_ratio_zer", check_zeta_ratio_zer, ("mu", "exponent"),
              "mu=1:20:20,exponent=paper_3_2|derived_3", adjudication=True, takes_tol=False),
    CheckSpec("alzer", check_alzer, ("mu", "r"), "mu=1:4:7,r=0.05:20:12:log"),
    CheckSpec("gaussian_lower", check_gaussian_lower, ("mu", "r"), "mu=0.25:5:8,r=0.05:10:10:log"),
)}


@dataclass
class SweepReport:
    name: str
    grid: GridSpec
    reports: list
    min_margin: float
    failures: list
    within_noise: int
    adjudication: bool = False
    skipped: list = field(default_factory=list)

    @property
    def holds(self) -> int:
        return sum(r.verdict is Verdict.HOLDS for r in self.reports)

    def variant_table(self) -> dict:
        """Per-variant verdict counts and smallest margin (the adjudication table)."""
        table: dict = {}
        for rep in self.reports:
            row = table.setdefault(rep.variant or "-", {"holds": 0, "fails": 0, "within_noise": 0,
                                                        "min_margin": math.inf})
            row[rep.verdict.value] += 1
            row["min_margin"] = min(row["min_margin"], rep.margin)
        return table

    def as_dict(self) -> dict:
        return {
            "check": self.name,
            "grid": self.grid.as_dict(),
            "adjudication": self.adjudication,
            "points": len(self.reports),
            "holds": self.holds,
            "fails": len(self.failures),
            "within_noise": self.within_noise,
            "min_margin": self.min_margin,
            "variants": self.variant_table(),
            "skipped": [dict(s) for s in self.skipped],
            "reports": [r.as_dict() for r in self.reports],
        }


def run_check(name: str, point: dict, tol: float = SWEEP_TOL) -> InequalityReport:
    """Run a registered check at one grid point."""
    spec = _spec(name)
    unknown = set(point) - set(spec.params)
    if unknown:
        raise DomainError(f"{name} does not take {sorted(unknown)}; parameters are {list(spec.params)}")
    kw = spec.adapt(point) if spec.adapt else dict(point)
    if spec.takes_tol:
        kw["tol"] = tol
    return spec.func(**kw)


def _spec(name: str) -> CheckSpec:
    try:
        return REGISTRY[name]
    except KeyError:
        raise DomainError(f"unknown check {name!r}; known: {', '.join(REGISTRY)}") from None


def sweep(name: str, grid: GridSpec | str | None = None, tol: float = SWEEP_TOL) -> SweepReport:
    """Run a check over every grid point, in grid order.

    Points outside the check's hypotheses are recorded under skipped; a
    grid with no admissible point is an error.
    """
    spec = _spec(name)
    if grid is None:
        grid = spec.default_grid
    if isinstance(grid, str):
        grid = GridSpec.parse(grid)
    reports, skipped = [], []
    for point in grid.points():
        try:
            reports.append(run_check(name, point, tol))
        except HypothesisError as exc:
            skipped.append({**point, "reason": str(exc)})
    if not reports:
        raise HypothesisError(f"no grid point satisfies the hypotheses of {name}")
    failures = [r for r in reports if r.verdict is Verdict.FAILS]
    noise = sum(r.verdict is Verdict.WITHIN_NOISE for r in reports)
    return SweepReport(name, grid, reports, min(r.margin for r in reports), failures, noise,
                       spec.adjudication, skipped)
