"""Generalized Mathieu series S_mu(r), related zeta quantities, and
numerical certification of inequalities between them."""

from .errors import AccuracyError, ConvergenceError, DomainError, HypothesisError
from .inequalities import GridSpec, SweepReport, sweep
from .mathieu import (
    Evaluation,
    MathieuPoint,
    Method,
    mathieu_s,
    mathieu_s_deriv_mu,
    mathieu_s_deriv_r,
    tail_bound,
)
from .reports import IdentityReport, InequalityReport, Verdict
from .specfun import bessel_j, clausen2, gamma_fn, zeta_fn

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ConvergenceError",
    "DomainError",
    "Evaluation",
    "GridSpec",
    "HypothesisError",
    "IdentityReport",
    "InequalityReport",
    "MathieuPoint",
    "Method",
    "SweepReport",
    "Verdict",
    "bessel_j",
    "clausen2",
    "gamma_fn",
    "mathieu_s",
    "mathieu_s_deriv_mu",
    "mathieu_s_deriv_r",
    "sweep",
    "tail_bound",
    "zeta_fn",
]
