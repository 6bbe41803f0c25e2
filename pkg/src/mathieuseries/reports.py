"""Report records shared by the identity checks and the inequality checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .specfun import EPS

ROUNDING_ULPS = 4.0


class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    WITHIN_NOISE = "within_noise"


def rounding_slack(*values: float) -> float:
    """Four units in the last place of the largest magnitude involved."""
    finite = [abs(v) for v in values if math.isfinite(v)]
    return ROUNDING_ULPS * EPS * max(finite, default=0.0)


def verdict_for(margin: float, err_budget: float) -> Verdict:
    if margin > err_budget:
        return Verdict.HOLDS
    if margin < -err_budget:
        return Verdict.FAILS
    return Verdict.WITHIN_NOISE


@dataclass(frozen=True)
class InequalityReport:
    """One inequality evaluated at one parameter point.

    margin is oriented so that a non-negative value means the inequality
    holds as written; err_budget is the combined evaluation error.
    """

    name: str
    point: dict
    lhs: float
    rhs: float
    margin: float
    err_budget: float
    verdict: Verdict
    variant: str | None = None
    adjudication: bool = False
    notes: tuple = ()
    extra: dict = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, name: str, point: dict, lhs: float, rhs: float, margin: float,
              errors: float, *, variant: str | None = None, adjudication: bool = False,
              notes: tuple = (), extra: dict | None = None) -> "InequalityReport":
        budget = errors + rounding_slack(lhs, rhs)
        return cls(name, dict(point), lhs, rhs, margin, budget, verdict_for(margin, budget),
                   variant, adjudication, tuple(notes), dict(extra or {}))

    def as_dict(self) -> dict:
        out = {
            "check": self.name,
            "variant": self.variant,
            "point": dict(self.point),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "err_budget": self.err_budget,
            "verdict": self.verdict.value,
            "adjudication": self.adjudication,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if self.extra:
            out["extra"] = dict(self.extra)
        return out


@dataclass(frozen=True)
class IdentityReport:
    """Quadrature side against closed-form side of an identity.

    margin = |lhs - rhs|; the identity is confirmed when the margin is
    inside the combined error budget.
    """

    name: str
    point: dict
    lhs: float
    rhs: float
    margin: float
    err_budget: float
    rel_error: float
    agrees: bool
    notes: tuple = ()

    @classmethod
    def build(cls, name: str, point: dict, lhs: float, rhs: float, errors: float,
              notes: tuple = ()) -> "IdentityReport":
        margin = abs(lhs - rhs)
        budget = errors + rounding_slack(lhs, rhs)
        rel = margin / abs(rhs) if rhs != 0 else margin
        return cls(name, dict(point), lhs, rhs, margin, budget, rel, margin <= budget, tuple(notes))

    def as_dict(self) -> dict:
        return {
            "identity": self.name,
            "point": dict(self.point),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "err_budget": self.err_budget,
            "rel_error": self.rel_error,
            "agrees": self.agrees,
            "notes": list(self.notes),
        }
