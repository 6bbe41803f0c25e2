"""Command-line front end: eval, xcheck, verify, constants.

Every command emits one document (JSON by default, CSV on request) with
schema_version "1".  Floats are written with 17 significant digits so
that a re-parse reproduces them bit for bit.

Exit codes: 0 success, 2 domain error, 3 non-convergence,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field

from .errors import AccuracyError, ConvergenceError, DomainError
from .inequalities import LANDAU_C, REGISTRY, GridSpec, landau_constant, sweep
from .mathieu import Evaluation, MathieuPoint, mathieu_s
from .reports import rounding_slack
from .representations import (
    KernelConfig,
    C_mu_of_r,
    c_mu,
    c_mu_1,
    kernel_K,
    kernel_K_mu,
    s_via_bessel_integral,
    s_via_emersleben,
    s_via_laplace,
)
from .specfun import BESSEL_ATOL, EPS, GAMMA_RTOL, bessel_j, clausen2, gamma_fn, zeta_with_error

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 2, 3, 4
EVAL_TOL = 1e-8
SWEEP_TOL = 1e-6
LANDAU_AGREEMENT = 1e-6
FUNCTIONS = ("S", "S_mu", "zeta", "gamma", "besselj", "clausen2", "K", "K_mu")
METHODS = ("direct", "emersleben", "bessel", "laplace")

GRID_HELP = """\
grid syntax: comma-separated axes, each either
  name=lo:hi:count        linear range (count >= 2)
  name=lo:hi:count:log    logarithmic range
  name=a|b|c              explicit values (numbers or variant names)
example: "mu=0.5:5:10,r=0.1:10:10:log"
"""


@dataclass
class OutputRecord:
    command: str
    inputs: dict
    results: list
    timing: float = 0.0
    schema_version: str = SCHEMA_VERSION
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"schema_version": self.schema_version, "command": self.command,
               "inputs": self.inputs, "results": self.results, "timing": self.timing}
        out.update(self.extra)
        return out


# -- serialization -----------------------------------------------------------


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _plain(obj):
    # numpy scalars and tuples into plain Python containers
    if hasattr(obj, "item") and not isinstance(obj, (list, dict, str)):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    return obj


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """json.dumps with every float written as %.17g."""
    obj = _plain(obj)
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [inner + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cell(v) -> str:
    v = _plain(v)
    if isinstance(v, float):
        return format_float(v)
    return "" if v is None else str(v)


def to_csv(header: list, rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(h)) for h in header])
    return buf.getvalue()


def _inequality_rows(results: list[dict]) -> tuple[list, list[dict]]:
    params: list[str] = []
    rows = []
    for sw in results:
        for rep in sw["reports"]:
            for k in rep["point"]:
                if k not in params:
                    params.append(k)
            rows.append({"check": rep["check"], "variant": rep["variant"], **rep["point"],
                         **{k: rep[k] for k in ("lhs", "rhs", "margin", "err_budget", "verdict")}})
    return ["check", "variant", *params, "lhs", "rhs", "margin", "err_budget", "verdict"], rows


def _flat_rows(results: list[dict]) -> tuple[list, list[dict]]:
    header: list[str] = []
    rows = []
    for res in results:
        row = {k: v for k, v in res.items() if not isinstance(v, (dict, list))}
        for k in row:
            if k not in header:
                header.append(k)
        rows.append(row)
    return header, rows


def render(record: OutputRecord, fmt: str) -> str:
    if fmt == "json":
        return to_json(record.as_dict()) + "\n"
    if record.command == "verify":
        header, rows = _inequality_rows(record.results)
    else:
        header, rows = _flat_rows(record.results)
    return to_csv(header, rows)


# -- eval --------------------------------------------------------------------


def _need_args(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise DomainError(f"{args.function} needs " + ", ".join("--" + n for n in missing))


def _kernel_error(t: float, value: float) -> float:
    # Clausen series and the log term each carry a few ulps, scaled by t
    return 8.0 * EPS * max(1.0, t) * (1.0 + abs(math.log(2.0 * abs(math.sin(0.5 * t))))) + 4.0 * EPS * abs(value)


def evaluate(args) -> dict:
    f = args.function
    if f in ("S", "S_mu"):
        mu = 1.0 if f == "S" else args.mu
        if f == "S_mu":
            _need_args(args, "mu", "r")
        else:
            _need_args(args, "r")
        ev = mathieu_s(MathieuPoint(mu, args.r), args.tol)
        return {"function": f, **ev.as_dict(), **ev.details}
    if f == "zeta":
        _need_args(args, "s")
        v, e = zeta_with_error(args.s)
        return {"function": f, "value": v, "err_bound": e}
    if f == "gamma":
        _need_args(args, "x")
        v = gamma_fn(args.x)
        return {"function": f, "value": v, "err_bound": GAMMA_RTOL * abs(v)}
    if f == "besselj":
        _need_args(args, "nu", "x")
        return {"function": f, "value": bessel_j(args.nu, args.x), "err_bound": BESSEL_ATOL}
    if f == "clausen2":
        _need_args(args, "theta")
        v = clausen2(args.theta)
        return {"function": f, "value": v, "err_bound": 8.0 * EPS * max(1.0, abs(args.theta))}
    if f == "K":
        _need_args(args, "t")
        v = kernel_K(args.t)
        return {"function": f, "value": v, "err_bound": _kernel_error(args.t, v)}
    if f == "K_mu":
        _need_args(args, "mu", "t")
        ev = kernel_K_mu(KernelConfig(args.mu), args.t, args.tol)
        return {"function": f, **ev.as_dict(), **ev.details}
    raise DomainError(f"unknown function {f!r}")


def cmd_eval(args) -> tuple[OutputRecord, int]:
    inputs = {k: getattr(args, k) for k in ("function", "mu", "r", "s", "x", "nu", "t", "theta", "tol")
              if getattr(args, k) is not None}
    return OutputRecord("eval", inputs, [evaluate(args)]), EXIT_OK


# -- xcheck ------------------------------------------------------------------


def _by_method(method: str, p: MathieuPoint, tol: float) -> Evaluation:
    if method == "direct":
        return mathieu_s(p, tol)
    if p.r == 0.0:
        raise DomainError(f"method {method} needs r > 0")
    if method == "emersleben":
        if p.mu != 1.0:
            raise DomainError("the emersleben method applies to mu = 1 only")
        return s_via_emersleben(p.r, tol)
    if method == "bessel":
        return s_via_bessel_integral(p, tol)
    if method == "laplace":
        return s_via_laplace(p, tol)
    raise DomainError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def cmd_xcheck(args) -> tuple[OutputRecord, int]:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if not methods:
        raise DomainError("no methods given")
    p = MathieuPoint(args.mu, args.r)
    evals = {m: _by_method(m, p, args.tol) for m in methods}
    results = []
    for m, ev in evals.items():
        row = ev.as_dict()
        row["route"] = row.pop("method")
        results.append({"method": m, **row})
    pairs = []
    consistent = True
    for i, a in enumerate(methods):
        for b in methods[i + 1:]:
            ea, eb = evals[a], evals[b]
            diff = abs(ea.value - eb.value)
            budget = float(ea.err_bound + eb.err_bound) + rounding_slack(ea.value, eb.value)
            ok = diff <= budget
            consistent &= ok
            pairs.append({"pair": f"{a}-{b}", "abs_diff": diff,
                          "rel_diff": diff / abs(ea.value) if ea.value else diff,
                          "err_budget": budget, "consistent": ok})
    record = OutputRecord("xcheck", {"mu": args.mu, "r": args.r, "methods": methods, "tol": args.tol},
                          results, extra={"pairwise": pairs, "consistent": consistent})
    return record, EXIT_OK if consistent else EXIT_VERIFY


# -- verify ------------------------------------------------------------------


def cmd_verify(args) -> tuple[OutputRecord, int]:
    if args.check == "all":
        if args.grid is not None:
            raise DomainError("--grid applies to a single --check, not to 'all'")
        names = list(REGISTRY)
    else:
        if args.check not in REGISTRY:
            raise DomainError(f"unknown check {args.check!r}; known: {', '.join(REGISTRY)}")
        names = [args.check]
    grid = GridSpec.parse(args.grid) if args.grid is not None else None
    sweeps = [sweep(n, grid, args.tol) for n in names]
    failing = [s.name for s in sweeps if s.failures and not s.adjudication]
    summary = [{"check": s.name, "adjudication": s.adjudication, "points": len(s.reports),
                "holds": s.holds, "fails": len(s.failures), "within_noise": s.within_noise,
                "min_margin": s.min_margin} for s in sweeps]
    record = OutputRecord("verify", {"check": args.check, "grid": args.grid, "tol": args.tol},
                          [s.as_dict() for s in sweeps],
                          extra={"summary": summary, "failing_checks": failing})
    return record, EXIT_VERIFY if failing else EXIT_OK


# -- constants ---------------------------------------------------------------


def cmd_constants(args) -> tuple[OutputRecord, int]:
    sup, argmax = landau_constant()
    out = {"c_L": LANDAU_C, "c_L_recomputed": sup, "c_L_argmax": argmax,
           "c_L_agrees": abs(sup - LANDAU_C) <= LANDAU_AGREEMENT}
    if args.mu is not None:
        out["c_mu"] = c_mu(args.mu)
        out["c_mu_1"] = c_mu_1(args.mu)
        if args.r is not None:
            out["C_mu_of_r"] = C_mu_of_r(args.mu, args.r)
    elif args.r is not None:
        raise DomainError("C_mu(r) needs --mu as well as --r")
    inputs = {k: getattr(args, k) for k in ("mu", "r") if getattr(args, k) is not None}
    return OutputRecord("constants", inputs, [out]), EXIT_OK


# -- driver ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mathieu", description="Generalized Mathieu series toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tol):
        p.add_argument("--tol", type=float, default=tol, help=f"tolerance (default {tol:g})")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write the document here instead of stdout")

    ev = sub.add_parser("eval", help="evaluate one function")
    ev.add_argument("function", choices=FUNCTIONS)
    for name in ("mu", "r", "s", "x", "nu", "t", "theta"):
        ev.add_argument(f"--{name}", type=float)
    common(ev, EVAL_TOL)

    xc = sub.add_parser("xcheck", help="compare S_mu(r) across representations")
    xc.add_argument("--mu", type=float, required=True)
    xc.add_argument("--r", type=float, required=True)
    xc.add_argument("--methods", default="direct,bessel",
                    help=f"comma-separated subset of {','.join(METHODS)}")
    common(xc, EVAL_TOL)

    ve = sub.add_parser("verify", help="run inequality sweeps", epilog=GRID_HELP,
                        formatter_class=argparse.RawDescriptionHelpFormatter)
    ve.add_argument("--check", default="all", help="check name or 'all': " + ", ".join(REGISTRY))
    ve.add_argument("--grid", help="grid for a single check (see below)")
    common(ve, SWEEP_TOL)

    co = sub.add_parser("constants", help="representation constants and the Landau constant")
    co.add_argument("--mu", type=float)
    co.add_argument("--r", type=float)
    co.add_argument("--format", choices=("json", "csv"), default="json")
    co.add_argument("--out")
    return parser


COMMANDS = {"eval": cmd_eval, "xcheck": cmd_xcheck, "verify": cmd_verify, "constants": cmd_constants}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    tol = getattr(args, "tol", None)
    if tol is not None and not tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_DOMAIN
    start = time.perf_counter()
    try:
        record, code = COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, AccuracyError) as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    record.timing = 1000.0 * (time.perf_counter() - start)
    text = render(record, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
