import csv
import io
import json
import math

import pytest

from mathieuseries import cli
from mathieuseries.errors import ConvergenceError
from mathieuseries.inequalities import REGISTRY
from oracles import besselj_ref, clausen_ref, gamma_ref, s_ref, zeta_ref


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_eval_s_example(capsys):
    doc = run_json(capsys, "eval", "S", "--r", "1")
    assert doc["schema_version"] == "1"
    assert doc["command"] == "eval"
    res = doc["results"][0]
    assert res["value"] == pytest.approx(float(s_ref(1.0, 1.0)), rel=1e-8)
    assert res["err_bound"] <= 1e-8 * res["value"] * 10
    assert doc["timing"] >= 0


@pytest.mark.parametrize("argv,ref", [
    (("zeta", "--s", "3"), lambda: zeta_ref(3)),
    (("gamma", "--x", "4.5"), lambda: gamma_ref(4.5)),
    (("besselj", "--nu", "1.5", "--x", "7"), lambda: besselj_ref(1.5, 7)),
    (("clausen2", "--theta", "1"), lambda: clausen_ref(1)),
    (("S_mu", "--mu", "2", "--r", "0.5"), lambda: s_ref(2.0, 0.5)),
])
def test_eval_functions(capsys, argv, ref):
    doc = run_json(capsys, "eval", *argv)
    assert doc["results"][0]["value"] == pytest.approx(float(ref()), rel=1e-8)


def test_eval_kernel_at_pi(capsys):
    doc = run_json(capsys, "eval", "K", "--t", repr(math.pi))
    assert doc["results"][0]["value"] == pytest.approx(math.pi * math.log(2.0), rel=1e-12)


@pytest.mark.parametrize("argv", [
    ("eval", "zeta", "--s", "0.5"),
    ("eval", "S_mu", "--r", "1"),
    ("eval", "S", "--r", "-1"),
    ("eval", "S", "--r", "1", "--tol", "0"),
    ("verify", "--check", "no_such_check"),
    ("verify", "--check", "turan_mathieu", "--grid", "mu=1:2"),
    ("verify", "--grid", "mu=1:2:3"),
    ("xcheck", "--mu", "2", "--r", "1", "--methods", "direct,emersleben"),
    ("xcheck", "--mu", "1", "--r", "1", "--methods", "direct,cesaro"),
    ("constants", "--r", "1"),
])
def test_domain_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_convergence_error_exit_3(capsys, monkeypatch):
    def stuck(p, tol, **kw):
        raise ConvergenceError("stuck")
    monkeypatch.setattr(cli, "mathieu_s", stuck)
    code, out, err = run(capsys, "eval", "S", "--r", "1")
    assert code == 3 and "stuck" in err


def test_verify_failure_exit_4(capsys, monkeypatch):
    spec = REGISTRY["zeta_turan"]
    flipped = lambda mu: spec.func(mu).__class__.build("zeta_turan", {"mu": mu}, 0.0, 1.0, -1.0, 0.0)
    monkeypatch.setitem(REGISTRY, "zeta_turan", spec.__class__(**{**spec.__dict__, "func": flipped}))
    code, out, _ = run(capsys, "verify", "--check", "zeta_turan", "--grid", "mu=2|3")
    assert code == 4
    assert json.loads(out)["failing_checks"] == ["zeta_turan"]


def test_xcheck_inconsistent_exit_4(capsys, monkeypatch):
    real = cli._by_method

    def skewed(method, p, tol):
        ev = real(method, p, tol)
        if method == "bessel":
            ev = ev.__class__(**{**ev.__dict__, "value": ev.value * (1 + 1e-3)})
        return ev
    monkeypatch.setattr(cli, "_by_method", skewed)
    code, out, _ = run(capsys, "xcheck", "--mu", "1", "--r", "1")
    assert code == 4
    assert json.loads(out)["consistent"] is False


@pytest.mark.parametrize("mu,r,methods", [("1", "1", "direct,emersleben,bessel"), ("2.5", "0.5", "direct,bessel")])
def test_xcheck_examples(capsys, mu, r, methods):
    doc = run_json(capsys, "xcheck", "--mu", mu, "--r", r, "--methods", methods)
    assert doc["consistent"] is True
    assert [row["method"] for row in doc["results"]] == methods.split(",")
    n = len(methods.split(","))
    assert len(doc["pairwise"]) == n * (n - 1) // 2
    ref = float(s_ref(float(mu), float(r)))
    for row in doc["results"]:
        assert row["value"] == pytest.approx(ref, rel=1e-7)


def test_json_floats_round_trip_bit_exact(capsys):
    from mathieuseries import mathieu_s, MathieuPoint
    doc = run_json(capsys, "eval", "S_mu", "--mu", "1.5", "--r", "0.3")
    direct = mathieu_s(MathieuPoint(1.5, 0.3), 1e-8).value
    assert doc["results"][0]["value"] == direct
    assert cli.format_float(0.1) == "0.10000000000000001"
    for x in (math.pi, 1e-300, 2.0 ** -1074, 123456789.123):
        assert float(cli.format_float(x)) == x


def test_json_non_finite_and_nested():
    text = cli.to_json({"a": [1.0, math.inf, None, True], "b": {"c": "x"}})
    doc = json.loads(text)
    assert doc["a"][0] == 1.0 and doc["a"][2] is None and doc["a"][3] is True
    assert doc["b"] == {"c": "x"}


def test_output_is_deterministic_apart_from_timing(capsys):
    argv = ("verify", "--check", "alzer", "--grid", "mu=1:3:3,r=0.1:5:4:log")
    a = run_json(capsys, *argv)
    b = run_json(capsys, *argv)
    a.pop("timing"), b.pop("timing")
    assert a == b


def test_verify_turan_grid(capsys):
    doc = run_json(capsys, "verify", "--check", "turan_mathieu", "--grid", "mu=0.5:5:20,r=0.1:10:20:log")
    (summary,) = doc["summary"]
    assert summary["points"] == 400 and summary["fails"] == 0
    assert summary["min_margin"] > 0
    assert doc["failing_checks"] == []


def test_verify_csv_columns(capsys):
    code, out, _ = run(capsys, "verify", "--check", "power_mean", "--grid",
                       "nu=1:2:2,gap=0.5|1,r=1,two_factor=false|true", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8
    header = list(rows[0])
    assert header[:2] == ["check", "variant"]
    assert header[-5:] == ["lhs", "rhs", "margin", "err_budget", "verdict"]
    # the gap axis is resolved into the second parameter
    assert {"mu", "nu", "r"} <= set(header)
    assert {row["verdict"] for row in rows} <= {"holds", "fails", "within_noise"}


def test_verify_all(capsys):
    doc = run_json(capsys, "verify")
    assert {s["check"] for s in doc["summary"]} == set(REGISTRY)
    assert doc["failing_checks"] == []


def test_out_file(tmp_path, capsys):
    target = tmp_path / "doc.json"
    code, out, _ = run(capsys, "eval", "zeta", "--s", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["results"][0]["value"] == pytest.approx(math.pi ** 2 / 6, rel=1e-14)


def test_constants(capsys):
    doc = run_json(capsys, "constants", "--mu", "2", "--r", "1")
    res = doc["results"][0]
    assert res["c_L"] == 0.78574687
    assert abs(res["c_L_recomputed"] - 0.78574687) <= 1e-6
    assert res["c_L_agrees"] is True
    assert {"c_mu", "c_mu_1", "C_mu_of_r"} <= set(res)


def test_constants_csv(capsys):
    code, out, _ = run(capsys, "constants", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and "c_L" in rows[0]


def test_missing_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2
