import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from submajor.boxes import Box, box_from_json, box_to_json, power_universal, unit_box
from submajor.cli import run

PLUS = np.full((2, 2), 0.5)


def write_box(tmp_path, name, B):
    p = tmp_path / name
    p.write_text(json.dumps(box_to_json(B)))
    return str(p)


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def plus(tmp_path):
    return write_box(tmp_path, "plus.json", Box((PLUS,), np.eye(2) / 2))


@pytest.fixture
def same(tmp_path):
    sigma = np.diag([0.3, 0.7])
    return write_box(tmp_path, "same.json", Box((sigma,), sigma))


def test_check_identical_files(plus):
    code, out, _ = call("check", plus, plus)
    data = json.loads(out)
    assert code == 0
    assert data["feasible"] is True and abs(data["slack"]) < 1e-6
    assert data["witness"]["dim_in"] == 2


def test_check_fails_with_exit_one(tmp_path):
    one = write_box(tmp_path, "one.json", unit_box(1))
    u = write_box(tmp_path, "u.json", power_universal(1))
    code, out, _ = call("check", one, u)
    assert code == 1
    assert json.loads(out)["feasible"] is False
    assert call("check", u, one)[0] == 0


def test_divergence(plus):
    code, out, _ = call("divergence", plus, "--i", "1", "--alpha", "2")
    data = json.loads(out)
    assert code == 0
    assert data["D"] == pytest.approx(1.0)
    assert data["f"] == pytest.approx(2.0)
    code, out, _ = call("divergence", plus, "--alpha", "inf", "--alpha", "3", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["i", "alpha", "f", "D"]
    assert rows[1][1] == "inf" and float(rows[1][3]) == pytest.approx(1.0)


def test_divergence_default_grid(plus):
    data = json.loads(call("divergence", plus)[1])
    assert len(data) == 101
    assert data[-1]["alpha"] == "inf"


def test_exponent(same):
    code, out, _ = call("exponent", same, "--r", "0.3")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(0.3, abs=1e-4)
    data = json.loads(call("exponent", same, "--r", "0.3", "--r", "0.6")[1])
    assert [d["r"] for d in data] == [0.3, 0.6]


def test_check_asymptotic(plus, tmp_path):
    half = write_box(tmp_path, "half.json", Box((PLUS / 2,), np.eye(2) / 2))
    code, out, _ = call("check-asymptotic", plus, half, "--grid", "16")
    assert code == 0 and json.loads(out)["holds"] is True
    code, out, _ = call("check-asymptotic", half, plus, "--grid", "16", "--format", "csv")
    assert code == 1
    assert out.startswith("i,alpha,f_A,f_B,margin\r\n")


def test_strict_cert(tmp_path, plus):
    u = write_box(tmp_path, "u.json", power_universal(1))
    one = write_box(tmp_path, "one.json", unit_box(1))
    assert call("strict-cert", u, one)[0] == 0
    code, out, _ = call("strict-cert", plus, plus)
    assert code == 1 and json.loads(out)["all_strict"] is False


def test_region(tmp_path):
    pure = write_box(tmp_path, "p.json", Box((np.diag([1.0, 0.0]),), np.eye(2) / 2))
    assert call("region", pure, "--R", "0.6", "--r", "1.5")[0] == 0
    assert call("region", pure, "--R", "0.4", "--r", "1.5")[0] == 1
    assert call("region", pure, "--R", "0.4", "--R", "1", "--r", "1.5")[0] == 2


def test_tradeoff(plus):
    code, out, _ = call("tradeoff", plus, "--grid", "3")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["alpha", "beta"]
    assert len(rows) == 4
    assert float(rows[-1][1]) == 0.0
    data = json.loads(call("tradeoff", plus, "--alpha", "0.5", "--format", "json")[1])
    assert data["curve"][0]["alpha"] == 0.5


def test_discriminate(tmp_path):
    B = write_box(tmp_path, "b.json", Box((np.diag([1.0, 0.0]), np.diag([0.0, 1.0])), np.eye(2) / 2))
    code, out, _ = call("discriminate", B, "--a", "1", "--a", "1", "--b", "0.5", "--b", "0.5", "--cross-check")
    data = json.loads(out)
    assert code == 0 and len(data["povm"]) == 2
    assert data["solver_stats"]["cross_check"]["agrees"]
    assert call("discriminate", B, "--a", "1", "--a", "1", "--b", "0.2", "--b", "0.2")[0] == 1


def test_power_universal(tmp_path, plus):
    code, out, _ = call("power-universal", plus, "--verify")
    data = json.loads(out)
    assert code == 0
    assert data["verified"]["u^k >= box"]["feasible"]
    u = box_from_json(json.loads(call("power-universal", "--m", "3")[1])["u"])
    assert u.m == 3 and u.sigma[0, 0] == 1.0


def test_box_power_flag(plus):
    data = json.loads(call("divergence", plus, "--i", "1", "--alpha", "2", "--n", "2")[1])
    assert data["f"] == pytest.approx(4.0)


def test_malformed_json_reports_position(tmp_path, plus):
    bad = tmp_path / "bad.json"
    bad.write_text('{"m": 1,\n  "dim": }')
    code, out, err = call("check", str(bad), plus)
    assert code == 2 and out == ""
    assert "bad.json:2:" in err


def test_invalid_box_reports_field(tmp_path, plus):
    obj = box_to_json(Box((PLUS,), np.eye(2)))
    obj["sigma"]["re"] = [[1.0, 0.0], [0.0, -1.0]]
    p = tmp_path / "neg.json"
    p.write_text(json.dumps(obj))
    code, _, err = call("check", str(p), plus)
    assert code == 2 and "sigma" in err
    assert call("check", str(tmp_path / "missing.json"), plus)[0] == 2


def test_bad_flags(plus):
    assert call("divergence", plus, "--alpha", "0.5")[0] == 2
    assert call("nonsense")[0] == 2


def test_solver_error_exit_two(monkeypatch, plus):
    from submajor import submaj
    from submajor.errors import SolverError

    def boom(*a, **k):
        raise SolverError("no convergence", {"status": "max_iter", "iterations": 200})

    monkeypatch.setattr(submaj, "check_submajorization", boom)
    code, _, err = call("check", plus, plus)
    assert code == 2
    assert '"status": "max_iter"' in err


def test_output_is_deterministic(plus):
    assert call("check", plus, plus)[1] == call("check", plus, plus)[1]


def test_module_entry_point(plus):
    proc = subprocess.run(
        [sys.executable, "-m", "submajor", "divergence", plus, "--i", "1", "--alpha", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["D"] == pytest.approx(1.0)
