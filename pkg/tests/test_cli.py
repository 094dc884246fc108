from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qjl.cli import RunConfig, main
from qjl.series import QYSeries


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_identity_command(capsys):
    code, out, _ = run(capsys, "identity", "--lhs", "E4", "--rhs", "P^2 - 5*e4", "-N", "20")
    assert code == 0


def test_identity_failure_reports_difference(capsys):
    code, out, _ = run(capsys, "identity", "--lhs", "E4", "--rhs", "P^2", "-N", "8")
    assert code == 1 and "first difference" in out


def test_genus_recognize(capsys):
    code, out, _ = run(capsys, "genus", "--model", '{"type":"hypersurface","n":3,"d":1}', "--recognize")
    assert code == 0 and out.strip() == "9/2*E1^2 - 3/2*P"


def test_dmvv_point(capsys):
    code, out, _ = run(capsys, "dmvv", "--model", "point", "--layers", "5", "--output", "json")
    assert code == 0
    data = json.loads(out)
    assert [layer[0]["value"] for layer in data["layers"]] == ["1", "1", "2", "3", "5", "7"]


def test_usage_errors(capsys):
    assert run(capsys, "expand", "--expr", "E1 + + E3")[0] == 2
    assert run(capsys, "genus", "--model", "nosuch")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    code, _, err = run(capsys, "expand", "--expr", "E1 + + E3")
    assert "line 1, column 6" in err


def test_precision_error_exit(capsys):
    code, _, err = run(capsys, "sym-genus", "--model", "K3", "-n", "3", "-M", "4", "-N", "3")
    assert code == 3 and "precision" in err


def test_expand_json_round_trip(capsys):
    code, out, _ = run(capsys, "expand", "--expr", "E1*P", "-N", "5", "--output", "json")
    s = QYSeries.from_json(json.loads(out))
    assert s.to_json() == json.loads(out)


def test_shift_check(capsys):
    assert run(capsys, "shift-check", "--expr", "E1", "-m", "1", "--expected", "E1 - 1")[0] == 0
    assert run(capsys, "shift-check", "--expr", "E1", "-m", "1")[0] == 1


def test_chi_y(capsys):
    code, out, _ = run(capsys, "chi-y", "--model", "P2")
    assert code == 0 and out.splitlines()[0] == "1 - y + y^2"


def test_rc_bracket(capsys):
    code, out, _ = run(capsys, "rc-bracket", "--f", "P", "--g", "E3")
    assert code == 0 and out.splitlines()[0] == "-60*E3*e4"


def test_pair_genus(capsys):
    pair = '{"type":"preset","name":"F1","divisors":[{"class":"E","delta":1}]}'
    assert run(capsys, "pair-genus", "--model", pair, "--compare", "P2")[0] == 0
    assert run(capsys, "pair-genus", "--model", "F1", "--compare", "P2")[0] == 1


def test_config_from_env(monkeypatch):
    monkeypatch.setenv("QJL_TRUNC_N", "7")
    assert RunConfig.from_env().trunc_N == 7
    monkeypatch.setenv("QJL_TRUNC_N", "-1")
    with pytest.raises(ValueError):
        RunConfig.from_env()


def test_deterministic_exit_codes():
    cmd = [sys.executable, "-m", "qjl.cli", "depth", "--expr", "E1^2*e2 + P"]
    runs = [subprocess.run(cmd, capture_output=True, text=True) for _ in range(2)]
    assert runs[0].returncode == runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout == "(2, 1)\n"
