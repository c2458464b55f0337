import json
import subprocess
import sys

import pytest

import ternxc.spectrum
from ternxc.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_lemma_check_r1(capsys):
    code, out, _ = call(capsys, "lemma-check", "--r", "1", "--case", "A")
    assert code == 0
    checks = {c["identity"]: c for c in json.loads(out)["checks"]}
    assert checks["rel_trace_xd"]["count"] == 27
    assert checks["rel_trace_zx"]["count"] == 729
    assert all(c["ok"] for c in checks.values())


def test_lemma_check_case_b_has_no_relative_form(capsys):
    code, out, _ = call(capsys, "lemma-check", "--r", "2", "--case", "B")
    assert code == 0
    names = [c["identity"] for c in json.loads(out)["checks"]]
    assert names == ["abs_trace_xd", "abs_trace_zx"]


def test_audit_r1_both_variants(capsys):
    code, out, _ = call(capsys, "audit", "--r", "1", "--case", "A", "--variant", "both")
    assert code == 1
    audits = {a["variant"]: a for a in json.loads(out)["audit"]}
    assert audits["paper"]["verdict"] == "mismatch"
    assert audits["paper"]["mismatches"]
    assert audits["moment_consistent"]["verdict"] == "match"


def test_audit_moment_consistent_only_exits_zero(capsys):
    code, _, _ = call(capsys, "audit", "--r", "2", "--case", "both", "--variant", "moment_consistent")
    assert code == 0


def test_spectrum_r3_reduced(capsys):
    code, out, _ = call(capsys, "spectrum", "--r", "3", "--case", "A", "--method", "reduced", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert sum(e["count"] for e in d["spectrum"]) == 19683
    assert len(d["spectrum"]) <= 4


def test_json_is_deterministic_across_workers():
    base = [sys.executable, "-m", "ternxc", "spectrum", "--r", "2", "--case", "both", "--method", "all"]
    a = subprocess.run(base + ["--workers", "1"], capture_output=True, check=True).stdout
    b = subprocess.run(base + ["--workers", "2"], capture_output=True, check=True).stdout
    c = subprocess.run(base + ["--workers", "1"], capture_output=True, check=True).stdout
    assert a == b == c


def test_method_all_disagreement_exits_1(capsys, monkeypatch):
    real = ternxc.spectrum.reduced_values

    def broken(ctx):
        v = real(ctx).copy()
        v[5] += 3
        return v

    monkeypatch.setattr(ternxc.spectrum, "reduced_values", broken)
    code, out, _ = call(capsys, "spectrum", "--r", "1", "--method", "all")
    assert code == 1
    assert json.loads(out)["methods_agree"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--r", "0"],
        ["spectrum", "--r", "4", "--method", "brute"],
        ["spectrum", "--r", "5"],
        ["spectrum", "--r", "1", "--bogus"],
        ["field", "--m", "2", "--modulus", "2,0,1"],
        ["field", "--m", "13"],
        ["weil", "--r", "1", "--z", "99"],
        ["seq", "--r", "4"],
    ],
)
def test_invalid_parameters_exit_2(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_field_command(capsys):
    code, out, _ = call(capsys, "field", "--m", "3", "--modulus", "2,2,0,1")
    d = json.loads(out)
    assert code == 0 and d["modulus"] == "2,2,0,1" and d["size"] == 27


def test_field_reducible_reports_factor(capsys):
    code, _, err = call(capsys, "field", "--m", "3", "--modulus", "0,2,0,1")
    assert code == 2 and "divisible by" in err


def test_tower_command(capsys):
    code, out, _ = call(capsys, "tower", "--r", "2", "--case", "both")
    assert code == 0
    towers = json.loads(out)
    assert [t["d"] for t in towers] == [11, 83]
    assert all(all(t["checks"].values()) for t in towers)


def test_weil_command(capsys):
    code, out, _ = call(capsys, "weil", "--r", "2", "--case", "A", "--z", "1,2,0", "--fast")
    d = json.loads(out)
    assert code == 0 and d["agree"] and len(d["S"]) == 3


def test_seq_command_csv(capsys):
    code, out, _ = call(capsys, "seq", "--r", "1", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "case,tau,C,S" and len(lines) == 27


def test_seq_json_sequences(capsys):
    code, out, _ = call(capsys, "seq", "--r", "1", "--tau", "0")
    d = json.loads(out)
    assert len(d["a"]) == len(d["b"]) == 26
    assert d["correlation"][0]["tau"] == 0


def test_spectrum_csv_and_text(capsys):
    code, out, _ = call(capsys, "spectrum", "--r", "1", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "S,C,count"
    code, out, _ = call(capsys, "spectrum", "--r", "1", "--format", "text")
    assert code == 0 and "m1: 27" in out


def test_timing_flag(capsys):
    _, out, _ = call(capsys, "spectrum", "--r", "1", "--timing")
    assert "elapsed_ms" in json.loads(out)
    _, out, _ = call(capsys, "spectrum", "--r", "1")
    assert "elapsed_ms" not in json.loads(out)


def test_workers_env(monkeypatch, capsys):
    monkeypatch.setenv("TERNXC_WORKERS", "2")
    code, _, _ = call(capsys, "spectrum", "--r", "1", "--method", "brute")
    assert code == 0
