import csv
import json

import pytest

from g2spectral.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, main, parse_seeds, parse_zetas


@pytest.fixture
def field_file(tmp_path, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    path = tmp_path / "field.json"
    assert main(["gen", "--k", "0", "--seed", "3", "--out", str(path)]) == EXIT_OK
    return path


def _checks(path):
    return {c["name"]: c for c in json.loads(path.read_text())["checks"]}


def test_parse_seeds():
    assert parse_seeds("1..3,7") == [1, 2, 3, 7]
    with pytest.raises(Exception):
        parse_seeds("5..2")
    assert parse_zetas("1+1j, 0.5-0.2j") == [1 + 1j, 0.5 - 0.2j]


def test_inspect(field_file, tmp_path):
    out = tmp_path / "r.json"
    assert main(["inspect", "--in", str(field_file), "--out", str(out)]) == EXIT_OK
    assert all(c["status"] == "pass" for c in _checks(out).values())


def test_spectral_reports_moduli_dimension(field_file, tmp_path):
    out = tmp_path / "r.json"
    assert main(["spectral", "--in", str(field_file), "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["moduli_dim"] == 4
    assert doc["genus"]["g_sigma"] == 5
    checks = _checks(out)
    assert checks["g_c2_hat"]["status"] == "flagged"
    assert all("paper_anchor" in c for c in checks.values())


def test_flow_writes_json_and_csv(field_file, tmp_path):
    out = tmp_path / "flow.json"
    assert main(["flow", "--in", str(field_file), "--t", "1.0", "--out", str(out)]) == EXIT_OK
    c = _checks(out)["isospectral_drift"]
    assert float(c["residual"]) < 1e-6
    rows = list(csv.reader((tmp_path / "flow.csv").open()))
    assert rows[0] == ["t", "drift_b1", "drift_b2", "trace_drift"] and len(rows) == 12


def test_fiber_with_explicit_zetas(field_file, tmp_path):
    out = tmp_path / "fib.json"
    zetas = ",".join(f"{0.9 + 0.01 * i}+{0.3 + 0.02 * i}j" for i in range(12))
    assert main(["fiber", "--in", str(field_file), "--zeta", zetas, "--out", str(out)]) == EXIT_OK
    assert _checks(out)["v0_kernel"]["status"] == "pass"


def test_verify_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--k", "0", "--seeds", "1..3", "--tol", "1e-8", "--out", str(a)]) == EXIT_OK
    assert main(["verify", "--k", "0", "--seeds", "1..3", "--tol", "1e-8", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["overall_status"] == "pass"
    assert all(s["genus"]["g_sigma"] == 5 for s in doc["seeds"])


def test_failing_check_exits_nonzero(tmp_path, capsys):
    out = tmp_path / "r.json"
    # a tolerance of zero cannot be met by floating point residuals
    assert main(["verify", "--k", "0", "--seed", "1", "--tol", "0", "--out", str(out)]) == EXIT_FAIL
    assert str(out) in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main(["nonsense"]) == EXIT_USAGE
    assert main(["verify", "--k", "-1"]) == EXIT_USAGE
    assert main(["verify", "--seeds", "4..1"]) == EXIT_USAGE
    assert main(["inspect"]) == EXIT_USAGE


def test_io_errors(tmp_path):
    assert main(["inspect", "--in", str(tmp_path / "missing.json")]) == EXIT_IO
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["spectral", "--in", str(bad)]) == EXIT_IO


def test_gen_to_stdout(capsys):
    assert main(["gen", "--k", "1", "--seed", "2"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["k"] == 1
