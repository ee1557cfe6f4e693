import json

import numpy as np
import pytest

from g2spectral.report import (FAIL, FLAGGED, PASS, CheckEntry, ReportDocument, anchors, check, count_entry,
                               emit_report, format_residual, render_report, to_jsonable)


def test_format_residual():
    assert format_residual(1.234567891e-9) == "1.23457e-09"
    assert format_residual(np.nan) == "nan" and format_residual(np.inf) == "inf"


def test_check_statuses():
    assert check("x", "lax-equation", 1e-9, 1e-6).status == PASS
    assert check("x", "lax-equation", 1e-3, 1e-6).status == FAIL
    assert check("x", "lax-equation", np.nan, 1e-6).status == FAIL
    assert count_entry("g", "main-curve-genus", 5, 5).status == PASS
    assert count_entry("g", "main-curve-genus", 4, 5).status == FAIL
    assert count_entry("g", "main-curve-genus", 4, 5, flagged=True).status == FLAGGED


def test_unknown_anchor_and_status():
    with pytest.raises(KeyError):
        CheckEntry("x", "no-such-anchor", PASS, 0.0, 0.0)
    with pytest.raises(ValueError):
        CheckEntry("x", "lax-equation", "maybe", 0.0, 0.0)


def test_anchor_table():
    table = anchors()
    assert "lax-equation" in table and len(table) >= 20


def test_overall_status():
    doc = ReportDocument("t", "sha256:0", [check("a", "lax-equation", 0.0, 1.0)])
    assert doc.overall_status == PASS
    doc.entries.append(count_entry("b", "main-curve-genus", 1, 2, flagged=True))
    assert doc.overall_status == PASS
    doc.entries.append(check("c", "lax-equation", 2.0, 1.0))
    assert doc.overall_status == FAIL
    assert json.loads(render_report(doc))["overall_status"] == "fail"


def test_empty_report_rejected():
    with pytest.raises(ValueError):
        render_report(ReportDocument("t", "sha256:0"))


def test_deterministic_output(tmp_path):
    doc = ReportDocument("t", "sha256:0", [check("a", "lax-equation", 1e-7, 1e-6, z=1 + 2j)])
    doc.count("fibers", 3)
    emit_report(doc, tmp_path / "a.json")
    emit_report(doc, tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    out = json.loads((tmp_path / "a.json").read_text())
    assert out["checks"][0]["detail"]["z"] == [1.0, 2.0]
    assert out["runtime_stats"] == {"fibers": 3}


def test_to_jsonable():
    assert to_jsonable({"a": np.float64(np.inf), "b": np.arange(2), "c": np.bool_(True)}) == \
        {"a": "inf", "b": [0, 1], "c": True}
