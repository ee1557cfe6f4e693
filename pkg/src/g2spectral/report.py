"""Verification reports: entries, documents and deterministic JSON output."""
import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

PASS, FAIL, FLAGGED = "pass", "fail", "flagged"


@lru_cache(maxsize=None)
def anchors():
    text = resources.files("g2spectral").joinpath("anchors.json").read_text(encoding="utf-8")
    return json.loads(text)


def format_residual(x):
    """Six significant digits in scientific notation."""
    x = float(x)
    if np.isnan(x):
        return "nan"
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.5e}"


@dataclass(frozen=True)
class CheckEntry:
    name: str
    paper_anchor: str
    status: str
    residual: float
    tolerance: float
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.paper_anchor not in anchors():
            raise KeyError(f"unknown anchor {self.paper_anchor!r}")
        if self.status not in (PASS, FAIL, FLAGGED):
            raise ValueError(f"bad status {self.status!r}")

    def as_dict(self):
        out = {"name": self.name, "paper_anchor": self.paper_anchor, "status": self.status,
               "residual": format_residual(self.residual), "tolerance": format_residual(self.tolerance)}
        if self.detail:
            out["detail"] = to_jsonable(self.detail)
        return out


def check(name, anchor, residual, tolerance, **detail):
    """Entry passing iff residual <= tolerance (NaN fails)."""
    ok = bool(np.isfinite(residual) and residual <= tolerance)
    return CheckEntry(name, anchor, PASS if ok else FAIL, float(residual), float(tolerance), detail)


def count_entry(name, anchor, counted, expected, flagged=False, **detail):
    """Integer comparison; a known discrepancy is reported as flagged instead of failed."""
    agree = counted == expected
    status = PASS if agree else (FLAGGED if flagged else FAIL)
    detail = dict(detail, counted=int(counted), expected=int(expected))
    return CheckEntry(name, anchor, status, float(abs(counted - expected)), 0.0, detail)


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj) if np.isfinite(obj) else format_residual(obj)
    return obj


def digest_bytes(data):
    return "sha256:" + hashlib.sha256(data).hexdigest()


def field_digest(A):
    arr = np.ascontiguousarray(A.coeffs, dtype=np.complex128)
    return digest_bytes(f"k={A.k};".encode() + arr.tobytes())


@dataclass
class ReportDocument:
    command: str
    input_digest: str
    entries: list = field(default_factory=list)
    genus: object = None
    stats: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def overall_status(self):
        return FAIL if any(e.status == FAIL for e in self.entries) else PASS

    def count(self, key, n=1):
        self.stats[key] = self.stats.get(key, 0) + n

    def as_dict(self):
        out = {
            "command": self.command,
            "input_digest": self.input_digest,
            "checks": [e.as_dict() for e in self.entries],
            "overall_status": self.overall_status,
            "runtime_stats": to_jsonable(self.stats),
        }
        if self.genus is not None:
            out["genus"] = to_jsonable(self.genus)
        for key, value in self.extra.items():
            out[key] = to_jsonable(value)
        return out


def render_report(doc):
    if not doc.entries:
        raise ValueError("a report needs at least one check entry")
    return json.dumps(doc.as_dict(), sort_keys=True, indent=2) + "\n"


def emit_report(doc, path):
    text = render_report(doc)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
