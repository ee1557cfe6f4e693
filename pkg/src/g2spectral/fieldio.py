"""JSON field files.

Layout::

    {"schema_version": 1, "k": 0,
     "coefficients": {"-1": [[[re, im], ...7], ...7], "0": ..., "1": ...},
     "metadata": {"seed": 7, "creator": "g2spectral 0.1.0", "timestamp": "..."}}
"""
import datetime as _dt
import json
import os

import numpy as np

from .errors import (GradingViolationError, MalformedFileError, RangeError, RealityViolationError,
                     ShapeError)
from .loop import KillingField
from .octonion import graded_residual

SCHEMA_VERSION = 1


def _timestamp():
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        when = _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
    else:
        when = _dt.datetime.now(tz=_dt.timezone.utc)
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def matrix_to_pairs(M):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


def pairs_to_matrix(pairs):
    arr = np.asarray(pairs, dtype=float)
    if arr.shape != (7, 7, 2):
        raise ShapeError(f"expected a 7x7 matrix of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def field_to_dict(A, seed=None, creator=None, timestamp=None):
    from . import __version__
    d = A.d
    coeffs = {str(j): matrix_to_pairs(A.coeff(j)) for j in range(-d, d + 1)}
    return {
        "schema_version": SCHEMA_VERSION,
        "k": int(A.k),
        "coefficients": coeffs,
        "metadata": {
            "seed": seed,
            "creator": creator or f"g2spectral {__version__}",
            "timestamp": timestamp or _timestamp(),
        },
    }


def dumps_field(A, **metadata):
    return json.dumps(field_to_dict(A, **metadata), sort_keys=True, indent=1)


def write_field_file(A, path, **metadata):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_field(A, **metadata))
        fh.write("\n")


def field_from_dict(doc, tol=1e-9):
    """Validate a decoded field document; raise on the first violated rule."""
    if not isinstance(doc, dict):
        raise MalformedFileError("top level must be an object")
    for key in ("schema_version", "k", "coefficients"):
        if key not in doc:
            raise MalformedFileError(f"missing key {key!r}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise MalformedFileError(f"unsupported schema_version {doc['schema_version']!r}")
    k = doc["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise MalformedFileError(f"k must be a nonnegative integer, got {k!r}")
    raw = doc["coefficients"]
    if not isinstance(raw, dict):
        raise MalformedFileError("coefficients must be an object keyed by j")
    d = 6 * k + 1
    mats = {}
    for key, value in raw.items():
        try:
            j = int(key)
        except ValueError:
            raise MalformedFileError(f"coefficient key {key!r} is not an integer") from None
        if abs(j) > d:
            raise RangeError(f"coefficient A_{j} lies outside the window |j| <= {d} for k={k}")
        try:
            M = pairs_to_matrix(value)
        except (TypeError, ValueError):
            raise ShapeError(f"coefficient A_{j} is not a 7x7 array of [re, im] pairs") from None
        if not np.all(np.isfinite(M)):
            raise MalformedFileError(f"coefficient A_{j} has non-finite entries")
        mats[j] = M
    missing = [j for j in range(-d, d + 1) if j not in mats]
    if missing:
        raise RangeError(f"coefficients missing for j in {missing}")
    coeffs = np.array([mats[j] for j in range(-d, d + 1)])
    scale = max(1.0, float(np.abs(coeffs).max()))
    for j in range(0, d + 1):
        r = float(np.abs(mats[-j] - np.conj(mats[j])).max()) / scale
        if r > tol:
            raise RealityViolationError(j, r)
    for j in range(-d, d + 1):
        r = graded_residual(mats[j], j) / scale
        if r > tol:
            raise GradingViolationError(j, r)
    return KillingField(k, coeffs)


def parse_field_text(text, tol=1e-9):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFileError(f"invalid JSON: {exc}") from None
    return field_from_dict(doc, tol)


def parse_field_file(path, tol=1e-9):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_field_text(text, tol)


def read_metadata(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh).get("metadata", {})
