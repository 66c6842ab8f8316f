"""Matrix file parsing and report serialization.

A matrix file is a JSON document ``{"rows": r, "cols": c, "entries": [[re, im], ...]}``
with entries in row-major order. Reports are JSON with every float written
to 17 significant digits, which round-trips IEEE doubles exactly.
"""

from __future__ import annotations

import json
import math
from enum import Enum

import numpy as np

from . import __version__
from .errors import NumradError


class MatrixFileError(NumradError, ValueError):
    """Malformed matrix document."""


def _finite_number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise MatrixFileError(f"{where}: expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise MatrixFileError(f"{where}: non-finite value")
    return x


def matrix_from_doc(doc) -> np.ndarray:
    if not isinstance(doc, dict):
        raise MatrixFileError("matrix document must be a JSON object")
    for key in ("rows", "cols", "entries"):
        if key not in doc:
            raise MatrixFileError(f"matrix document is missing {key!r}")
    rows, cols, entries = doc["rows"], doc["cols"], doc["entries"]
    for name, v in (("rows", rows), ("cols", cols)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise MatrixFileError(f"{name} must be a positive integer, got {v!r}")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise MatrixFileError(f"entries must be a list of rows*cols = {rows * cols} pairs, got {got}")
    out = np.empty(rows * cols, dtype=np.complex128)
    for k, e in enumerate(entries):
        if not isinstance(e, list) or len(e) != 2:
            raise MatrixFileError(f"entry {k}: expected [re, im], got {e!r}")
        out[k] = complex(_finite_number(e[0], f"entry {k}"), _finite_number(e[1], f"entry {k}"))
    return out.reshape(rows, cols)


def matrix_to_doc(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def load_matrix(path) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise MatrixFileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"{path}: invalid JSON ({exc})") from exc
    return matrix_from_doc(doc)


def save_matrix(path, m) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(matrix_to_doc(m)))
        fh.write("\n")


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = f"{x:.17g}"
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _encode(obj, out: list) -> None:
    if obj is None or isinstance(obj, (bool, str)):
        out.append(json.dumps(obj))
    elif isinstance(obj, Enum):
        _encode(obj.value, out)
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _encode(v, out)
        out.append("]")
    elif isinstance(obj, complex):
        _encode([obj.real, obj.imag], out)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with floats at 17 significant digits; non-finite floats become null."""
    out: list = []
    _encode(obj, out)
    return "".join(out)


# ---- report documents ------------------------------------------------------

def vector_to_list(x) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(x, dtype=np.complex128)]


def verdict_to_dict(v) -> dict:
    return {
        "check": v.label,
        "check_id": v.check_id.value,
        "n": v.n,
        "status": v.status.value,
        "slack": v.slack,
        "hypothesis_slack": v.hypothesis_slack,
        "binding": v.binding,
        "details": dict(sorted(v.details.items())),
    }


def bounds_report_to_dict(rep) -> dict:
    return {
        "norm": rep.norm,
        "radius": rep.radius,
        "alpha_t": rep.alpha_t,
        "alpha_tstar": rep.alpha_tstar,
        "dee": rep.dee,
        "gee": rep.gee,
        "checks": [verdict_to_dict(v) for v in rep.checks],
    }


def document(kind: str, body: dict, *, tol: float | None = None, seed: int | None = None) -> dict:
    doc = {"tool": "numrad", "version": __version__, "document": kind}
    if tol is not None:
        doc["tolerance"] = tol
    if seed is not None:
        doc["seed"] = seed
    doc.update(body)
    return doc
