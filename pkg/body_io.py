#!/usr/bin/env python3
"""
JSON body files and CSV suite reports.

Body schema: {"type": "vpolytope" | "hpolytope" | "ballhull" | "ellipsoid",
"dim": n, <payload>, "certificate": {...}}. Floats are written with repr,
so every double reads back bit-for-bit.
"""

import json
from pathlib import Path

import numpy as np
import pandas as pd

from bodies import BallHull, Certificate, Ellipsoid, HPolytope, KEllipsoid, VPolytope
from errors import BodyFormatError, GeometryError

CSV_COLUMNS = ["suite", "case_id", "n", "k", "s", "t", "quantity", "measured",
               "bound", "slack", "pass", "method", "seed"]


# === Step 1: bodies -> plain dicts ===
def _array(x):
    return np.asarray(x, float).tolist()


def _kellipsoid_dict(E):
    return {"center": _array(E.center), "basis": _array(E.basis), "shape": _array(E.shape)}


def _certificate_dict(cert):
    out = {}
    for name in ("contacts", "weights", "minkowski_center", "minkowski_directions"):
        value = getattr(cert, name)
        if value is not None:
            out[name] = _array(value)
    if cert.minkowski_value is not None:
        out["minkowski_value"] = float(cert.minkowski_value)
    if cert.kball is not None:
        out["kball"] = _kellipsoid_dict(cert.kball)
    if cert.enclosing is not None:
        out["enclosing"] = {"A": _array(cert.enclosing.A), "b": _array(cert.enclosing.b)}
    if cert.params:
        out["params"] = dict(cert.params)
    return out


def body_to_dict(body):
    if isinstance(body, VPolytope):
        data = {"type": "vpolytope", "dim": body.dim, "vertices": _array(body.vertices)}
    elif isinstance(body, HPolytope):
        data = {"type": "hpolytope", "dim": body.dim, "A": _array(body.A), "b": _array(body.b)}
    elif isinstance(body, BallHull):
        data = {"type": "ballhull", "dim": body.dim, "center": _array(body.center),
                "radius": float(body.radius), "apexes": _array(body.apexes)}
    elif isinstance(body, Ellipsoid):
        data = {"type": "ellipsoid", "dim": body.dim, "center": _array(body.center),
                "shape": _array(body.shape)}
    else:
        raise TypeError(f"cannot serialize {type(body).__name__}")
    cert = getattr(body, "certificate", None)
    if cert is not None:
        data["certificate"] = _certificate_dict(cert)
    return data


# === Step 2: plain dicts -> bodies ===
def _field(data, name, where=""):
    key = f"{where}{name}"
    if not isinstance(data, dict) or name not in data:
        raise BodyFormatError(key, "missing")
    return data[name]


def _matrix(data, name, cols=None, where=""):
    raw = _field(data, name, where)
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as e:
        raise BodyFormatError(f"{where}{name}", f"not numeric ({e})") from e
    if arr.size == 0 and cols is not None:
        return np.zeros((0, cols))
    if arr.ndim != 2 or (cols is not None and arr.shape[1] != cols):
        raise BodyFormatError(f"{where}{name}", f"expected a list of rows of length {cols}")
    if not np.all(np.isfinite(arr)):
        raise BodyFormatError(f"{where}{name}", "contains non-finite values")
    return arr


def _vector(data, name, length=None, where=""):
    raw = _field(data, name, where)
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as e:
        raise BodyFormatError(f"{where}{name}", f"not numeric ({e})") from e
    if arr.ndim != 1 or (length is not None and arr.size != length):
        raise BodyFormatError(f"{where}{name}", f"expected {length or 'a list of'} numbers")
    if not np.all(np.isfinite(arr)):
        raise BodyFormatError(f"{where}{name}", "contains non-finite values")
    return arr


def _certificate_from(data, n):
    where = "certificate."
    if not isinstance(data, dict):
        raise BodyFormatError("certificate", "expected an object")
    kwargs = {}
    if "contacts" in data:
        kwargs["contacts"] = _matrix(data, "contacts", n, where)
    if "weights" in data:
        kwargs["weights"] = _vector(data, "weights", where=where)
    if "minkowski_center" in data:
        kwargs["minkowski_center"] = _vector(data, "minkowski_center", n, where)
    if "minkowski_directions" in data:
        kwargs["minkowski_directions"] = _matrix(data, "minkowski_directions", n, where)
    if "minkowski_value" in data:
        kwargs["minkowski_value"] = float(data["minkowski_value"])
    if "kball" in data:
        kb = data["kball"]
        kwargs["kball"] = KEllipsoid(_vector(kb, "center", n, where + "kball."),
                                     _matrix(kb, "basis", None, where + "kball."),
                                     _matrix(kb, "shape", None, where + "kball."))
    if "enclosing" in data:
        enc = data["enclosing"]
        kwargs["enclosing"] = HPolytope.trusted(_matrix(enc, "A", n, where + "enclosing."),
                                                _vector(enc, "b", where=where + "enclosing."))
    if "params" in data:
        kwargs["params"] = dict(data["params"])
    return Certificate(**kwargs)


def body_from_dict(data):
    kind = _field(data, "type")
    n = _field(data, "dim")
    if not isinstance(n, int) or n < 1:
        raise BodyFormatError("dim", "expected a positive integer")
    cert = _certificate_from(data["certificate"], n) if "certificate" in data else None
    try:
        if kind == "vpolytope":
            return VPolytope(_matrix(data, "vertices", n), cert)
        if kind == "hpolytope":
            A = _matrix(data, "A", n)
            return HPolytope(A, _vector(data, "b", A.shape[0]), cert)
        if kind == "ballhull":
            return BallHull(_vector(data, "center", n), float(_field(data, "radius")),
                            _matrix(data, "apexes", n) if "apexes" in data else np.zeros((0, n)), cert)
        if kind == "ellipsoid":
            return Ellipsoid(_vector(data, "center", n), _matrix(data, "shape", n))
    except BodyFormatError:
        raise
    except GeometryError as e:
        raise BodyFormatError(kind, str(e)) from e
    raise BodyFormatError("type", f"unknown body type {kind!r}")


# === Step 3: files ===
def save_body(body, path):
    Path(path).write_text(json.dumps(body_to_dict(body), indent=2))


def load_body(path):
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise BodyFormatError("json", f"line {e.lineno}: {e.msg}") from e
    return body_from_dict(data)


def rows_frame(rows):
    """Suite rows as a DataFrame in the fixed column order, sorted by case_id"""
    df = pd.DataFrame(rows, columns=CSV_COLUMNS)
    return df.sort_values("case_id", kind="mergesort").reset_index(drop=True)


def write_report(rows, path):
    """CSV report; floats as repr so reruns compare byte-for-byte"""
    df = rows_frame(rows)
    df.to_csv(path, index=False, float_format=None, lineterminator="\n")
    return df
