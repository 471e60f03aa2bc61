"""Deterministic JSON output shared by the CLI and the scenario runner.

Floats are written with 17 significant digits, complex numbers as
``{"re": .., "im": ..}``, exact rationals and p-adic numbers in their
canonical text form.  Keys keep insertion order.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

from cremona.padicnum import PadicNum

SCHEMA = 1


def to_jsonable(obj):
    """Recursively convert library objects into plain JSON-ready values."""
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (Fraction, PadicNum)):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return str(obj)


def _float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = "%.17g" % x
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _emit(v, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return json.dumps(v)
    if isinstance(v, float):
        return _float(v)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_emit(x, indent, level + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, list):
        if not v:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in v):
            return "[" + ", ".join(_emit(x, indent, level + 1) for x in v) + "]"
        items = [pad + _emit(x, indent, level + 1) for x in v]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _emit(to_jsonable(obj), indent, 0) + "\n"


def envelope(kind: str, payload: dict) -> dict:
    """Wrap a payload with the schema version and its kind."""
    return {"schema": SCHEMA, "kind": kind, **payload}


__all__ = ["SCHEMA", "to_jsonable", "dumps", "envelope"]
