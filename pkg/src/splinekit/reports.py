"""Deterministic CSV/JSON emission with atomic writes.

Identical inputs must produce byte-identical delimited output: floats are
formatted with 15 significant digits, JSON keys keep insertion order, and
every file is written via a temp file + rename.
"""

from __future__ import annotations

import json

import numpy as np

from .geometry import write_text_atomic


def fmt_float(x) -> str:
    return format(float(x), ".15g")


def jsonable(obj):
    """Recursively convert numpy scalars/arrays (and tuples) to JSON-ready types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def write_json(path, data: dict) -> None:
    write_text_atomic(path, json.dumps(jsonable(data), indent=2) + "\n")


def write_csv(path, header: list[str], columns: list) -> None:
    """Write columns (same length; None or NaN cells become empty)."""
    cols = []
    for col in columns:
        if col is None:
            cols.append(None)
        else:
            cols.append(np.asarray(col))
    length = max(len(c) for c in cols if c is not None)
    lines = [",".join(header)]
    for i in range(length):
        cells = []
        for c in cols:
            if c is None:
                cells.append("")
            else:
                v = float(c[i])
                cells.append("" if np.isnan(v) else fmt_float(v))
        lines.append(",".join(cells))
    write_text_atomic(path, "\n".join(lines) + "\n")


def write_profile_csv(path, profile) -> None:
    """Curvature profile CSV: t,s,kappa,tau (tau empty for planar curves)."""
    write_csv(path, ["t", "s", "kappa", "tau"], [profile.t, profile.s, profile.kappa, profile.tau])


def write_function_csv(path, fn) -> None:
    """Sampled-function CSV: s,f."""
    write_csv(path, ["s", "f"], [fn.s, fn.values])
