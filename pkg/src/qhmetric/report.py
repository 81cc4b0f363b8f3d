"""Bit-stable CSV/JSON report emission."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import sys

import numpy as np

SIGNIFICANT = 12


def format_number(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.{SIGNIFICANT}g}"


def _cell(v):
    if isinstance(v, (bool, np.bool_, int, float, np.integer, np.floating)):
        return format_number(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_cell(x) for x in v)
    return str(v)


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return format_number(v)
        return float(format_number(v))
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    return v


def _sort_key(v):
    # numbers before strings, each in natural order
    if isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool):
        return (0, float(v), "")
    return (1, 0.0, str(v))


def sort_records(records, key=None):
    records = list(records)
    if not records:
        return records
    key = key or next(iter(records[0]))
    return sorted(records, key=lambda r: _sort_key(r.get(key)))


def render(records, fmt="csv", columns=None, summary=None, key=None) -> str:
    """Render records sorted by ``key`` (default: the first column)."""
    records = sort_records(records, key)
    columns = list(columns) if columns is not None else (list(records[0]) if records else [])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if columns:
            w.writerow(columns)
        for r in records:
            w.writerow([_cell(r.get(c, "")) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        doc = {"columns": columns, "records": [_jsonable({c: r.get(c) for c in columns}) for r in records]}
        if summary is not None:
            doc["summary"] = _jsonable(summary)
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(records, fmt="csv", path=None, columns=None, summary=None, key=None):
    """Write the rendered report to ``path`` (stdout when ``None``)."""
    text = render(records, fmt, columns, summary, key)
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def task_seed(seed, task):
    """Per-task seed derived by stable hashing of ``(seed, task)``."""
    h = hashlib.sha256(f"{int(seed)}:{task}".encode()).digest()
    return int.from_bytes(h[:8], "big") >> 1
