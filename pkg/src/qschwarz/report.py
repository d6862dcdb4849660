"""CSV / JSON emission with round-trip float formatting.

Floats are written with ``repr``, the shortest string that parses back to the
same double, so output is byte-stable and independent of locale.
CSV: header row, comma separator, one row per record, then ``# key: value``
summary lines. JSON: one object ``{"rows": [...], "summary": {...}}`` with row
keys equal to the CSV header names.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Mapping, Sequence

__all__ = ["format_value", "to_csv", "to_json", "render"]


def _clean(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float) or hasattr(value, "__float__"):
        x = float(value)
        return x if math.isfinite(x) else None
    return value


def format_value(value: Any) -> str:
    value = _clean(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(columns: Sequence[str], rows: Sequence[Mapping[str, Any]], summary: Mapping[str, Any]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(col)) for col in columns])
    for key, value in summary.items():
        buf.write(f"# {key}: {format_value(value)}\n")
    return buf.getvalue()


def to_json(columns: Sequence[str], rows: Sequence[Mapping[str, Any]], summary: Mapping[str, Any]) -> str:
    doc = {
        "rows": [{col: _clean(row.get(col)) for col in columns} for row in rows],
        "summary": {k: _clean(v) for k, v in summary.items()},
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def render(fmt: str, columns: Sequence[str], rows: Sequence[Mapping[str, Any]], summary: Mapping[str, Any]) -> str:
    if fmt == "csv":
        return to_csv(columns, rows, summary)
    if fmt == "json":
        return to_json(columns, rows, summary)
    raise ValueError(f"unknown output format {fmt!r}")
