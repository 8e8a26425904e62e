"""Deterministic JSON/CSV emission.

Report files are compared byte-for-byte in golden tests, so nothing here
may depend on dict iteration quirks, locale, or platform line endings:
keys keep insertion order, floats in JSON carry 17 significant digits
(exact round-trip), CSV floats use repr (shortest exact form), and every
file ends with a single LF.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

__all__ = ["dumps", "write_json", "write_csv", "csv_cell", "json_float"]


def json_float(value: float) -> str:
    """17-significant-digit decimal form; round-trips to the same float."""
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"non-finite value {value!r} cannot appear in a report")
    return format(value, ".17g")


def _emit(obj, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(json_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            out.append(f"{inner}{json.dumps(key, ensure_ascii=False)}: ")
            _emit(value, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(f"{pad}}}")
    elif isinstance(obj, (list, tuple)):
        if not len(obj):
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(inner)
            _emit(value, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(f"{pad}]")
    else:
        # numpy scalars and the like: coerce through their Python equivalents
        if hasattr(obj, "item"):
            _emit(obj.item(), indent, out)
            return
        raise TypeError(f"cannot serialize {type(obj).__name__} to a report")


def dumps(obj) -> str:
    """Stable JSON text for ``obj`` (insertion-ordered keys, LF, trailing newline)."""
    out: list[str] = []
    _emit(obj, 0, out)
    out.append("\n")
    return "".join(out)


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8", newline="\n")


def csv_cell(value) -> str:
    """Render one CSV cell: repr for floats, ISO hour for datetimes, '' for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, dt.datetime):
        return value.strftime("%Y-%m-%dT%H:%M")
    if isinstance(value, dt.date):
        return value.isoformat()
    if isinstance(value, str):
        return value
    if hasattr(value, "item"):
        return csv_cell(value.item())
    raise TypeError(f"cannot render {type(value).__name__} as a CSV cell")


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([csv_cell(cell) for cell in row])
