"""Deterministic CSV / JSON emission.

CSV is RFC-4180: CRLF line endings, one header line, no trailing
whitespace.  Floats are written with ``repr`` (shortest round-trip), NaN
as the empty field, booleans as ``true``/``false``; this makes re-runs
byte-identical whenever the numbers are.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .densecoding import RATE_CSV_COLUMNS
from .sweep import SweepResult, resolve_path


def fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    x = float(value)
    if math.isnan(x):
        return ""
    return repr(x)


def _write_rows(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)  # csv default lineterminator is CRLF
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt_cell(cell) for cell in row])


_OBSERVABLE_COLUMN = {
    "LogNegativity": "log_negativity",
    "DenseCodingRate": "dense_coding_rate",
    "DuanSum": "duan_sum",
    "StabilityMargin": "stability_margin",
}


def write_sweep_csv(path, result: SweepResult):
    """One row per grid point, row-major; masked values are empty fields."""
    spec = result.spec
    col1 = resolve_path(spec.axis1.path)
    value_col = _OBSERVABLE_COLUMN[spec.observable]
    header = [col1]
    if spec.axis2 is not None:
        header.append(resolve_path(spec.axis2.path))
    header += [value_col, "stable", "quad_error"]
    if result.feasible is not None:
        header.append("feasible")

    rows = []
    v1 = result.axis1_values
    if spec.axis2 is None:
        for i in range(v1.size):
            row = [v1[i], result.values[i], bool(result.stable[i]), result.quad_error[i]]
            if result.feasible is not None:
                row.append(bool(result.feasible[i]))
            rows.append(row)
    else:
        v2 = result.axis2_values
        for i in range(v1.size):
            for j in range(v2.size):
                row = [
                    v1[i],
                    v2[j],
                    result.values[i, j],
                    bool(result.stable[i, j]),
                    result.quad_error[i, j],
                ]
                if result.feasible is not None:
                    row.append(bool(result.feasible[i, j]))
                rows.append(row)
    _write_rows(path, header, rows)


def write_rate_csv(path, points):
    """RatePoint rows in the fixed serialization column order."""
    rows = [
        [getattr(pt, name) for name in RATE_CSV_COLUMNS]
        for pt in points
    ]
    _write_rows(path, list(RATE_CSV_COLUMNS), rows)


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
