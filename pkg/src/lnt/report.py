"""Report tables and their CSV / Markdown / JSON encodings.

All three formats render the same values: floats go through one
formatting pass (6 significant digits unless a column overrides it),
missing values become an empty CSV cell, "NA" in Markdown and null in
JSON. A metadata header (tool version, seed, config) is embedded so
reruns with identical configuration produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

DEFAULT_FLOAT_FMT = "{:.6g}"


@dataclass
class ReportTable:
    columns: list[str]
    rows: list[dict[str, Any]]
    meta: dict[str, str] = field(default_factory=dict)
    float_formats: dict[str, str] = field(default_factory=dict)

    def cell(self, row: dict[str, Any], col: str) -> str:
        value = row.get(col)
        if value is None:
            return ""
        if isinstance(value, float):
            fmt = self.float_formats.get(col, DEFAULT_FLOAT_FMT)
            return fmt.format(value)
        return str(value)


def emit(table: ReportTable, fmt: str) -> bytes:
    if fmt == "csv":
        text = _emit_csv(table)
    elif fmt == "md":
        text = _emit_md(table)
    elif fmt == "json":
        text = _emit_json(table)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return text.encode("utf-8")


def _emit_csv(table: ReportTable) -> str:
    lines = [f"# {key}={value}" for key, value in table.meta.items()]
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(table.cell(row, c) for c in table.columns))
    return "\n".join(lines) + "\n"


def _emit_md(table: ReportTable) -> str:
    meta = " ".join(f"{k}={v}" for k, v in table.meta.items())
    lines = [f"<!-- {meta} -->"] if meta else []
    lines.append("| " + " | ".join(table.columns) + " |")
    lines.append("|" + "|".join(" --- " for _ in table.columns) + "|")
    for row in table.rows:
        cells = [table.cell(row, c) or "NA" for c in table.columns]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _emit_json(table: ReportTable) -> str:
    rows = []
    for row in table.rows:
        out: dict[str, Any] = {}
        for col in table.columns:
            value = row.get(col)
            if isinstance(value, float):
                # round through the display format so all encodings agree
                out[col] = float(table.cell(row, col))
            else:
                out[col] = value
        rows.append(out)
    doc = {"meta": dict(table.meta), "rows": rows}
    return json.dumps(doc, indent=2) + "\n"
