"""Tabular experiment reports with delimited and JSON serialization.

Every subcommand emits rows under a frozen column list; wall_ms is always
the last column so consumers can strip timing before comparing runs.
Floats are written with repr (shortest round-trip), which makes byte-level
determinism checks meaningful.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np


def _native(value):
    """Numpy scalars -> plain Python so repr and json stay portable."""
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass
class ExperimentReport:
    subcommand: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)

    def add_row(self, **values) -> None:
        unknown = set(values) - set(self.columns)
        if unknown:
            raise KeyError(f"row has columns outside the frozen list: {sorted(unknown)}")
        self.rows.append({key: _native(val) for key, val in values.items()})


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_cell(row.get(col)) for col in report.columns])
    return buf.getvalue()


def to_json(report: ExperimentReport) -> str:
    payload = {
        "subcommand": report.subcommand,
        "columns": report.columns,
        "rows": [{col: row.get(col) for col in report.columns} for row in report.rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def write_report(report: ExperimentReport, path: str | None, fmt: str) -> str:
    """Serialize and optionally write to path; returns the text either way."""
    text = to_csv(report) if fmt == "csv" else to_json(report)
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def read_csv_report(path: str) -> ExperimentReport:
    """Rebuild a report (as strings) from a CSV file produced by write_report."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            columns = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty report") from None
        rows = [dict(zip(columns, row)) for row in reader]
    sub = rows[0].get("subcommand", "") if rows else ""
    return ExperimentReport(subcommand=sub, columns=columns, rows=rows)
