"""Versioned CSV and manifest formats.

All files are UTF-8 with LF line endings and locale-independent number
formatting (17 significant digits, enough to round-trip a double exactly).
Trajectory/strobe/kappa files carry a '# opendicke <schema>' comment line
above the column header; sweep files carry a JSON header line with the sweep
spec and its hash instead (they double as checkpoint files).
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

TRAJECTORY_SCHEMA = "trajectory-v1"
STROBE_SCHEMA = "strobe-v1"
KAPPA_SCHEMA = "kappa-v1"
SWEEP_SCHEMA = "sweep-v1"

TRAJECTORY_COLUMNS = ["t", "x", "p", "jx", "jy", "jz", "kappa", "lambda"]
STROBE_COLUMNS = ["n", "x", "p", "jx", "jy", "jz"]
KAPPA_COLUMNS = ["t", "kappa"]
SWEEP_COLUMNS = [
    "epsilon", "m", "kappa0", "kappa_max", "lambda0", "a0",
    "regime", "T", "phase", "period", "variance", "dimension",
    "nn_spread", "parity_flag", "error_note",
]


class SchemaError(ValueError):
    """File does not match the expected versioned schema."""


def fmt(value) -> str:
    """Canonical cell rendering: floats at 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _schema_line(schema: str) -> str:
    return f"# opendicke {schema}"


def _write_table(path, schema: str, columns, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(_schema_line(schema) + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def _read_table(path, schema: str, columns) -> list[list[str]]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        first = handle.readline().rstrip("\n")
        if first != _schema_line(schema):
            raise SchemaError(f"{path}: expected {_schema_line(schema)!r}, found {first!r}")
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != columns:
            raise SchemaError(f"{path}: header {header!r} does not match {columns!r}")
        return [row for row in reader if row]


def write_trajectory_csv(path, trajectory) -> None:
    rows = zip(
        trajectory.t,
        trajectory.states[:, 0], trajectory.states[:, 1],
        trajectory.states[:, 2], trajectory.states[:, 3], trajectory.states[:, 4],
        trajectory.kappa, trajectory.lam,
    )
    _write_table(path, TRAJECTORY_SCHEMA, TRAJECTORY_COLUMNS, rows)


def read_trajectory_csv(path) -> dict[str, np.ndarray]:
    raw = _read_table(path, TRAJECTORY_SCHEMA, TRAJECTORY_COLUMNS)
    data = np.array([[float(v) for v in row] for row in raw]) if raw else np.empty((0, 8))
    return {name: data[:, i] for i, name in enumerate(TRAJECTORY_COLUMNS)}


def write_strobe_csv(path, sequence) -> None:
    rows = zip(
        sequence.period_index,
        sequence.states[:, 0], sequence.states[:, 1],
        sequence.states[:, 2], sequence.states[:, 3], sequence.states[:, 4],
    )
    _write_table(path, STROBE_SCHEMA, STROBE_COLUMNS, rows)


def read_strobe_csv(path) -> dict[str, np.ndarray]:
    raw = _read_table(path, STROBE_SCHEMA, STROBE_COLUMNS)
    data = np.array([[float(v) for v in row] for row in raw]) if raw else np.empty((0, 6))
    return {name: data[:, i] for i, name in enumerate(STROBE_COLUMNS)}


def write_kappa_csv(path, times, values) -> None:
    _write_table(path, KAPPA_SCHEMA, KAPPA_COLUMNS, zip(times, values))


def read_kappa_csv(path) -> dict[str, np.ndarray]:
    raw = _read_table(path, KAPPA_SCHEMA, KAPPA_COLUMNS)
    data = np.array([[float(v) for v in row] for row in raw]) if raw else np.empty((0, 2))
    return {name: data[:, i] for i, name in enumerate(KAPPA_COLUMNS)}


def sweep_row_cells(row: dict) -> list[str]:
    return [fmt(row.get(col)) for col in SWEEP_COLUMNS]


def sweep_row_line(row: dict) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(sweep_row_cells(row))
    return buf.getvalue()


def parse_sweep_row(cells: list[str]) -> dict:
    if len(cells) != len(SWEEP_COLUMNS):
        raise SchemaError(f"sweep row has {len(cells)} cells, expected {len(SWEEP_COLUMNS)}")
    row = dict(zip(SWEEP_COLUMNS, cells))
    for key in ("epsilon", "m", "kappa0", "kappa_max", "lambda0", "a0", "T",
                "variance", "dimension", "nn_spread"):
        row[key] = float(row[key]) if row[key] != "" else None
    row["period"] = int(row["period"]) if row["period"] != "" else None
    row["parity_flag"] = {"true": True, "false": False, "": None}[row["parity_flag"]]
    return row


def write_manifest(path, manifest: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
