"""Tabular result model with CSV, JSON, and markdown serialization.

Analysis results and compute artifacts all pass through :class:`Table`.  CSV
and JSON are the machine formats; markdown pipe tables are emitted for humans
but parse back as well, so a run can use any format end to end.  Cell values
are strings on read; consumers convert.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

FORMATS = ("csv", "json", "markdown")

_EXTENSIONS = {"csv": ".csv", "json": ".json", "markdown": ".md"}


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def append(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} cells, table {self.name} has {len(self.columns)} columns")
        self.rows.append(list(values))

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def as_records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def table_filename(name: str, fmt: str) -> str:
    return name + _EXTENSIONS[fmt]


def write_table(table: Table, directory: str | Path, fmt: str) -> Path:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    path = Path(directory) / table_filename(table.name, fmt)
    if fmt == "csv":
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(table.columns)
            writer.writerows(table.rows)
    elif fmt == "json":
        path.write_text(json.dumps(table.as_records(), indent=1), encoding="utf-8")
    else:
        path.write_text(_to_markdown(table), encoding="utf-8")
    return path


def read_table(path: str | Path) -> Table:
    """Read a table previously written by :func:`write_table` (format by extension)."""
    path = Path(path)
    name = path.stem
    if path.suffix == ".csv":
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
        if not rows:
            raise ValueError(f"{path}: empty table")
        return Table(name, rows[0], [list(r) for r in rows[1:]])
    if path.suffix == ".json":
        records = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(records, list):
            raise ValueError(f"{path}: expected a JSON array")
        if not records:
            return Table(name, [], [])
        columns = list(records[0].keys())
        return Table(name, columns, [[_jcell(rec.get(c)) for c in columns] for rec in records])
    if path.suffix == ".md":
        return _from_markdown(name, path.read_text(encoding="utf-8"))
    raise ValueError(f"{path}: unsupported table extension")


def _jcell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _to_markdown(table: Table) -> str:
    def esc(value) -> str:
        return str(value).replace("|", "\\|")

    header = "| " + " | ".join(esc(c) for c in table.columns) + " |"
    rule = "| " + " | ".join("---" for _ in table.columns) + " |"
    lines = [header, rule]
    for row in table.rows:
        lines.append("| " + " | ".join(esc(v) for v in row) + " |")
    return "\n".join(lines) + "\n"


def _from_markdown(name: str, text: str) -> Table:
    lines = [ln for ln in text.splitlines() if ln.strip().startswith("|")]
    if len(lines) < 2:
        raise ValueError("not a markdown pipe table")

    def split(line: str) -> list[str]:
        body = line.strip()
        body = body[1:-1] if body.startswith("|") and body.endswith("|") else body
        cells = re.split(r"(?<!\\)\|", body)
        return [c.strip().replace("\\|", "|") for c in cells]

    columns = split(lines[0])
    rows = [split(ln) for ln in lines[2:]]
    return Table(name, columns, rows)


# --- numeric formatting for report emission ---------------------------------


def round1(value: float) -> float:
    """Half-up rounding to one decimal (table precision for shares and ORs)."""
    return math.floor(value * 10 + 0.5) / 10


def percentages_1dp(fractions: list[float]) -> list[float]:
    """Fractions -> one-decimal percentages that sum to exactly 100.0.

    Largest-remainder allocation in tenths of a percent, so partition columns
    stay partitions after rounding.  An all-zero input stays all zero.
    """
    total = sum(fractions)
    if total == 0:
        return [0.0] * len(fractions)
    shares = [f / total for f in fractions]
    scaled = [s * 1000.0 for s in shares]
    floored = [int(math.floor(x + 1e-9)) for x in scaled]
    leftover = 1000 - sum(floored)
    order = sorted(range(len(scaled)), key=lambda i: (-(scaled[i] - floored[i]), i))
    for i in order[:leftover]:
        floored[i] += 1
    return [units / 10.0 for units in floored]


# --- run manifest ------------------------------------------------------------


def sha256_of_json(payload) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def write_manifest(directory: str | Path, payload: dict) -> Path:
    path = Path(directory) / "manifest.json"
    path.write_text(json.dumps(payload, indent=1, sort_keys=True), encoding="utf-8")
    return path


def read_manifest(directory: str | Path) -> dict:
    path = Path(directory) / "manifest.json"
    return json.loads(path.read_text(encoding="utf-8"))
