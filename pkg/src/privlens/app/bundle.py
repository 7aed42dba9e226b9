"""Report bundle: table schemas, validation, CSV/JSON emission, round-trip."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

#: table name -> ordered (column, type) pairs; types are "int", "float", "str".
TABLE_SCHEMAS: dict[str, list[tuple[str, str]]] = {
    "posts_per_user": [("posts", "int"), ("users", "int")],
    "hashtags_per_post": [("hashtags", "int"), ("posts", "int")],
    "posts_per_phase": [("country", "str"), ("phase", "str"), ("posts", "int")],
    "hashtag_clusters": [
        ("country", "str"), ("phase", "str"), ("label", "str"), ("posts", "int"),
    ],
    "domain_categories": [
        ("country", "str"), ("phase", "str"), ("category", "str"), ("shares", "int"),
    ],
    "sentiment": [
        ("topic", "str"), ("phase", "str"),
        ("positive", "float"), ("neutral", "float"), ("negative", "float"),
    ],
    "risk_cdf": [
        ("topic", "str"), ("phase", "str"), ("risk", "float"), ("cdf", "float"),
    ],
    "risk_vs_posts": [("n_posts", "int"), ("users", "int"), ("mean_risk", "float")],
    "unique_sequences": [
        ("phase", "str"), ("unique_sequences", "int"), ("fully_identified", "int"),
    ],
    "tier_table": [
        ("threshold", "int"), ("phase", "str"), ("total", "int"), ("unique", "int"),
    ],
    "suspicious_categories": [
        ("country", "str"), ("phase", "str"), ("category", "str"), ("fraction", "float"),
    ],
}

#: Columns emitted with fixed 6-decimal formatting.
_FRACTION_COLUMNS = {"positive", "neutral", "negative", "fraction", "mean_risk", "cdf"}


@dataclass
class Table:
    name: str
    rows: list[dict] = field(default_factory=list)

    @property
    def columns(self) -> list[str]:
        return [col for col, _ in TABLE_SCHEMAS[self.name]]


@dataclass
class ReportBundle:
    tables: dict[str, Table] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def add(self, name: str, rows: Iterable[dict]) -> Table:
        table = Table(name=name, rows=list(rows))
        self.tables[name] = table
        return table

    def validate(self) -> list[str]:
        """Schema violations across all tables; empty means valid."""
        problems: list[str] = []
        for name in TABLE_SCHEMAS:
            if name not in self.tables:
                problems.append(f"missing table: {name}")
        for name, table in self.tables.items():
            schema = TABLE_SCHEMAS.get(name)
            if schema is None:
                problems.append(f"unknown table: {name}")
                continue
            for i, row in enumerate(table.rows):
                if set(row) != {col for col, _ in schema}:
                    problems.append(f"{name} row {i}: columns {sorted(row)} != schema")
                    break
                for col, kind in schema:
                    value = row[col]
                    ok = (
                        isinstance(value, int) and not isinstance(value, bool)
                        if kind == "int"
                        else isinstance(value, (int, float)) and not isinstance(value, bool)
                        if kind == "float"
                        else isinstance(value, str)
                    )
                    if not ok:
                        problems.append(f"{name} row {i}: {col}={value!r} is not {kind}")
                        break
        if not self.metadata.get("config_hash"):
            problems.append("metadata lacks config_hash")
        if not self.metadata.get("input_hashes"):
            problems.append("metadata lacks input_hashes")
        return problems


def _format_cell(column: str, value) -> str:
    if column in _FRACTION_COLUMNS:
        return f"{value:.6f}"
    return str(value)


def write_table_csv(table: Table, directory) -> Path:
    path = Path(directory) / f"{table.name}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_format_cell(col, row[col]) for col in table.columns])
    return path


def write_table_json(table: Table, directory) -> Path:
    path = Path(directory) / f"{table.name}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"table": table.name, "columns": table.columns, "rows": table.rows}
    path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    return path


def emit(bundle: ReportBundle, directory, fmt: str = "csv") -> list[Path]:
    """One file per table plus run metadata; stable order, UTF-8, LF endings."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(bundle.tables):
        table = bundle.tables[name]
        if fmt == "csv":
            written.append(write_table_csv(table, directory))
        else:
            written.append(write_table_json(table, directory))
    meta_path = directory / "run_metadata.json"
    meta_path.write_text(
        json.dumps(bundle.metadata, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    written.append(meta_path)
    return written


def read_table_csv(name: str, directory) -> Table:
    """Read a stage-written CSV back into a typed table."""
    schema = TABLE_SCHEMAS[name]
    path = Path(directory) / f"{name}.csv"
    rows: list[dict] = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        for raw in csv.DictReader(fh):
            row = {}
            for col, kind in schema:
                value = raw[col]
                row[col] = int(value) if kind == "int" else (
                    float(value) if kind == "float" else value
                )
            rows.append(row)
    return Table(name=name, rows=rows)


def load_table_json(path) -> Table:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    table = Table(name=obj["table"], rows=list(obj["rows"]))
    if obj.get("columns") != table.columns:
        raise ValueError(f"column order mismatch in {path}")
    return table


def load_bundle(directory, fmt: str = "json") -> ReportBundle:
    """Inverse of :func:`emit` for the JSON format."""
    if fmt != "json":
        raise ValueError("only the json format round-trips losslessly")
    directory = Path(directory)
    bundle = ReportBundle()
    for path in sorted(directory.glob("*.json")):
        if path.name == "run_metadata.json":
            bundle.metadata = json.loads(path.read_text(encoding="utf-8"))
            continue
        obj = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(obj, dict) or "table" not in obj:
            continue  # not a bundle table
        table = load_table_json(path)
        bundle.tables[table.name] = table
    return bundle
