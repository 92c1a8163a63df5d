from __future__ import annotations

import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, TextIO

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def add(self, **values: Any) -> None:
        unknown = set(values) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown result columns: {sorted(unknown)}")
        self.rows.append(values)


def _json_value(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _csv_cell(value: Any) -> str:
    value = _json_value(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(table: ResultTable, handle: TextIO) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_csv_cell(row.get(name)) for name in table.columns])


def write_json(table: ResultTable, handle: TextIO) -> None:
    payload = {
        "metadata": table.metadata,
        "columns": table.columns,
        "rows": [{name: _json_value(row.get(name)) for name in table.columns} for row in table.rows],
    }
    json.dump(payload, handle, indent=2, default=_json_value)
    handle.write("\n")


def render(table: ResultTable, fmt: str) -> str:
    buffer = io.StringIO()
    if fmt == "json":
        write_json(table, buffer)
    else:
        write_csv(table, buffer)
    return buffer.getvalue()


def metadata_path(output: Path) -> Path:
    return output.with_name(output.name + ".meta.json")


def emit(table: ResultTable, output: str | Path | None, fmt: str = "csv") -> Path | None:
    """Write ``table`` to ``output`` (stdout when None); CSV files get a metadata sidecar."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown output format {fmt!r}")
    if output is None:
        if fmt == "csv":
            sys.stdout.write("# metadata: " + json.dumps(table.metadata, default=_json_value) + "\n")
        sys.stdout.write(render(table, fmt))
        return None

    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render(table, fmt), encoding="utf-8")
    if fmt == "csv":
        metadata_path(path).write_text(
            json.dumps(table.metadata, indent=2, default=_json_value) + "\n", encoding="utf-8"
        )
    logger.info("wrote %d rows to %s", len(table.rows), path)
    return path
