from __future__ import annotations

import csv
import io
import json
import logging
import math
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TextIO

logger = logging.getLogger("casimove")

Row = dict[str, Any]


@dataclass
class RunRecord:
    meta: dict[str, Any] = field(default_factory=dict)
    inputs: list[dict[str, Any]] = field(default_factory=list)
    results: list[Row] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return all(row.get("converged", True) for row in self.results)


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def parse_value(text: str) -> Any:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _columns(rows: Sequence[Row]) -> list[str]:
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return columns


def write_csv(rows: Sequence[Row], stream: TextIO) -> None:
    columns = _columns(rows)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])


def read_csv(stream: TextIO) -> list[Row]:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        return []
    return [{k: parse_value(v) for k, v in zip(header, line)} for line in reader if line]


def _json_safe(value: Any) -> Any:
    # NaN and inf are not JSON; spectrum rows use them for excluded points
    if isinstance(value, float) and not math.isfinite(value):
        return format_value(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_safe(v) for v in value]
    return value


def _json_restore(value: Any) -> Any:
    if isinstance(value, str) and value in ("nan", "inf", "-inf"):
        return float(value)
    if isinstance(value, dict):
        return {k: _json_restore(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_restore(v) for v in value]
    return value


def to_json(record: RunRecord) -> str:
    data = {"meta": record.meta, "inputs": record.inputs, "results": record.results}
    return json.dumps(_json_safe(data), indent=2, allow_nan=False)


def from_json(text: str) -> RunRecord:
    data = _json_restore(json.loads(text))
    return RunRecord(
        meta=data.get("meta", {}),
        inputs=data.get("inputs", []),
        results=data.get("results", []),
    )


def write_record(record: RunRecord, fmt: str, path: str | Path | None = None) -> None:
    """Write ``record`` to ``path``, or to stdout when no path is given."""
    if fmt == "json":
        text = to_json(record) + "\n"
    elif fmt == "csv":
        buffer = io.StringIO()
        write_csv(record.results, buffer)
        text = buffer.getvalue()
    else:
        raise ValueError(f"Unknown format: {fmt}")
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
    logger.info("Wrote %d records to %s", len(record.results), path)


def read_record(path: str | Path) -> RunRecord:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        return from_json(text)
    return RunRecord(results=read_csv(io.StringIO(text)))
