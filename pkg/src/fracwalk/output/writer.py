"""CSV and line-delimited JSON tables with a versioned schema header."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

from fracwalk.log import get_logger

logger = get_logger(__name__)

SCHEMA_VERSION = "v1"


def format_value(value: Any) -> str:
    """Render a cell: floats by ``repr`` (shortest round-trip), booleans lowercase."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, complex):
        return repr(value).strip("()")
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def digest(text: str) -> str:
    """sha256 hex digest of the rendered table."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class TableWriter:
    """Render rows of one named table as CSV or JSON lines.

    CSV output starts with ``# schema: fracwalk/<table>/v1 columns=a,b,...``; JSON lines
    carry the schema in a ``_schema`` field of every row.
    """

    def __init__(self, table: str, columns: Sequence[str], json_lines: bool = False):
        self.table = table
        self.columns = list(columns)
        self.json_lines = json_lines

    @property
    def schema(self) -> str:
        return f"fracwalk/{self.table}/{SCHEMA_VERSION}"

    def render(self, rows: Iterable[Sequence[Any]]) -> str:
        rows = list(rows)
        for row in rows:
            if len(row) != len(self.columns):
                raise ValueError(f"{self.table}: row {row!r} does not match {self.columns}")
        if self.json_lines:
            lines = []
            for row in rows:
                record = {"_schema": self.schema}
                record.update((c, _json_value(v)) for c, v in zip(self.columns, row))
                lines.append(json.dumps(record))
            return "".join(line + "\n" for line in lines)
        buffer = io.StringIO()
        buffer.write(f"# schema: {self.schema} columns={','.join(self.columns)}\n")
        out = csv.writer(buffer, lineterminator="\n")
        out.writerow(self.columns)
        for row in rows:
            out.writerow([format_value(v) for v in row])
        return buffer.getvalue()

    def write(self, rows: Iterable[Sequence[Any]], path: Optional[Path] = None) -> str:
        """Write to ``path`` or stdout and return the digest of the rendered text."""
        text = self.render(rows)
        if path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
            logger.info("wrote %s to %s", self.schema, path)
        return digest(text)


def read_table(path: Path) -> List[dict]:
    """Read a CSV table written by TableWriter back into dicts of strings."""
    with open(path, "r", encoding="utf-8") as f:
        lines = [line for line in f if not line.startswith("#")]
    return list(csv.DictReader(lines))
