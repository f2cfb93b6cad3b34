"""Rendering of result tables as aligned text, CSV or JSON lines.

Machine formats print floats with repr(), which round-trips exactly, and keep
column order fixed so identical runs give identical bytes.
"""

import csv
import io
import json
from enum import Enum
from typing import Any, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field


class OutputFormat(str, Enum):
    """Output kinds selectable with --format."""

    TABLE = "table"
    CSV = "csv"
    JSONL = "jsonl"


class ResultTable(BaseModel):
    """Columns, rows and descriptive metadata of one command's output."""

    columns: List[str]
    rows: List[List[Any]] = Field(default_factory=list)
    metadata: List[Tuple[str, Any]] = Field(default_factory=list)
    footer: List[str] = Field(default_factory=list)
    # Aligned text only; machine formats repeat the value on every row.
    group_by: Optional[str] = None


def format_number(value: Any) -> str:
    """Exact text for machine formats."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _human(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return format_number(value)


def render_csv(table: ResultTable) -> str:
    """CSV with "# key: value" metadata lines above the header."""
    buffer = io.StringIO()
    for key, value in table.metadata:
        buffer.write(f"# {key}: {format_number(value)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_number(v) for v in row])
    for line in table.footer:
        buffer.write(f"# {line}\n")
    return buffer.getvalue()


def render_jsonl(table: ResultTable) -> str:
    """One JSON object per row; a footer becomes a final {"note": ...} line."""
    lines = [
        json.dumps(dict(zip(table.columns, row)), allow_nan=False)
        for row in table.rows
    ]
    lines.extend(json.dumps({"note": line}) for line in table.footer)
    return "".join(line + "\n" for line in lines)


def _grouped(table: ResultTable, cells: List[List[str]]) -> List[List[str]]:
    """Blank the group column on rows that repeat the row above."""
    if table.group_by is None or table.group_by not in table.columns:
        return cells
    index = table.columns.index(table.group_by)
    previous: Any = object()
    for row, shown in zip(table.rows, cells):
        if row[index] == previous:
            shown[index] = ""
        previous = row[index]
    return cells


def render_table(table: ResultTable) -> str:
    """Right-aligned columns for reading in a terminal."""
    cells = _grouped(table, [[_human(v) for v in row] for row in table.rows])
    widths = [
        max([len(name)] + [len(row[i]) for row in cells])
        for i, name in enumerate(table.columns)
    ]
    out = [f"{key}: {_human(value)}" for key, value in table.metadata]
    if out:
        out.append("")
    out.append("  ".join(n.rjust(w) for n, w in zip(table.columns, widths)))
    out.append("  ".join("-" * w for w in widths))
    out.extend("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)
    if table.footer:
        out.append("")
        out.extend(table.footer)
    return "\n".join(out) + "\n"


def render(table: ResultTable, fmt: Optional[OutputFormat] = None) -> str:
    """Render ``table`` in the requested format (aligned text by default)."""
    fmt = fmt or OutputFormat.TABLE
    if fmt == OutputFormat.CSV:
        return render_csv(table)
    if fmt == OutputFormat.JSONL:
        return render_jsonl(table)
    return render_table(table)


def parse_csv(text: str) -> Tuple[List[str], List[List[str]], Sequence[str]]:
    """Split rendered CSV back into header, rows and comment lines."""
    comments = [line for line in text.splitlines() if line.startswith("#")]
    body = [line for line in text.splitlines() if line and not line.startswith("#")]
    rows = list(csv.reader(body))
    return rows[0], rows[1:], comments
