"""
Report output

Writes experiment rows as CSV, JSON or a rich table, to a file or stdout.
Rows are buffered and rendered on close so the bytes depend only on the rows.
"""

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
import humanize
from rich.console import Console
from rich.table import Table

from .error import ConfigError


FORMATS = ("csv", "json", "table")


def plain_value(value: Any) -> Any:
    """JSON-ready form: integral Fractions become ints, others 'a/b' strings"""
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, dict):
        return {key: plain_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain_value(item) for item in value]
    return value


def cell_text(value: Any, humanize_counts: bool = False) -> str:
    value = plain_value(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if humanize_counts and isinstance(value, int) and abs(value) >= 10_000:
        return humanize.intcomma(value)
    return str(value)


class ReportWriter:
    """Buffered report writer"""

    def __init__(self, path: Optional[Path] = None, format: str = "csv",
                 columns: Sequence[str] = (), title: Optional[str] = None,
                 console: Optional[Console] = None, single: bool = False):
        """
        Initialize report writer

        Args:
            path: Output file path, stdout when None
            format: Output format (csv, json, table)
            columns: Column order; taken from the first row when empty
            title: Table title
            console: Console used for table output on stdout
            single: Emit one JSON object instead of a list
        """
        if format not in FORMATS:
            raise ConfigError(f"Unsupported output format: {format}")
        self.path = Path(path) if path else None
        self.format = format
        self.columns: List[str] = list(columns)
        self.title = title
        self.console = console
        self.single = single
        self.rows: List[Dict[str, Any]] = []

    def write(self, row: Dict[str, Any]):
        if not self.columns:
            self.columns = list(row)
        self.rows.append(row)

    def write_all(self, rows):
        for row in rows:
            self.write(row)

    @property
    def rows_written(self) -> int:
        return len(self.rows)

    def render(self) -> str:
        """Render buffered rows as CSV or JSON text"""
        if self.format == "csv":
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([cell_text(row.get(column)) for column in self.columns])
            return buffer.getvalue()
        if self.format == "json":
            data = [plain_value(row) for row in self.rows]
            if self.single and len(data) == 1:
                data = data[0]
            return json.dumps(data, indent=2) + "\n"
        raise ConfigError("tables are printed, not rendered to text")

    def table(self) -> Table:
        table = Table(title=self.title)
        for column in self.columns:
            table.add_column(column)
        for row in self.rows:
            table.add_row(*(cell_text(row.get(column), humanize_counts=True)
                            for column in self.columns))
        return table

    def close(self):
        """Emit the report"""
        if self.format == "table":
            if self.path:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, 'w', encoding='utf-8') as f:
                    Console(file=f, width=120).print(self.table())
            else:
                (self.console or Console()).print(self.table())
            return
        text = self.render()
        if self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text(text, encoding='utf-8')
        else:
            click.echo(text, nl=False)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is None:
            self.close()


def write_report(rows, format: str, path: Optional[Path] = None,
                 columns: Sequence[str] = (), title: Optional[str] = None,
                 console: Optional[Console] = None, single: bool = False) -> int:
    """
    Write rows in one call

    Returns:
        Number of rows written
    """
    with ReportWriter(path, format, columns, title, console, single) as writer:
        writer.write_all(rows)
    return writer.rows_written
