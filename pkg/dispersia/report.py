"""
Report tables, rendered as aligned text or as CSV.

Text output rounds floats to 4 decimals, CSV output keeps full precision
(shortest round-trip representation), so re-reading the CSV gives the same floats.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from dataclasses import dataclass, field
from typing import Any, List, Sequence, TextIO, Tuple, Union

import tabulate

from dispersia.errors import DomainError

Formats = ("text", "csv")


@dataclass
class ReportTable:
    """
    Rectangular table of scalar cells.
    """

    title: str
    column_names: Tuple[str, ...]
    rows: List[Tuple[Any, ...]] = field(default_factory=list)

    def __post_init__(self):
        self.column_names = tuple(self.column_names)
        self.rows = [tuple(row) for row in self.rows]
        for i, row in enumerate(self.rows):
            self._check_row(row, i)

    def _check_row(self, row: Sequence[Any], idx: int):
        if len(row) != len(self.column_names):
            raise DomainError(
                "%s: row %i has %i cells, expected %i" % (self.title, idx, len(row), len(self.column_names))
            )

    def add_row(self, *cells):
        """
        :param cells: one per column
        """
        self._check_row(cells, len(self.rows))
        self.rows.append(tuple(cells))

    def column(self, name: str) -> List[Any]:
        """
        :return: all cells of the column
        """
        idx = self.column_names.index(name)
        return [row[idx] for row in self.rows]


def format_text_cell(value: Any) -> str:
    """
    :return: floats with 4 significant digits, others via str
    """
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return "%.4g" % value
    return str(value)


def format_csv_cell(value: Any) -> str:
    """
    :return: floats as repr, which is the shortest string that round-trips
    """
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_text(table: ReportTable) -> str:
    """
    :return: title line and aligned columns
    """
    body = tabulate.tabulate(
        [[format_text_cell(v) for v in row] for row in table.rows],
        headers=list(table.column_names),
        tablefmt="simple",
        disable_numparse=True,
    )
    return "%s\n%s\n" % (table.title, body)


def render_csv(table: ReportTable) -> str:
    """
    :return: header line and one line per row
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(table.column_names)
    for row in table.rows:
        writer.writerow([format_csv_cell(v) for v in row])
    return out.getvalue()


def emit_report(table: ReportTable, fmt: str = "text", destination: Union[None, str, TextIO] = None):
    """
    :param table:
    :param fmt: "text" or "csv"
    :param destination: file name, open text file, or None for stdout
    """
    if fmt == "text":
        content = render_text(table)
    elif fmt == "csv":
        content = render_csv(table)
    else:
        raise DomainError("report format must be one of %r, got %r" % (Formats, fmt))
    if destination is None:
        sys.stdout.write(content)
        sys.stdout.flush()
    elif isinstance(destination, str):
        with open(destination, "w", newline="") as f:
            f.write(content)
    else:
        destination.write(content)


def key_value_table(title: str, items: Sequence[Tuple[str, Any]]) -> ReportTable:
    """
    :return: two-column table (name, value)
    """
    return ReportTable(title=title, column_names=("name", "value"), rows=[(k, v) for k, v in items])
