"""Column tables and their CSV form.

Floats are written with 17 significant digits so that parsing a file gives
back the same doubles; rate-like columns use scientific notation.  Leading
``#`` lines document the columns and are skipped on read.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["Table", "format_cell", "parse_cell", "read_csv", "SCIENTIFIC_SUFFIXES"]

SCIENTIFIC_SUFFIXES = ("rate", "rate_surrogate", "max_alloc")


def _scientific(column: str) -> bool:
    return column.endswith(SCIENTIFIC_SUFFIXES)


def format_cell(value, column: str = "") -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return repr(value)
        if _scientific(column):
            return format(value, ".16e")
        return repr(value)
    return str(value)


def parse_cell(text: str):
    """Inverse of :func:`format_cell`: empty -> None, then int, float, str."""
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


@dataclass(frozen=True)
class Table:
    columns: tuple
    rows: tuple
    notes: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError(f"row has {len(r)} cells for {len(self.columns)} columns")

    def column(self, name: str) -> list:
        k = self.columns.index(name)
        return [r[k] for r in self.rows]

    def records(self) -> list:
        return [dict(zip(self.columns, r)) for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        for name in self.columns:
            if name in self.notes:
                buf.write(f"# {name}: {self.notes[name]}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([format_cell(v, c) for v, c in zip(r, self.columns)])
        return buf.getvalue()

    def write(self, path: "str | Path") -> Path:
        p = Path(path)
        with open(p, "w", newline="") as fh:
            fh.write(self.to_csv())
        return p


def read_csv(source: "str | Path") -> Table:
    """Parse a file written by :meth:`Table.write` (or CSV text via ``io.StringIO``)."""
    text = Path(source).read_text() if not isinstance(source, io.StringIO) else source.getvalue()
    notes = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            name, _, desc = line[1:].strip().partition(":")
            notes[name.strip()] = desc.strip()
        else:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = [tuple(parse_cell(c) for c in r) for r in reader]
    return Table(tuple(columns), tuple(rows), notes)
