"""CSV writing and reading for the command-line outputs.

Numbers are rendered with 12 significant digits and a ``.`` decimal
separator regardless of locale; empty cells stand for missing values. The
reader undoes exactly that, so files round-trip.
"""

from __future__ import annotations

import csv
from typing import IO, Sequence

__all__ = ["format_cell", "write_rows", "read_rows"]


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        raise TypeError("booleans have no CSV representation here")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_rows(stream: IO[str], header: Sequence[str], rows) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])


def _parse_cell(text: str):
    if text == "":
        return None
    try:
        as_int = int(text)
    except ValueError:
        pass
    else:
        return as_int
    try:
        return float(text)
    except ValueError:
        return text


def read_rows(stream: IO[str]) -> tuple[list[str], list[list]]:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV stream") from None
    return header, [[_parse_cell(cell) for cell in row] for row in reader]
