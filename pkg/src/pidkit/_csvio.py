"""Internal CSV helpers: header-checked reading with 1-based row numbers."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .errors import DataValidationError


def read_rows(source: str | Path, expected_header: list[str]) -> list[tuple[int, dict[str, str]]]:
    """Read a CSV file or CSV text and return (row_number, record) pairs.

    The header must match ``expected_header`` exactly. Row numbers are
    1-based and count the header as row 1, so the first data row is 2.
    """
    text = _as_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataValidationError("empty file: expected header " + ",".join(expected_header))
    header = [h.strip() for h in header]
    if header != expected_header:
        raise DataValidationError(
            f"bad header {','.join(header)!r}: expected {','.join(expected_header)!r}", row=1
        )
    rows = []
    for i, raw in enumerate(reader, start=2):
        if not raw or all(not cell.strip() for cell in raw):
            continue
        if len(raw) != len(expected_header):
            raise DataValidationError(
                f"expected {len(expected_header)} fields, got {len(raw)}", row=i
            )
        rows.append((i, {k: v.strip() for k, v in zip(expected_header, raw)}))
    if not rows:
        raise DataValidationError("no data rows")
    return rows


def sniff_header(source: str | Path) -> list[str]:
    """Return the header row of a CSV file or CSV text."""
    text = _as_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        return [h.strip() for h in next(reader)]
    except StopIteration:
        raise DataValidationError("empty file")


def parse_float(value: str, field: str, row: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise DataValidationError(f"{field} is not a number: {value!r}", row=row)


def parse_int(value: str, field: str, row: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise DataValidationError(f"{field} is not an integer: {value!r}", row=row)


def _as_text(source: str | Path) -> str:
    if isinstance(source, Path):
        if not source.exists():
            raise DataValidationError(f"file not found: {source}")
        return source.read_text()
    # A plain string is taken as a path when it names an existing file,
    # otherwise as CSV text itself.
    if "\n" not in source and source and Path(source).is_file():
        return Path(source).read_text()
    return source
