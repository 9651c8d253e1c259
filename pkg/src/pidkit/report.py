"""Deterministic report serialization and atomic artifact writing.

All float values in reports and generated CSVs are rounded to six
significant digits before serialization, keys are sorted, and files
are written via a temporary name plus rename. Artifact sets are fully
materialized in memory before the first byte hits disk, so a failing
computation leaves no partial outputs behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

SIGNIFICANT_DIGITS = 6


def round_sig(value: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    if value == 0 or not _is_finite(value):
        return value
    return float(f"{value:.{digits}g}")


def _is_finite(value: float) -> bool:
    return value == value and value not in (float("inf"), float("-inf"))


def round_floats(obj):
    """Recursively round every float in a JSON-like structure."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return round_sig(obj)
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def dumps_report(payload: dict) -> str:
    return json.dumps(round_floats(payload), sort_keys=True, indent=2) + "\n"


def format_cell(value: float) -> str:
    """CSV cell for a computed float: six significant digits, no exponent
    clutter for plain magnitudes."""
    rounded = round_sig(value)
    if rounded == int(rounded) and abs(rounded) < 1e15:
        return str(int(rounded))
    return repr(rounded)


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_artifacts(out_dir: Path, files: dict[str, str]) -> list[str]:
    """Write named text artifacts into a directory, all-or-nothing.

    ``files`` maps relative file names to already-rendered content, so
    every computation error has happened before any file is created.
    Returns the written paths.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in files.items():
        target = out_dir / name
        atomic_write_text(target, text)
        written.append(str(target))
    return written
