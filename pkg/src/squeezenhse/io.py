"""Deterministic artifact output: CSV tables and JSON manifests.

All files are written atomically (temp file in the target directory,
then rename) so partially written artifacts never appear under their
final names. Floats are rendered with 17 significant digits, which
round-trips IEEE doubles, so two runs of the same computation produce
byte-identical CSVs.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

__all__ = ["format_value", "write_csv", "write_json"]


def format_value(value) -> str:
    """Canonical text form of one CSV cell.

    Floats use %.17g (17 significant digits, '.' decimal); complex values
    are not accepted -- callers split them into re/im columns.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not valid CSV cells here")
    if isinstance(value, complex):
        raise TypeError("split complex values into re/im columns")
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    # numpy scalars
    if hasattr(value, "item"):
        return format_value(value.item())
    raise TypeError(f"cannot format {type(value).__name__} as a CSV cell")


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write a UTF-8 CSV with a header row, atomically."""
    lines = [",".join(header)]
    width = len(header)
    for row in rows:
        cells = [format_value(v) for v in row]
        if len(cells) != width:
            raise ValueError(
                f"row width {len(cells)} does not match header width {width}")
        lines.append(",".join(cells))
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def write_json(path, payload) -> None:
    """Write a JSON document with sorted keys, atomically."""
    _atomic_write(Path(path), json.dumps(payload, indent=2, sort_keys=True) + "\n")
