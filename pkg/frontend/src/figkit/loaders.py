"""Read manifests and CSV artifacts produced by the squeezenhse CLI.

CSV schema contract: UTF-8, comma-separated, one header row, '.'
decimal. A table with a header but no data rows is treated as an error
by the panel renderers that need data (``require_rows``).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

__all__ = ["ArtifactError", "load_manifest", "read_csv", "require_rows"]


class ArtifactError(ValueError):
    """Missing, empty, or schema-violating artifact."""


def load_manifest(path) -> dict:
    """Load a manifest.json written by squeezenhse run/reproduce."""
    path = Path(path)
    if not path.is_file():
        raise ArtifactError(f"manifest not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "tool" not in doc:
        raise ArtifactError(f"{path} is not a squeezenhse manifest")
    return doc


def read_csv(path, columns) -> dict:
    """Read a CSV artifact and return the requested columns.

    ``columns`` maps column name -> dtype (float or str). Returns a dict
    of numpy arrays keyed by column name. Missing columns raise
    :class:`ArtifactError`.
    """
    path = Path(path)
    if not path.is_file():
        raise ArtifactError(f"artifact not found: {path}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ArtifactError(f"{path} has no header row") from None
        missing = [c for c in columns if c not in header]
        if missing:
            raise ArtifactError(f"{path} is missing column(s) {missing}; "
                                f"header is {header}")
        idx = {c: header.index(c) for c in columns}
        raw = {c: [] for c in columns}
        for row in reader:
            if len(row) != len(header):
                raise ArtifactError(f"{path}: ragged row {row}")
            for c in columns:
                raw[c].append(row[idx[c]])
    out = {}
    for c, dtype in columns.items():
        if dtype is str:
            out[c] = np.array(raw[c], dtype=object)
        else:
            try:
                out[c] = np.array([dtype(v) for v in raw[c]])
            except ValueError as exc:
                raise ArtifactError(f"{path}, column {c!r}: {exc}") from exc
    return out


def require_rows(table: dict, path) -> dict:
    """Fail loudly on an empty table instead of rendering a blank panel."""
    if any(v.size == 0 for v in table.values()):
        raise ArtifactError(f"{path} contains no data rows")
    return table
