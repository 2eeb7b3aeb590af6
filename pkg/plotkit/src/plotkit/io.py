"""CSV and sidecar loading against the declared schemas."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .errors import SchemaError

# column contracts, one per figure kind; "region" is the only
# non-numeric column anywhere
SCHEMAS = {
    "phase_diagram": (
        "param1",
        "param2",
        "region",
        "re_lambda0",
        "im_lambda0",
        "re_lambda1",
        "im_lambda1",
    ),
    "correlators": ("r", "G", "method"),
    "trajectory": ("beta_mu", "k", "re_E", "im_E"),
}

_TEXT_COLUMNS = ("region", "method")


def load_table(path, kind: str) -> dict:
    """Read one CSV into {column: list}, validating the kind's schema.

    Numeric columns come back as floats; text columns stay strings.
    """
    if kind not in SCHEMAS:
        raise SchemaError(f"unknown figure kind {kind!r}")
    required = SCHEMAS[kind]
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"{path} does not exist")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise SchemaError(
                    f"{path} is missing column {column!r} required for "
                    f"{kind} figures (header: {', '.join(header) or 'empty'})"
                )
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path} has a header but no rows")
    table: dict = {c: [] for c in required}
    for lineno, row in enumerate(rows, start=2):
        for column in required:
            cell = row[column]
            if column in _TEXT_COLUMNS:
                table[column].append(cell)
                continue
            try:
                table[column].append(float(cell))
            except (TypeError, ValueError):
                raise SchemaError(
                    f"{path}:{lineno}: column {column!r} has non-numeric "
                    f"value {cell!r}"
                ) from None
    return table


def load_sidecar(path) -> dict | None:
    """Parameters the producing command recorded, if the sidecar exists."""
    sidecar = Path(str(path) + ".meta.json")
    if not sidecar.is_file():
        return None
    with open(sidecar, encoding="utf-8") as fh:
        return json.load(fh)
