"""Deterministic flat-file output.

Numbers are written in their shortest round-trip decimal form (Python float
repr), so identical runs produce byte-identical files on any platform with
IEEE-754 doubles.  CSV uses a header row, comma separator, '.' decimal and
'\\n' line endings regardless of locale or OS.
"""

from __future__ import annotations

import json
import math
from pathlib import Path


def fmt(x) -> str:
    """Shortest round-trip decimal form of a float."""
    return repr(float(x))


def log10_or_neg_inf(x: float) -> float:
    return math.log10(x) if x > 0.0 else -math.inf


def write_csv(path, header, rows) -> None:
    """Write pre-formatted string rows; creates parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_json_records(path, records) -> None:
    """Write a list of flat dicts as a JSON array (same numbers as the CSV)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(records, fh, indent=2)
        fh.write("\n")
