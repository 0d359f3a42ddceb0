"""CSV and JSON output with round-trip exact number formatting."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

DIGITS = 17


def fmt(v: float) -> str:
    """Format a real with 17 significant digits, which round-trips doubles."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, f".{DIGITS}g")


def jsonable(obj: Any) -> Any:
    """Convert numpy scalars, arrays and complex numbers for :mod:`json`."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj))


def write_csv(path: str | Path, header: Sequence[str],
              rows: Iterable[Sequence[float | str]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])


def complex_rows(x: np.ndarray, values: np.ndarray) -> list[tuple[float, float, float]]:
    """Rows ``(x, re, im)``."""
    values = np.asarray(values, dtype=complex)
    return [(float(a), float(v.real), float(v.imag)) for a, v in zip(x, values)]


def field_rows(x: np.ndarray, y: Sequence[float], values: np.ndarray,
               ) -> list[tuple[float, float, float]]:
    """Rows ``(x, y, w)``, y-major."""
    return [(float(xj), float(yi), float(values[i, j]))
            for i, yi in enumerate(y) for j, xj in enumerate(x)]
