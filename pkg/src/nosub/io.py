"""CSV dataset files and JSON helpers.

Dataset CSV: header ``x0,x1,...`` with an optional trailing ``label`` column,
one point per row.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .metric import Dataset


def write_dataset_csv(X: Dataset, path) -> None:
    d = X.dim
    header = [f"x{j}" for j in range(d)]
    if X.labels is not None:
        header.append("label")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, p in enumerate(X.points):
            row = [repr(float(v)) for v in p]
            if X.labels is not None:
                row.append(str(int(X.labels[i])))
            w.writerow(row)


def read_dataset_csv(path) -> Dataset:
    """Read a dataset CSV; ragged or non-numeric rows raise :class:`InvalidInputError`."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InvalidInputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    has_label = bool(header) and header[-1] == "label"
    coords = header[:-1] if has_label else header
    if not coords or coords != [f"x{j}" for j in range(len(coords))]:
        raise InvalidInputError(f"{path}: header must be x0,x1,...[,label]")
    width = len(header)
    pts, labels = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != width:
            raise InvalidInputError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
        try:
            pts.append([float(v) for v in row[: len(coords)]])
            if has_label:
                labels.append(int(row[-1]))
        except ValueError as exc:
            raise InvalidInputError(f"{path}:{lineno}: {exc}") from None
    if not pts:
        raise InvalidInputError(f"{path}: no data rows")
    return Dataset(np.asarray(pts), np.asarray(labels) if has_label else None)


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def dumps(obj) -> str:
    """Deterministic JSON (sorted keys, non-finite floats as null)."""
    return json.dumps(_clean(obj), indent=2, sort_keys=True)


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())
