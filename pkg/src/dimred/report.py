"""JSON reports and frozen CSV schemas.

CSV files are comma-separated with a header row and '.' decimals; floats are
written with ``repr`` so they round-trip exactly.  JSON documents carry
``schema_version`` and are written with sorted keys.
"""
from __future__ import annotations

import csv
import json
import math
import platform
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__

SCHEMA_VERSION = 1

# frozen column sets, one per CSV product
CSV_SCHEMAS = {
    "spectrum": ("k", "E_1d"),
    "branches": ("p", "eps_I", "eps_II"),
    "envelope": ("k", "E_1d", "lower", "upper", "valid_lower", "valid_upper"),
    "sweep": ("a_over_r", "excess_1", "E1d_1", "ratio", "lower", "upper", "overlap"),
    "oracle": ("k", "E_3d", "excess", "E_1d", "overlap", "grid_defect"),
    "acceptance": ("criterion", "title", "verdict", "elapsed_s", "budget_s"),
}


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, Path):
        return str(x)
    return x


def provenance(config_hash: str | None = None) -> dict:
    import scipy

    return {"config_hash": config_hash, "dimred": __version__, "numpy": np.__version__,
            "scipy": scipy.__version__, "python": platform.python_version()}


def make_report(command: str, results, config_hash: str | None = None, **extra) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "results": results,
           "provenance": provenance(config_hash)}
    doc.update(extra)
    return _clean(doc)


def dumps(doc) -> str:
    return json.dumps(_clean(doc), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)


def write_json(path, doc) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(doc) + "\n", encoding="utf-8")
    return path


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, schema: str, rows: Iterable[Sequence]) -> Path:
    cols = CSV_SCHEMAS[schema]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for row in rows:
            row = list(row)
            if len(row) != len(cols):
                raise ValueError(f"{schema} rows need {len(cols)} columns, got {len(row)}")
            w.writerow([_cell(v) for v in row])
    return path


def read_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
