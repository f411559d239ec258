"""CSV/JSON serialization of scan tables and spectra.

Floats are written with 17 significant digits so every value round-trips
exactly; a sibling ``.json`` file next to each CSV records the run
configuration and solver statistics.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .dynamics import Spectrum
from .scan import RECORD_COLUMNS, ScanTable

UNITS_NOTE = "all frequencies, detunings and rates in units of gamma_cb; times in 1/gamma_cb"


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _json_float(x):
    x = float(x)
    return x if math.isfinite(x) else repr(x)


def table_columns(result) -> dict[str, list]:
    """Ordered column name -> values for a ScanTable, Spectrum or row list."""
    if isinstance(result, ScanTable):
        cols: dict[str, list] = {k: list(v) for k, v in result.axis_columns().items()}
        for name in RECORD_COLUMNS:
            cols[name] = list(result.columns[name])
        cols["status"] = list(result.status)
        return cols
    if isinstance(result, Spectrum):
        return {
            "nu": list(result.nu),
            "amplitude": list(result.amplitude),
            "re_value": list(result.values.real),
            "im_value": list(result.values.imag),
        }
    raise TypeError(f"cannot tabulate {type(result).__name__}")


def csv_text(columns: dict[str, list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in zip(*columns.values()):
        writer.writerow(
            format_float(v) if isinstance(v, (float, np.floating)) else v for v in row
        )
    return buf.getvalue()


def residual_stats(result) -> dict:
    if not isinstance(result, ScanTable):
        return {}
    res = result.columns["residual"]
    ok = res[np.isfinite(res)]
    return {
        "points": len(result),
        "failed": result.n_failed,
        "residual_max": _json_float(ok.max()) if ok.size else None,
        "residual_mean": _json_float(ok.mean()) if ok.size else None,
    }


def metadata_path(path: Path) -> Path:
    if path.suffix == ".json":
        return path.with_name(path.name + ".meta.json")
    return path.with_suffix(".json")


def write_csv(result, path, metadata: dict | None = None) -> Path:
    """Write ``result`` as CSV at ``path`` plus a sibling metadata JSON."""
    path = Path(path)
    columns = result if isinstance(result, dict) else table_columns(result)
    path.write_text(csv_text(columns), newline="")
    meta = {"units": UNITS_NOTE, **(metadata or {})}
    meta.setdefault("solver", residual_stats(result))
    metadata_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def write_json(result, path, metadata: dict | None = None) -> Path:
    path = Path(path)
    columns = result if isinstance(result, dict) else table_columns(result)
    meta = {"units": UNITS_NOTE, **(metadata or {})}
    meta.setdefault("solver", residual_stats(result))
    payload = {
        "meta": meta,
        "columns": {
            k: [_json_float(v) if isinstance(v, (float, np.floating)) else v for v in vals]
            for k, vals in columns.items()
        },
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    return path
