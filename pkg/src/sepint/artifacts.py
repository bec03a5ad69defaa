"""Reading and writing run artifacts.

Samples and matrices are CSV with ``#``-prefixed metadata lines; reports are
JSON with sorted keys.  Floats are written with 17 significant digits so a
round trip is exact.  The only field that may differ between identical runs
is ``timestamp``.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .sections import Frame
from .separability import RankReport, SepMatrix

__all__ = [
    "TIMESTAMP_KEY",
    "dumps_json",
    "strip_timestamp",
    "volume_csv",
    "matrix_csv",
    "matrix_sidecar",
    "save_sep_matrix",
    "load_matrix_csv",
    "load_sep_matrix",
    "rank_report_record",
]

TIMESTAMP_KEY = "timestamp"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def dumps_json(record: dict, timestamp: bool = True) -> str:
    if timestamp:
        record = {**record, TIMESTAMP_KEY: _now()}
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


def strip_timestamp(record: dict) -> dict:
    return {k: v for k, v in record.items() if k != TIMESTAMP_KEY}


def _header(meta: dict) -> str:
    return "".join(f"# {k}: {json.dumps(meta[k], sort_keys=True)}\n" for k in sorted(meta))


def _parse_header(lines) -> dict:
    meta = {}
    for line in lines:
        if not line.startswith("#"):
            break
        key, _, value = line[1:].partition(":")
        meta[key.strip()] = json.loads(value)
    return meta


def volume_csv(ts, values, meta: dict) -> str:
    rows = "".join(f"{t!r},{v!r}\n" for t, v in zip(map(float, ts), map(float, values)))
    return _header(meta) + "t,V\n" + rows


def matrix_csv(values: np.ndarray, meta: dict | None = None) -> str:
    rows = "".join(",".join(repr(float(v)) for v in row) + "\n" for row in np.atleast_2d(values))
    return _header(meta or {}) + rows


def matrix_sidecar(M: SepMatrix, extra: dict | None = None) -> dict:
    return {
        "body": M.body_id,
        "seed": M.seed,
        "grid": list(M.shape),
        "resolution": M.quad_resolution,
        "t_grid": [float(t) for t in M.t_grid],
        "frames": [f.digest() for f in M.frames],
        **(extra or {}),
    }


def save_sep_matrix(M: SepMatrix, path, extra: dict | None = None) -> Path:
    """Write ``path`` (CSV values) and ``path.json`` (metadata); returns the sidecar path."""
    path = Path(path)
    path.write_text(matrix_csv(M.values))
    side = path.with_name(path.name + ".json")
    side.write_text(dumps_json(matrix_sidecar(M, extra), timestamp=False))
    return side


def load_matrix_csv(path) -> tuple[np.ndarray, dict]:
    """Values and header metadata of a matrix CSV.  Raises ``ValueError`` on ragged input."""
    lines = Path(path).read_text().splitlines()
    meta = _parse_header(lines)
    rows = [line for line in lines if line.strip() and not line.startswith("#")]
    if not rows:
        raise ValueError("matrix file has no rows")
    data = [[float(v) for v in row.split(",")] for row in rows]
    if len({len(r) for r in data}) != 1:
        raise ValueError("ragged matrix rows")
    return np.array(data), meta


def load_sep_matrix(path) -> SepMatrix:
    """Load a matrix CSV, attaching sidecar metadata when present."""
    values, _ = load_matrix_csv(path)
    path = Path(path)
    side = path.with_name(path.name + ".json")
    meta = json.loads(side.read_text()) if side.exists() else {}
    t_grid = np.array(meta.get("t_grid", np.arange(values.shape[1])), dtype=float)
    # frames are recorded by digest only; the values carry everything rank needs
    frames: list[Frame] = []
    return SepMatrix(values, frames, t_grid, meta.get("body", ""), meta.get("seed"), meta.get("resolution"))


def rank_report_record(r: RankReport) -> dict:
    return r.to_dict()
