"""Deterministic CSV / JSON / binary output helpers.

All floats are printed with 17 significant digits so that identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

FLOAT_FMT = "%.17g"


def format_float(x: float) -> str:
    return FLOAT_FMT % float(x)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in np.atleast_2d(np.asarray(rows, dtype=float)):
        lines.append(",".join(format_float(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def config_digest(resolved: dict) -> str:
    blob = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def write_manifest(path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return path


# Binary field layout: ascii magic "BGF1", int64 number of records, then one
# little-endian float64 triplet (coordinate, re, im) per record.  Fields over
# (t, x) are flattened time-major with the coordinate column carrying x; the
# time grid is recoverable from the accompanying manifest/CSV.
_MAGIC = b"BGF1"


def write_binary_triplets(path, coords, values) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    coords = np.asarray(coords, dtype="<f8").ravel()
    values = np.asarray(values, dtype=complex).ravel()
    if coords.size != values.size:
        raise ValueError("coords and values must have equal length")
    rec = np.empty((coords.size, 3), dtype="<f8")
    rec[:, 0] = coords
    rec[:, 1] = values.real
    rec[:, 2] = values.imag
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<q", coords.size))
        fh.write(rec.tobytes())
    return path


def read_binary_triplets(path):
    raw = Path(path).read_bytes()
    if raw[:4] != _MAGIC:
        raise ValueError("not a bigraph binary field file")
    (n,) = struct.unpack("<q", raw[4:12])
    rec = np.frombuffer(raw[12:], dtype="<f8").reshape(n, 3)
    return rec[:, 0].copy(), rec[:, 1] + 1j * rec[:, 2]
