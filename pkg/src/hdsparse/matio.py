"""CSV matrix files and problem-bundle directories.

Matrix format: one header line `# rows cols`, then row-major CSV with
full-precision floats.  A bundle directory holds Q.csv, x.csv, optional
strue.csv, and meta.json with keys N, L, kappa, seed.  Indices in files
are 0-based.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

__all__ = [
    "save_matrix",
    "load_matrix",
    "load_vector",
    "write_bundle",
    "read_bundle",
]


def save_matrix(path, arr) -> None:
    """Write a 1-D or 2-D array; vectors are stored as single-column matrices."""
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError("only 1-D or 2-D arrays are supported")
    rows, cols = arr.shape
    lines = [f"# {rows} {cols}"]
    for r in range(rows):
        lines.append(",".join(format(v, ".17g") for v in arr[r]))
    Path(path).write_text("\n".join(lines) + "\n")


def load_matrix(path) -> np.ndarray:
    text = Path(path).read_text().strip().splitlines()
    if not text or not text[0].startswith("#"):
        raise ValueError(f"{path}: missing '# rows cols' header")
    head = text[0][1:].split()
    if len(head) != 2:
        raise ValueError(f"{path}: malformed header {text[0]!r}")
    rows, cols = int(head[0]), int(head[1])
    body = [ln for ln in text[1:] if ln.strip()]
    if len(body) != rows:
        raise ValueError(f"{path}: expected {rows} rows, found {len(body)}")
    out = np.empty((rows, cols))
    for r, ln in enumerate(body):
        vals = ln.split(",")
        if len(vals) != cols:
            raise ValueError(f"{path}: row {r} has {len(vals)} fields, expected {cols}")
        out[r] = [float(v) for v in vals]
    return out


def load_vector(path) -> np.ndarray:
    m = load_matrix(path)
    if 1 not in m.shape:
        raise ValueError(f"{path}: expected a vector, got shape {m.shape}")
    return m.reshape(-1)


def write_bundle(directory, Q, x, meta: dict, s_true=None) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    save_matrix(d / "Q.csv", Q)
    save_matrix(d / "x.csv", x)
    if s_true is not None:
        save_matrix(d / "strue.csv", s_true)
    (d / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def read_bundle(directory) -> tuple:
    """Returns (Q, x, s_true_or_None, meta)."""
    d = Path(directory)
    Q = load_matrix(d / "Q.csv")
    x = load_vector(d / "x.csv")
    s_true = load_vector(d / "strue.csv") if (d / "strue.csv").exists() else None
    meta = json.loads((d / "meta.json").read_text()) if (d / "meta.json").exists() else {}
    return Q, x, s_true, meta
