"""Dataset and classifier file formats used by the CLI.

Datasets are a single JSON document {n, p, X, y, y_c, seed} with X in
row-major order.  Large feature matrices move to a binary sidecar whose
16-byte header is the magic "GMMDSET1" followed by little-endian uint32
n and p, then n*p little-endian float64 values, row-major; the JSON then
carries "X_file" instead of "X".
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .estimators import Classifier
from .model import Dataset, GmmModel, ModelError

MAGIC = b"GMMDSET1"
SIDECAR_CELLS = 250_000  # inline X above this many cells is unwieldy

__all__ = ["write_dataset", "read_dataset", "write_classifier", "read_classifier"]


def write_dataset(dataset: Dataset, path, binary: bool | None = None) -> list[Path]:
    """Write a dataset; returns the list of files written."""
    path = Path(path)
    if binary is None:
        binary = dataset.n * dataset.p > SIDECAR_CELLS
    doc = {
        "n": dataset.n,
        "p": dataset.p,
        "y": dataset.y.astype(int).tolist(),
        "y_c": dataset.y_c.astype(int).tolist(),
        "seed": dataset.seed,
    }
    written = []
    if binary:
        side = path.with_suffix(".bin")
        with open(side, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<II", dataset.n, dataset.p))
            fh.write(np.ascontiguousarray(dataset.X, dtype="<f8").tobytes())
        doc["X_file"] = side.name
        written.append(side)
    else:
        doc["X"] = dataset.X.ravel().tolist()
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    written.insert(0, path)
    return written


def _read_sidecar(path: Path, n: int, p: int) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise ModelError(f"bad dataset sidecar magic in {path}")
        n_file, p_file = struct.unpack("<II", fh.read(8))
        if (n_file, p_file) != (n, p):
            raise ModelError(
                f"sidecar shape ({n_file}, {p_file}) disagrees with JSON ({n}, {p})"
            )
        data = np.frombuffer(fh.read(8 * n * p), dtype="<f8")
    if data.size != n * p:
        raise ModelError(f"sidecar {path} truncated")
    return data.reshape(n, p).astype(float)


def read_dataset(path, model: GmmModel | None = None) -> Dataset:
    """Read a dataset file; with a model, the noise matrix is rebuilt."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelError(f"malformed dataset JSON: {exc}") from exc
    for key in ("n", "p", "y", "y_c", "seed"):
        if key not in doc:
            raise ModelError(f"dataset JSON missing key {key!r}")
    n, p = int(doc["n"]), int(doc["p"])
    if "X_file" in doc:
        X = _read_sidecar(path.parent / doc["X_file"], n, p)
    elif "X" in doc:
        X = np.asarray(doc["X"], dtype=float)
        if X.size != n * p:
            raise ModelError("dataset X has wrong length")
        X = X.reshape(n, p)
    else:
        raise ModelError("dataset JSON needs either X or X_file")
    y = np.asarray(doc["y"], dtype=float)
    y_c = np.asarray(doc["y_c"], dtype=float)
    noise = None
    if model is not None:
        if model.p != p:
            raise ModelError(f"model dimension {model.p} disagrees with dataset p={p}")
        noise = X - y[:, None] * model.eta
    return Dataset(X=X, y=y, y_c=y_c, seed=int(doc["seed"]), noise=noise)


def write_classifier(clf: Classifier, path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(clf.to_json())
    return path


def read_classifier(path) -> Classifier:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    for key in ("kind", "w"):
        if key not in doc:
            raise ModelError(f"classifier JSON missing key {key!r}")
    return Classifier(
        w=np.asarray(doc["w"], dtype=float),
        kind=doc["kind"],
        tau=doc.get("tau"),
        diagnostics=doc.get("diagnostics", {}),
    )
