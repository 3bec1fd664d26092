"""Principal coordinates (classical scaling) of a distance matrix."""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from marketmap.errors import DataError

__all__ = ["EmbeddingCoordinates", "pcoa_embedding", "double_center"]


@dataclass(frozen=True)
class EmbeddingCoordinates:
    """Coordinates (one row per asset) and the eigenvalues that scale them.

    ``negative_mass`` is the share of the Gram spectrum's absolute mass held
    by negative eigenvalues: 0 for a Euclidean distance matrix.
    """

    tickers: tuple[str, ...]
    coords: np.ndarray
    eigenvalues: np.ndarray
    negative_mass: float

    def distances(self):
        diff = self.coords[:, None, :] - self.coords[None, :, :]
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))

    def write_csv(self, path, sectors=None):
        path = Path(path)
        sectors = sectors or ["unknown"] * len(self.tickers)
        axes = ["x", "y", "z"] if self.coords.shape[1] == 3 else [
            f"x{k + 1}" for k in range(self.coords.shape[1])]
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["ticker", "sector", *axes])
            for t, s, row in zip(self.tickers, sectors, self.coords):
                writer.writerow([t, s, *(repr(float(v)) for v in row)])
        return path


def double_center(sq):
    """``-0.5 * H @ sq @ H`` with ``H`` the centering projector."""
    b = sq - sq.mean(axis=0) - sq.mean(axis=1)[:, None] + sq.mean()
    return -0.5 * b


def pcoa_embedding(dist, dims=3):
    values = np.asarray(getattr(dist, "values", dist), dtype=np.float64)
    tickers = tuple(getattr(dist, "tickers", range(values.shape[0])))
    n = values.shape[0]
    if values.ndim != 2 or values.shape[1] != n:
        raise DataError("distance matrix must be square")
    if n <= dims:
        raise DataError(f"need more than {dims} points for a {dims}-D embedding, got {n}")
    if not np.allclose(values, values.T, rtol=0.0, atol=1e-12):
        raise DataError("distance matrix is not symmetric")

    b = double_center(values**2)
    b = 0.5 * (b + b.T)
    evals, evecs = np.linalg.eigh(b)
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]

    total = np.abs(evals).sum()
    negative_mass = float(np.abs(evals[evals < 0]).sum() / total) if total > 0 else 0.0

    top = evals[:dims].copy()
    vecs = evecs[:, :dims].copy()
    floor = 1e-12 * max(evals[0], 0.0)
    weak = top <= floor
    if weak.any():
        warnings.warn(
            f"{int(weak.sum())} of {dims} leading eigenvalues are not positive; "
            "those coordinate columns are zero",
            RuntimeWarning,
            stacklevel=2,
        )
    scale = np.where(weak, 0.0, np.sqrt(np.where(weak, 0.0, top)))
    coords = vecs * scale
    for k in range(dims):
        col = coords[:, k]
        if not col.any():
            continue
        if col[np.argmax(np.abs(col))] < 0:
            coords[:, k] = -col
    coords -= coords.mean(axis=0)
    coords.setflags(write=False)
    return EmbeddingCoordinates(tickers, coords, top, negative_mass)
