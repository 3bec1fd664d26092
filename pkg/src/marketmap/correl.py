"""Spearman correlation, the linear correlation distance and the shuffle noise floor."""
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

from marketmap.errors import DataError

__all__ = [
    "CorrelationMatrix",
    "DistanceMatrix",
    "NoiseThreshold",
    "spearman_correlation",
    "distance_from_correlation",
    "estimate_noise_threshold",
    "replicate_statistics",
    "write_matrix",
    "read_matrix",
]

NOISE_STATISTIC = "min-offdiagonal-distance"


def _square(values, tickers):
    values = np.array(values, dtype=np.float64, copy=True)
    n = len(tickers)
    if values.shape != (n, n):
        raise DataError(f"matrix shape {values.shape} does not match {n} tickers")
    if len(set(tickers)) != n:
        raise DataError("duplicate tickers in matrix labels")
    if not np.all(np.isfinite(values)):
        raise DataError("matrix contains non-finite values")
    if not np.array_equal(values, values.T):
        raise DataError("matrix is not symmetric")
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class CorrelationMatrix:
    tickers: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "tickers", tuple(self.tickers))
        v = _square(self.values, self.tickers)
        if not np.all(np.diag(v) == 1.0):
            raise DataError("correlation diagonal must be exactly 1")
        if np.any(np.abs(v) > 1.0):
            raise DataError("correlations must lie in [-1, 1]")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class DistanceMatrix:
    tickers: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "tickers", tuple(self.tickers))
        v = _square(self.values, self.tickers)
        if not np.all(np.diag(v) == 0.0):
            raise DataError("distance diagonal must be exactly 0")
        if np.any(v < 0.0) or np.any(v > 2.0):
            raise DataError("distances must lie in [0, 2]")
        object.__setattr__(self, "values", v)

    @property
    def n(self):
        return len(self.tickers)

    def to_correlation(self):
        """Inverse of :func:`distance_from_correlation`."""
        c = 1.0 - self.values
        np.fill_diagonal(c, 1.0)
        return CorrelationMatrix(self.tickers, c)


@dataclass(frozen=True)
class NoiseThreshold:
    """Distribution summary of the strongest spurious link under shuffling."""

    mean: float
    std: float
    n_shuffles: int
    seed: int
    statistic: str = NOISE_STATISTIC

    def __post_init__(self):
        if self.n_shuffles < 1:
            raise DataError("n_shuffles must be at least 1")
        if not self.std >= 0.0:
            raise DataError("std must be nonnegative")

    def to_dict(self):
        return {"mean": self.mean, "std": self.std, "n_shuffles": self.n_shuffles,
                "seed": self.seed, "statistic": self.statistic}


def _standardized_ranks(panel):
    """Column ranks (ties averaged), centred and scaled to unit Euclidean norm."""
    x = panel.returns
    if x.shape[0] < 3:
        raise DataError(f"need at least 3 observations per asset, got {x.shape[0]}")
    ranks = rankdata(x, method="average", axis=0)
    centred = ranks - ranks.mean(axis=0)
    norms = np.sqrt(np.einsum("ij,ij->j", centred, centred))
    flat = np.flatnonzero(norms == 0.0)
    if flat.size:
        names = ", ".join(panel.tickers[i] for i in flat)
        raise DataError(f"constant return series (zero rank variance): {names}")
    return centred / norms


def _gram_to_correlation(z):
    c = z.T @ z
    c = 0.5 * (c + c.T)
    np.clip(c, -1.0, 1.0, out=c)
    np.fill_diagonal(c, 1.0)
    return c


def spearman_correlation(panel):
    """Pearson correlation of average-tie ranks, column by column."""
    z = _standardized_ranks(panel)
    return CorrelationMatrix(panel.tickers, _gram_to_correlation(z))


def distance_from_correlation(corr):
    d = 1.0 - corr.values
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(corr.tickers, d)


def _asset_stream(seed, replicate, asset):
    # one counter-based stream per (seed, replicate, asset): independent of scheduling
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, replicate, asset])))


def _replicate(z, seed, r):
    n_obs, n_assets = z.shape
    shuffled = np.empty_like(z)
    for i in range(n_assets):
        # Generator.permutation is a Fisher-Yates shuffle
        shuffled[:, i] = z[_asset_stream(seed, r, i).permutation(n_obs), i]
    c = _gram_to_correlation(shuffled)
    np.fill_diagonal(c, -np.inf)
    return 1.0 - c.max()


def replicate_statistics(panel, n_shuffles, seed, workers=1):
    """Per-replicate minimum off-diagonal distance of the shuffled panel.

    Shuffling a series permutes its ranks, so each replicate reuses the
    standardized ranks of the observed panel instead of re-ranking.
    """
    if n_shuffles < 1:
        raise DataError("n_shuffles must be at least 1")
    if not 0 <= seed < 2**64:
        raise DataError("seed must be a 64-bit unsigned integer")
    if panel.n_assets < 2:
        raise DataError("need at least 2 assets for an off-diagonal distance")
    z = _standardized_ranks(panel)
    reps = range(n_shuffles)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(lambda r: _replicate(z, seed, r), reps))
    else:
        stats = [_replicate(z, seed, r) for r in reps]
    return np.asarray(stats)


def estimate_noise_threshold(panel, n_shuffles, seed, workers=1):
    """Mean and sample standard deviation of :func:`replicate_statistics`.

    ``std`` uses ``ddof=1`` and is 0 for a single replicate.  The result
    does not depend on ``workers``.
    """
    stats = replicate_statistics(panel, n_shuffles, seed, workers=workers)
    std = float(stats.std(ddof=1)) if stats.size > 1 else 0.0
    return NoiseThreshold(float(stats.mean()), std, int(n_shuffles), int(seed))


def write_matrix(matrix, path):
    """Square CSV with the tickers as header row and first column."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["", *matrix.tickers])
        for t, row in zip(matrix.tickers, matrix.values):
            writer.writerow([t, *(repr(float(x)) for x in row)])
    return path


def read_matrix(path, kind=DistanceMatrix):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    tickers = rows[0][1:]
    if [r[0] for r in rows[1:]] != tickers:
        raise DataError(f"{path}: row labels do not match column labels")
    values = np.array([[float(x) for x in r[1:]] for r in rows[1:]], dtype=np.float64)
    return kind(tickers, values)
