"""Node centralities, k-shells, distributions and log-log power-law fits.

All functions take an :class:`~marketmap.netgraph.AssetNetwork` and return
one value per node, in node order.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import connected_components

from marketmap import kernels
from marketmap.errors import ConvergenceError, DataError

__all__ = [
    "CentralityReport",
    "DistributionTable",
    "PowerLawFit",
    "CcdfSeries",
    "node_degree",
    "node_strength",
    "eigenvector_centrality",
    "betweenness_centrality",
    "closeness_centrality",
    "k_shell_decomposition",
    "degree_distribution",
    "ccdf",
    "degree_vs_kshell",
    "centrality_report",
]

MEASURES = ("degree", "strength", "eigenvector", "betweenness", "inv_closeness")


def node_degree(net):
    deg = np.zeros(net.n, dtype=np.int64)
    for e in net.edges:
        deg[e.i] += 1
        deg[e.j] += 1
    return deg


def node_strength(net):
    """Sum of incident edge correlations, each edge counted once per endpoint."""
    s = np.zeros(net.n)
    for e in net.edges:
        s[e.i] += e.correlation
        s[e.j] += e.correlation
    return s


def _power_iterate(a, x, tol, max_iter):
    """Shifted power iteration on one block; returns ``(x, lam)`` or raises."""
    lam = 0.0
    for _ in range(max_iter):
        ax = a @ x
        lam = float(x @ ax)
        if np.linalg.norm(ax - lam * x) <= tol:
            return x, lam
        y = ax + x
        x = y / np.linalg.norm(y)
    raise ConvergenceError(
        f"power iteration did not reach tol={tol} in {max_iter} iterations "
        f"(eigenvalue estimate {lam!r})",
        estimate=lam,
    )


def eigenvector_centrality(net, tol=1e-10, max_iter=10000):
    """Leading eigenvector of the 0/1 adjacency matrix by power iteration.

    Iterates with ``A + I``: the eigenvectors are those of ``A`` but the
    shift removes the ``-lambda`` tie that makes plain power iteration
    oscillate on bipartite graphs such as trees.  The start vector is
    uniform and convergence means ``||A x - lambda x||_2 <= tol`` with
    ``lambda`` the Rayleigh quotient.

    ``A`` is block diagonal over connected components, so each component
    is iterated on its own slice of the start vector.  The result is the
    limit the global iteration tends to: components whose eigenvalue is
    below the largest one get 0, and components tied at the top keep the
    weight the uniform start gives them.

    Returns
    -------
    x : ndarray
        Nonnegative, unit L2 norm.
    lam : float
        The eigenvalue estimate.
    """
    if not net.edges:
        raise DataError("eigenvector centrality is undefined on an edgeless graph")
    a = net.adjacency()
    n_comp, labels = connected_components(a, directed=False)
    blocks = []
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        if idx.size < 2:
            continue
        start = np.full(idx.size, 1.0 / math.sqrt(idx.size))
        vec, lam = _power_iterate(a[np.ix_(idx, idx)], start, tol / 2, max_iter)
        # weight this block would carry in the global iterate: start . eigenvector
        blocks.append((lam, idx, vec, float(start @ vec) * math.sqrt(idx.size)))
    lam_max = max(b[0] for b in blocks)
    x = np.zeros(net.n)
    for lam, idx, vec, weight in blocks:
        if lam_max - lam <= tol:
            x[idx] = weight * vec
    x /= np.linalg.norm(x)
    lam = float(x @ (a @ x))
    residual = float(np.linalg.norm(a @ x - lam * x))
    if residual > tol:
        raise ConvergenceError(
            f"combined eigenvector residual {residual:.3g} exceeds tol={tol}", estimate=lam)
    return x, lam


def betweenness_centrality(net):
    """Hop-count betweenness summed over ordered pairs ``(i, j)``, unnormalized."""
    indptr, indices, _ = net.csr()
    return kernels.betweenness(indptr, indices, net.n)


def closeness_centrality(net, mode="sum"):
    """Distance-weighted closeness.

    ``mode="sum"`` gives ``l_i = sum_j d(i, j)`` over the nodes ``i`` reaches;
    ``mode="mean"`` divides that by the node count ``n``.  Returns
    ``(l, inverse)`` with ``inverse = 1 / l``; isolated nodes get
    ``l = nan`` and ``inverse = 0``.
    """
    if mode not in ("sum", "mean"):
        raise DataError(f"closeness mode must be 'sum' or 'mean', got {mode!r}")
    indptr, indices, weights = net.csr()
    sums, reached = kernels.closeness_sums(indptr, indices, weights, net.n)
    length = sums if mode == "sum" else sums / net.n
    length = np.where(reached > 0, length, np.nan)
    with np.errstate(divide="ignore"):
        inverse = np.where(reached > 0, 1.0 / length, 0.0)
    return length, inverse


def k_shell_decomposition(net):
    indptr, indices, _ = net.csr()
    return np.asarray(kernels.core_numbers(indptr, indices, net.n), dtype=np.int64)


def degree_vs_kshell(net):
    """``(kshell, degree)`` per node, sorted by shell then node index."""
    shells = k_shell_decomposition(net)
    deg = node_degree(net)
    order = sorted(range(net.n), key=lambda v: (shells[v], v))
    return [(int(shells[v]), int(deg[v])) for v in order]


@dataclass(frozen=True)
class DistributionTable:
    lower_edges: tuple[int, ...]
    frequencies: tuple[int, ...]
    bin_width: int

    def as_dict(self):
        return dict(zip(self.lower_edges, self.frequencies))


def degree_distribution(degrees, bin_width=1):
    """Histogram over bins ``[b, b + bin_width)`` from the lowest occupied bin to the highest.

    Empty bins in between are kept, as in a frequency table.
    """
    if bin_width < 1:
        raise DataError("bin_width must be >= 1")
    degrees = np.asarray(degrees, dtype=np.int64)
    if degrees.size == 0:
        return DistributionTable((), (), bin_width)
    bins = degrees // bin_width
    lo, hi = int(bins.min()), int(bins.max())
    counts = np.bincount(bins - lo, minlength=hi - lo + 1)
    edges = tuple(int(b * bin_width) for b in range(lo, hi + 1))
    return DistributionTable(edges, tuple(int(c) for c in counts), bin_width)


@dataclass(frozen=True)
class PowerLawFit:
    """``P(X >= x) ~ c * x**(-alpha)`` fitted on ``x`` in ``[x_min, x_max]``."""

    alpha: float
    c: float
    x_min: float
    x_max: float
    n_points: int


@dataclass(frozen=True)
class CcdfSeries:
    values: np.ndarray
    probabilities: np.ndarray
    fit: Optional[PowerLawFit] = None

    def write_tsv(self, path):
        path = Path(path)
        with path.open("w", encoding="utf-8") as fh:
            fh.write("value\tccdf\n")
            for x, p in zip(self.values, self.probabilities):
                fh.write(f"{float(x)!r}\t{float(p)!r}\n")
        return path


def ccdf(values, fit=None):
    """Empirical ``P(X >= x)`` at each distinct value, with an optional power-law fit.

    ``fit`` is a quantile pair ``(q_lo, q_hi)`` (``True`` means
    ``(0.1, 0.9)``); the fit is ordinary least squares of ``log10 P``
    against ``log10 x`` over the strictly positive distinct values lying
    between those quantiles of the positive data.
    """
    x = np.asarray(values, dtype=np.float64)
    x = x[~np.isnan(x)]
    if x.size == 0:
        raise DataError("ccdf of an empty sample")
    if np.any(x < 0):
        raise DataError("ccdf expects nonnegative values")
    xs = np.sort(x)
    distinct, first = np.unique(xs, return_index=True)
    prob = (xs.size - first) / xs.size
    result = None
    if fit is not None and fit is not False:
        q_lo, q_hi = (0.1, 0.9) if fit is True else fit
        positive = xs[xs > 0]
        if positive.size < 2:
            raise DataError("power-law fit needs at least 2 positive values")
        lo, hi = np.quantile(positive, [q_lo, q_hi])
        sel = (distinct > 0) & (distinct >= lo) & (distinct <= hi)
        if sel.sum() < 2:
            raise DataError("fewer than 2 distinct values inside the fit range")
        slope, intercept = np.polyfit(np.log10(distinct[sel]), np.log10(prob[sel]), 1)
        result = PowerLawFit(float(-slope), float(10.0**intercept), float(lo), float(hi),
                             int(sel.sum()))
    return CcdfSeries(distinct, prob, result)


@dataclass(frozen=True)
class CentralityReport:
    tickers: tuple[str, ...]
    sectors: tuple[str, ...]
    degree: np.ndarray
    strength: np.ndarray
    eigenvector: np.ndarray
    betweenness: np.ndarray
    closeness_len: np.ndarray
    inv_closeness: np.ndarray
    kshell: np.ndarray
    eigenvalue: float = float("nan")

    COLUMNS = ("ticker", "sector", "degree", "strength", "eigenvector", "betweenness",
               "closeness_len", "inv_closeness", "kshell")

    def measure(self, name):
        return np.asarray(getattr(self, name))

    def top(self, name, k=4):
        """The ``k`` largest nodes for a measure, ties broken by node order."""
        vals = self.measure(name)
        order = sorted(range(len(vals)), key=lambda v: (-vals[v], v))[:k]
        return [(self.tickers[v], vals[v].item()) for v in order]

    def write_csv(self, path):
        path = Path(path)
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(self.COLUMNS)
            for v in range(len(self.tickers)):
                writer.writerow([
                    self.tickers[v], self.sectors[v], int(self.degree[v]),
                    repr(float(self.strength[v])), repr(float(self.eigenvector[v])),
                    repr(float(self.betweenness[v])), repr(float(self.closeness_len[v])),
                    repr(float(self.inv_closeness[v])), int(self.kshell[v]),
                ])
        return path


def centrality_report(net, closeness_mode="sum", tol=1e-10, max_iter=10000):
    """Every per-node measure for ``net``.  Edgeless graphs get zero eigenvector scores."""
    if net.edges:
        eig, lam = eigenvector_centrality(net, tol=tol, max_iter=max_iter)
    else:
        eig, lam = np.zeros(net.n), float("nan")
    length, inverse = closeness_centrality(net, closeness_mode)
    return CentralityReport(
        tickers=net.tickers,
        sectors=tuple(node.sector for node in net.nodes),
        degree=node_degree(net),
        strength=node_strength(net),
        eigenvector=eig,
        betweenness=betweenness_centrality(net),
        closeness_len=length,
        inv_closeness=inverse,
        kshell=k_shell_decomposition(net),
        eigenvalue=lam,
    )
