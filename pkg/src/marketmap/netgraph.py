"""Minimum spanning trees and threshold asset graphs over a distance matrix."""
from __future__ import annotations

import colorsys
import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional
from xml.etree import ElementTree as ET

import numpy as np

from marketmap import kernels
from marketmap.errors import DataError

__all__ = [
    "Node",
    "Edge",
    "AssetNetwork",
    "build_mst",
    "build_asset_graph",
    "threshold_sweep",
    "export_network",
    "read_network_json",
    "sector_colors",
]

UNKNOWN_SECTOR = "unknown"


@dataclass(frozen=True)
class Node:
    ticker: str
    sector: str = UNKNOWN_SECTOR
    company: Optional[str] = None


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    distance: float
    correlation: float
    random: bool = False


@dataclass(frozen=True)
class AssetNetwork:
    """Undirected weighted graph over assets; edges are stored with ``i < j``.

    ``kind`` is ``"mst"`` or ``"asset-graph"``; asset graphs also carry the
    distance ``threshold`` they were cut at.
    """

    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    kind: str
    threshold: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        n = len(self.nodes)
        seen = set()
        for e in self.edges:
            if not 0 <= e.i < e.j < n:
                raise DataError(f"edge ({e.i}, {e.j}) must satisfy 0 <= i < j < {n}")
            if (e.i, e.j) in seen:
                raise DataError(f"duplicate edge ({e.i}, {e.j})")
            seen.add((e.i, e.j))
            if not 0.0 <= e.distance <= 2.0:
                raise DataError(f"edge ({e.i}, {e.j}) distance {e.distance} outside [0, 2]")
            if e.correlation != 1.0 - e.distance:
                raise DataError(f"edge ({e.i}, {e.j}) correlation != 1 - distance")
        if self.kind not in ("mst", "asset-graph"):
            raise DataError(f"unknown network kind {self.kind!r}")

    @property
    def n(self):
        return len(self.nodes)

    @property
    def tickers(self):
        return tuple(node.ticker for node in self.nodes)

    @property
    def label(self):
        """Short name used in file names: ``mst`` or ``T0.70``."""
        return "mst" if self.kind == "mst" else f"T{self.threshold:.2f}"

    def edge_set(self):
        return {(e.i, e.j) for e in self.edges}

    def csr(self, weighted=False):
        """CSR adjacency ``(indptr, indices, weights)``, neighbours in ascending order."""
        n = self.n
        if self.edges:
            a = np.fromiter((e.i for e in self.edges), np.int64, len(self.edges))
            b = np.fromiter((e.j for e in self.edges), np.int64, len(self.edges))
            w = np.fromiter((e.distance for e in self.edges), np.float64, len(self.edges))
        else:
            a = b = np.zeros(0, np.int64)
            w = np.zeros(0, np.float64)
        src = np.concatenate([a, b])
        dst = np.concatenate([b, a])
        wt = np.concatenate([w, w])
        order = np.lexsort((dst, src))
        src, dst, wt = src[order], dst[order], wt[order]
        indptr = np.zeros(n + 1, np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return indptr, dst, wt

    def adjacency(self):
        """Dense 0/1 adjacency matrix."""
        a = np.zeros((self.n, self.n))
        for e in self.edges:
            a[e.i, e.j] = a[e.j, e.i] = 1.0
        return a

    def total_distance(self):
        return math.fsum(e.distance for e in self.edges)


def _nodes(dist, meta):
    lookup = {m.ticker: m for m in (meta or ())}
    out = []
    for t in dist.tickers:
        m = lookup.get(t)
        out.append(Node(t, m.sector, m.company) if m else Node(t))
    return out


def _edge(dist, i, j, noise_floor=None):
    d = float(dist.values[i, j])
    flag = noise_floor is not None and d > noise_floor
    return Edge(int(i), int(j), d, 1.0 - d, bool(flag))


def build_mst(dist, meta=None, noise=None):
    """Minimum spanning tree of the complete graph weighted by distance.

    Candidate edges are ranked by ``(distance, i, j)``, which makes every
    edge key distinct, so the tree is unique even when distances tie.
    With a ``noise`` threshold, edges longer than its mean are flagged
    as possibly random.
    """
    n = dist.n
    if n < 2:
        raise DataError("an MST needs at least 2 nodes")
    iu, ju = np.triu_indices(n, 1)
    d = dist.values[iu, ju]
    order = np.lexsort((ju, iu, d))
    iu, ju = iu[order], ju[order]
    accepted = kernels.kruskal(iu, ju, n)
    if len(accepted) != n - 1:
        raise DataError("distance matrix does not yield a spanning tree")
    floor = None if noise is None else noise.mean
    pairs = sorted(zip(iu[accepted].tolist(), ju[accepted].tolist()))
    edges = [_edge(dist, i, j, floor) for i, j in pairs]
    return AssetNetwork(_nodes(dist, meta), edges, "mst")


def build_asset_graph(dist, meta=None, threshold=0.5, noise=None):
    """Keep every pair with ``distance <= threshold``; isolated nodes stay in the graph."""
    if not 0.0 <= threshold <= 2.0:
        raise DataError(f"threshold {threshold} outside [0, 2]")
    iu, ju = np.triu_indices(dist.n, 1)
    keep = dist.values[iu, ju] <= threshold
    floor = None if noise is None else noise.mean
    edges = [_edge(dist, i, j, floor) for i, j in zip(iu[keep].tolist(), ju[keep].tolist())]
    return AssetNetwork(_nodes(dist, meta), edges, "asset-graph", float(threshold))


def threshold_sweep(dist, meta=None, thresholds=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7), noise=None):
    thresholds = [float(t) for t in thresholds]
    if any(b < a for a, b in zip(thresholds, thresholds[1:])):
        raise DataError(f"thresholds must be sorted ascending: {thresholds}")
    return [build_asset_graph(dist, meta, t, noise) for t in thresholds]


def sector_colors(sectors):
    """Deterministic hex colour per sector label, evenly spaced in hue."""
    labels = sorted(set(sectors))
    out = {}
    for k, label in enumerate(labels):
        r, g, b = colorsys.hsv_to_rgb(k / max(len(labels), 1), 0.55, 0.95)
        out[label] = "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))
    return out


def _quote(text):
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _to_dot(net):
    colors = sector_colors(node.sector for node in net.nodes)
    lines = [f"graph {_quote(net.label)} {{", "  node [style=filled];"]
    for node in net.nodes:
        lines.append(
            f"  {_quote(node.ticker)} [sector={_quote(node.sector)}, "
            f"fillcolor={_quote(colors[node.sector])}];"
        )
    for e in net.edges:
        attrs = f"distance={e.distance!r}, correlation={e.correlation!r}"
        if e.random:
            attrs += ", style=dashed"
        lines.append(
            f"  {_quote(net.nodes[e.i].ticker)} -- {_quote(net.nodes[e.j].ticker)} [{attrs}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _to_graphml(net):
    ns = "http://graphml.graphdrawing.org/xmlns"
    root = ET.Element("graphml", xmlns=ns)
    keys = [
        ("sector", "node", "string"),
        ("company", "node", "string"),
        ("distance", "edge", "double"),
        ("correlation", "edge", "double"),
        ("random", "edge", "boolean"),
    ]
    for name, target, typ in keys:
        ET.SubElement(root, "key", {"id": name, "for": target, "attr.name": name, "attr.type": typ})
    graph = ET.SubElement(root, "graph", id=net.label, edgedefault="undirected")
    for node in net.nodes:
        el = ET.SubElement(graph, "node", id=node.ticker)
        ET.SubElement(el, "data", key="sector").text = node.sector
        if node.company is not None:
            ET.SubElement(el, "data", key="company").text = node.company
    for k, e in enumerate(net.edges):
        el = ET.SubElement(graph, "edge", id=f"e{k}", source=net.nodes[e.i].ticker,
                           target=net.nodes[e.j].ticker)
        ET.SubElement(el, "data", key="distance").text = repr(e.distance)
        ET.SubElement(el, "data", key="correlation").text = repr(e.correlation)
        ET.SubElement(el, "data", key="random").text = "true" if e.random else "false"
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def _to_json(net):
    doc = {
        "kind": net.kind,
        "threshold": net.threshold,
        "nodes": [{"id": n.ticker, "sector": n.sector, "company": n.company} for n in net.nodes],
        "edges": [
            {
                "source": net.nodes[e.i].ticker,
                "target": net.nodes[e.j].ticker,
                "distance": e.distance,
                "correlation": e.correlation,
                "random": e.random,
            }
            for e in net.edges
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _to_edge_csv(net):
    rows = ["source,target,distance,correlation,random_flag"]
    for e in net.edges:
        rows.append(
            f"{net.nodes[e.i].ticker},{net.nodes[e.j].ticker},"
            f"{e.distance!r},{e.correlation!r},{str(e.random).lower()}"
        )
    return "\n".join(rows) + "\n"


_WRITERS = {"dot": _to_dot, "graphml": _to_graphml, "json": _to_json, "edge-csv": _to_edge_csv}


def export_network(net, format, path):
    """Write ``net`` as ``dot``, ``graphml``, ``json`` or ``edge-csv``.

    DOT output fills nodes by sector colour and draws flagged edges dashed.
    """
    try:
        writer = _WRITERS[format]
    except KeyError:
        raise DataError(f"unknown export format {format!r}; choose from {sorted(_WRITERS)}") from None
    path = Path(path)
    try:
        path.write_text(writer(net), encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc
    return path


def read_network_json(path):
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    nodes = [Node(n["id"], n["sector"], n.get("company")) for n in doc["nodes"]]
    index = {node.ticker: k for k, node in enumerate(nodes)}
    edges = []
    for e in doc["edges"]:
        i, j = sorted((index[e["source"]], index[e["target"]]))
        edges.append(Edge(i, j, float(e["distance"]), float(e["correlation"]), bool(e["random"])))
    return AssetNetwork(nodes, edges, doc["kind"], doc.get("threshold"))
