"""Brute-force reference computations used by the tests.

Nothing here imports the package's algorithms: each function recomputes
its quantity from the definition, trading speed for obviousness.
"""
import itertools
import math
from collections import deque
from fractions import Fraction

import numpy as np


def average_ranks(xs):
    """Rank of each element, ties receiving the mean of the ranks they span."""
    out = []
    for x in xs:
        less = sum(1 for y in xs if y < x)
        equal = sum(1 for y in xs if y == x)
        out.append(less + (equal + 1) / 2.0)
    return out


def pearson(a, b):
    n = len(a)
    ma = math.fsum(a) / n
    mb = math.fsum(b) / n
    cov = math.fsum((x - ma) * (y - mb) for x, y in zip(a, b))
    va = math.fsum((x - ma) ** 2 for x in a)
    vb = math.fsum((y - mb) ** 2 for y in b)
    return cov / math.sqrt(va * vb)


def spearman_matrix(returns):
    """Rank each column, then Pearson every pair."""
    cols = [average_ranks(list(returns[:, i])) for i in range(returns.shape[1])]
    n = len(cols)
    c = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            c[i, j] = c[j, i] = pearson(cols[i], cols[j])
    return c


def prufer_trees(n):
    """All n**(n-2) labelled trees on n nodes as an int array of shape (count, n-1, 2)."""
    if n == 2:
        return np.array([[[0, 1]]])
    trees = []
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for v in seq:
            degree[v] += 1
        edges = []
        for v in seq:
            leaf = min(u for u in range(n) if degree[u] == 1)
            edges.append(sorted((leaf, v)))
            degree[leaf] -= 1
            degree[v] -= 1
        u, w = [x for x in range(n) if degree[x] == 1]
        edges.append([u, w])
        trees.append(edges)
    return np.array(trees)


_TREE_CACHE = {}


def all_spanning_trees(n):
    if n not in _TREE_CACHE:
        _TREE_CACHE[n] = prufer_trees(n)
    return _TREE_CACHE[n]


def min_spanning_weight(dist):
    """Minimum total distance over every spanning tree of the complete graph."""
    n = dist.shape[0]
    trees = all_spanning_trees(n)
    totals = dist[trees[:, :, 0], trees[:, :, 1]].sum(axis=1)
    close = np.flatnonzero(totals <= totals.min() + 1e-9)
    return min(math.fsum(dist[a, b] for a, b in trees[t]) for t in close)


def tie_break_mst(dist):
    """Spanning tree minimizing its sorted list of (distance, i, j) keys."""
    n = dist.shape[0]
    best = None
    for tree in all_spanning_trees(n):
        keys = sorted((dist[a, b], min(a, b), max(a, b)) for a, b in tree)
        if best is None or keys < best:
            best = keys
    return {(i, j) for _, i, j in best}


def bfs_distances(adj, s):
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def all_geodesics(adj, s, t, dist_s):
    """Every shortest path from s to t, by depth-first extension along the BFS layers."""
    if t not in dist_s:
        return []
    paths = []

    def extend(path):
        v = path[-1]
        if v == t:
            paths.append(list(path))
            return
        for w in adj[v]:
            if dist_s.get(w) == dist_s[v] + 1 and len(path) <= dist_s[t]:
                path.append(w)
                extend(path)
                path.pop()

    extend([s])
    return paths


def betweenness_by_enumeration(n, edges):
    """Exact betweenness as Fractions, summed over ordered pairs."""
    adj = {v: [] for v in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    score = [Fraction(0)] * n
    for s in range(n):
        ds = bfs_distances(adj, s)
        for t in range(n):
            if t == s:
                continue
            paths = all_geodesics(adj, s, t, ds)
            if not paths:
                continue
            for k in range(n):
                if k in (s, t):
                    continue
                through = sum(1 for p in paths if k in p)
                score[k] += Fraction(through, len(paths))
    return score


def floyd_warshall(n, weighted_edges):
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for a, b, w in weighted_edges:
        d[a, b] = d[b, a] = min(d[a, b], w)
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return d


def k_core_membership(n, edges, k):
    """Nodes of the maximal subgraph with minimum degree >= k (fixpoint deletion)."""
    alive = set(range(n))
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            deg = sum(1 for a, b in edges if (a == v and b in alive) or (b == v and a in alive))
            if deg < k:
                alive.discard(v)
                changed = True
    return alive


def shell_indices(n, edges):
    shells = [0] * n
    k = 1
    while True:
        core = k_core_membership(n, edges, k)
        if not core:
            return shells
        for v in core:
            shells[v] = k
        k += 1


def tree_betweenness(n, edges):
    """On a tree, B(k) = sum over ordered pairs of branches of T - k of size products."""
    adj = {v: [] for v in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    out = []
    for k in range(n):
        sizes = []
        for start in adj[k]:
            seen = {k, start}
            stack = [start]
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            sizes.append(len(seen) - 1)
        out.append(sum(sizes) ** 2 - sum(s * s for s in sizes))
    return out
