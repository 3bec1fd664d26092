"""Pure-Python graph kernels.

Reference implementations of the loops in ``_speedups.pyx``.  Graphs are
passed in CSR form: the neighbours of node ``v`` are
``indices[indptr[v]:indptr[v + 1]]`` and, where relevant, the matching edge
lengths are ``weights[indptr[v]:indptr[v + 1]]``.  Every undirected edge is
stored in both directions.
"""
import heapq
from collections import deque

import numpy as np


def betweenness(indptr, indices, n):
    """Hop-count betweenness summed over ordered pairs (Brandes accumulation)."""
    indptr = np.asarray(indptr).tolist()
    indices = np.asarray(indices).tolist()
    adj = [indices[indptr[v]:indptr[v + 1]] for v in range(n)]
    score = [0.0] * n
    for s in range(n):
        dist = [-1] * n
        sigma = [0.0] * n
        dist[s] = 0
        sigma[s] = 1.0
        order = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in adj[w]:
                if dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] * coeff
            if w != s:
                score[w] += delta[w]
    return np.asarray(score, dtype=np.float64)


def closeness_sums(indptr, indices, weights, n):
    """Sum of weighted geodesic distances from each node to every node it reaches.

    Returns ``(sums, reached)`` where ``reached[i]`` counts the nodes other
    than ``i`` reachable from ``i``.
    """
    indptr = np.asarray(indptr).tolist()
    indices = np.asarray(indices).tolist()
    weights = np.asarray(weights, dtype=np.float64).tolist()
    sums = np.zeros(n, dtype=np.float64)
    reached = np.zeros(n, dtype=np.int64)
    for s in range(n):
        dist = [float("inf")] * n
        done = [False] * n
        dist[s] = 0.0
        heap = [(0.0, s)]
        total = 0.0
        count = 0
        while heap:
            d, v = heapq.heappop(heap)
            if done[v]:
                continue
            done[v] = True
            if v != s:
                total += d
                count += 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                nd = d + weights[k]
                if nd < dist[w]:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))
        sums[s] = total
        reached[s] = count
    return sums, reached


def core_numbers(indptr, indices, n):
    """k-core index of every node by repeated minimum-degree peeling."""
    indptr = np.asarray(indptr).tolist()
    indices = np.asarray(indices).tolist()
    degree = [indptr[v + 1] - indptr[v] for v in range(n)]
    alive = [True] * n
    core = [0] * n
    remaining = n
    k = 0
    while remaining:
        k = max(k, min(degree[v] for v in range(n) if alive[v]))
        stack = [v for v in range(n) if alive[v] and degree[v] <= k]
        while stack:
            v = stack.pop()
            if not alive[v]:
                continue
            alive[v] = False
            remaining -= 1
            core[v] = k
            for w in indices[indptr[v]:indptr[v + 1]]:
                if alive[w]:
                    degree[w] -= 1
                    if degree[w] <= k:
                        stack.append(w)
    return np.asarray(core, dtype=np.int64)


def kruskal(src, dst, n):
    """Positions of the edges Kruskal accepts, scanning ``(src, dst)`` in the given order."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    accepted = []
    for pos, (a, b) in enumerate(zip(np.asarray(src).tolist(), np.asarray(dst).tolist())):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
            accepted.append(pos)
            if len(accepted) == n - 1:
                break
    return np.asarray(accepted, dtype=np.int64)
