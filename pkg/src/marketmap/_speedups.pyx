# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels.  Same contracts as :mod:`marketmap._pure`."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()

ctypedef cnp.int64_t i64


def betweenness(indptr, indices, Py_ssize_t n):
    cdef i64[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef i64[::1] nbr = np.ascontiguousarray(indices, dtype=np.int64)
    cdef double[::1] score = np.zeros(n, dtype=np.float64)
    cdef double[::1] sigma = np.empty(n, dtype=np.float64)
    cdef double[::1] delta = np.empty(n, dtype=np.float64)
    cdef i64[::1] dist = np.empty(n, dtype=np.int64)
    cdef i64[::1] order = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t s, v, w, k, head, tail, pos
    cdef double coeff
    for s in range(n):
        for v in range(n):
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        # order[] doubles as the BFS queue and the visitation stack
        while head < tail:
            v = order[head]
            head += 1
            for k in range(ptr[v], ptr[v + 1]):
                w = nbr[k]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        for pos in range(tail - 1, -1, -1):
            w = order[pos]
            coeff = (1.0 + delta[w]) / sigma[w]
            for k in range(ptr[w], ptr[w + 1]):
                v = nbr[k]
                if dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] * coeff
            if w != s:
                score[w] += delta[w]
    return np.asarray(score)


def closeness_sums(indptr, indices, weights, Py_ssize_t n):
    cdef i64[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef i64[::1] nbr = np.ascontiguousarray(indices, dtype=np.int64)
    cdef double[::1] wt = np.ascontiguousarray(weights, dtype=np.float64)
    cdef double[::1] sums = np.zeros(n, dtype=np.float64)
    cdef i64[::1] reached = np.zeros(n, dtype=np.int64)
    cdef double[::1] dist = np.empty(n, dtype=np.float64)
    cdef char[::1] done = np.empty(n, dtype=np.int8)
    cdef Py_ssize_t s, v, w, k, it, best
    cdef double bestd, nd, total
    cdef i64 count
    # dense O(n^2) Dijkstra per source: graphs here have a few hundred nodes
    for s in range(n):
        for v in range(n):
            dist[v] = INFINITY
            done[v] = 0
        dist[s] = 0.0
        total = 0.0
        count = 0
        for it in range(n):
            best = -1
            bestd = INFINITY
            for v in range(n):
                if not done[v] and dist[v] < bestd:
                    bestd = dist[v]
                    best = v
            if best < 0:
                break
            done[best] = 1
            if best != s:
                total += bestd
                count += 1
            for k in range(ptr[best], ptr[best + 1]):
                w = nbr[k]
                nd = bestd + wt[k]
                if nd < dist[w]:
                    dist[w] = nd
        sums[s] = total
        reached[s] = count
    return np.asarray(sums), np.asarray(reached)


def core_numbers(indptr, indices, Py_ssize_t n):
    """Batagelj-Zaversnik bucket peeling, O(m)."""
    cdef i64[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef i64[::1] nbr = np.ascontiguousarray(indices, dtype=np.int64)
    cdef i64[::1] deg = np.empty(n, dtype=np.int64)
    cdef i64[::1] pos = np.empty(n, dtype=np.int64)
    cdef i64[::1] vert = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t v, u, w, k, i, du, pu, pw, md = 0
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    for v in range(n):
        deg[v] = ptr[v + 1] - ptr[v]
        if deg[v] > md:
            md = deg[v]
    cdef i64[::1] bin_ = np.zeros(md + 1, dtype=np.int64)
    for v in range(n):
        bin_[deg[v]] += 1
    cdef i64 start = 0, num
    for k in range(md + 1):
        num = bin_[k]
        bin_[k] = start
        start += num
    for v in range(n):
        pos[v] = bin_[deg[v]]
        vert[pos[v]] = v
        bin_[deg[v]] += 1
    for k in range(md, 0, -1):
        bin_[k] = bin_[k - 1]
    bin_[0] = 0
    for i in range(n):
        v = vert[i]
        for k in range(ptr[v], ptr[v + 1]):
            u = nbr[k]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bin_[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bin_[du] += 1
                deg[u] -= 1
    return np.asarray(deg)


cdef inline Py_ssize_t _find(i64[::1] parent, Py_ssize_t x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def kruskal(src, dst, Py_ssize_t n):
    cdef i64[::1] a = np.ascontiguousarray(src, dtype=np.int64)
    cdef i64[::1] b = np.ascontiguousarray(dst, dtype=np.int64)
    cdef i64[::1] parent = np.arange(n, dtype=np.int64)
    cdef i64[::1] out = np.empty(max(n - 1, 0), dtype=np.int64)
    cdef Py_ssize_t m = a.shape[0], e, ra, rb, taken = 0
    for e in range(m):
        if taken == n - 1:
            break
        ra = _find(parent, a[e])
        rb = _find(parent, b[e])
        if ra != rb:
            parent[rb] = ra
            out[taken] = e
            taken += 1
    return np.asarray(out)[:taken].copy()
