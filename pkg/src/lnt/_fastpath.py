"""Hot numeric kernels.

The all-pairs inverse-distance sum dominates the runtime of attack
campaigns (one full set of single-source Dijkstra runs per removal
trial), so it is JIT-compiled with numba when available and falls back
to a heapq implementation with identical semantics otherwise.
"""

from __future__ import annotations

import heapq

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def _inv_dist_sum_csr(indptr, indices, data, n):
    # One Dijkstra per source over the CSR adjacency; accumulates
    # sum(1/d) over ordered connected pairs. Indexed binary heap with
    # decrease-key keeps the heap at most n entries.
    total = 0.0
    dist = np.empty(n, np.float64)
    done = np.empty(n, np.bool_)
    pos = np.empty(n, np.int64)
    heap = np.empty(n, np.int64)
    for s in range(n):
        for i in range(n):
            dist[i] = np.inf
            done[i] = False
            pos[i] = -1
        dist[s] = 0.0
        heap[0] = s
        pos[s] = 0
        hn = 1
        acc = 0.0
        while hn > 0:
            v = heap[0]
            d = dist[v]
            hn -= 1
            last = heap[hn]
            heap[0] = last
            pos[last] = 0
            pos[v] = -1
            i = 0
            while True:
                l = 2 * i + 1
                r = l + 1
                sm = i
                if l < hn and dist[heap[l]] < dist[heap[sm]]:
                    sm = l
                if r < hn and dist[heap[r]] < dist[heap[sm]]:
                    sm = r
                if sm == i:
                    break
                hi = heap[i]
                hs = heap[sm]
                heap[i] = hs
                pos[hs] = i
                heap[sm] = hi
                pos[hi] = sm
                i = sm
            done[v] = True
            if v != s:
                acc += 1.0 / d
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if done[w]:
                    continue
                nd = d + data[e]
                if nd < dist[w]:
                    dist[w] = nd
                    j = pos[w]
                    if j == -1:
                        j = hn
                        heap[j] = w
                        pos[w] = j
                        hn += 1
                    while j > 0:
                        p = (j - 1) // 2
                        hp = heap[p]
                        if dist[hp] <= nd:
                            break
                        heap[j] = hp
                        pos[hp] = j
                        j = p
                    heap[j] = w
                    pos[w] = j
        total += acc
    return total


def _inv_dist_sum_py(indptr, indices, data, n):
    # Reference implementation; same pair set, summation in distance order.
    total = 0.0
    inf = float("inf")
    push, pop = heapq.heappush, heapq.heappop
    for s in range(n):
        dist = [inf] * n
        done = [False] * n
        dist[s] = 0.0
        pq = [(0.0, s)]
        acc = 0.0
        while pq:
            d, v = pop(pq)
            if done[v]:
                continue
            done[v] = True
            if v != s:
                acc += 1.0 / d
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if not done[w]:
                    nd = d + data[e]
                    if nd < dist[w]:
                        dist[w] = nd
                        push(pq, (nd, w))
        total += acc
    return total


def inv_dist_sum(indptr, indices, data, n: int) -> float:
    """Sum of 1/d over ordered pairs with finite shortest-path distance."""
    if n < 2:
        return 0.0
    if _HAVE_NUMBA:
        return float(_inv_dist_sum_csr(indptr, indices, data, n))
    return float(_inv_dist_sum_py(indptr, indices, data, n))
