"""Weighted undirected channel graph and the shared graph algorithms.

Every analysis module works on a :class:`ChannelGraph`: a simple
undirected graph whose edges carry the channel capacity in satoshi and
USD plus the routing cost weight, defined as the reciprocal of the USD
capacity. Instances are immutable after construction; all operations
return new graphs or plain values.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from . import _fastpath
from .errors import DisconnectedGraphError, EmptyGraphError

SATOSHI_PER_BTC = 10**8

# Relative tolerance for "same shortest-path length" decisions in cost
# mode. Costs are assumed to be many orders of magnitude above this.
REL_TOL = 1e-12

MODES = ("hop", "cost")


class Edge(NamedTuple):
    capacity_usd: float
    capacity_sat: int
    cost: float


@dataclass(frozen=True)
class SkipTally:
    """Channels dropped or merged while building a graph."""

    self_loops: int = 0
    zero_capacity: int = 0
    parallel_merged: int = 0


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


class ChannelGraph:
    """Simple undirected graph with per-edge capacity and cost weight.

    ``nodes`` may include isolated nodes. Edge keys are unordered node
    pairs; parallel channels must be aggregated before construction.
    """

    def __init__(self, nodes: Iterable[str], edges: Mapping[tuple[str, str], Edge]):
        node_tuple = tuple(sorted(set(nodes)))
        adj: dict[str, dict[str, Edge]] = {v: {} for v in node_tuple}
        canonical: dict[tuple[str, str], Edge] = {}
        for (a, b), e in edges.items():
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in adj or b not in adj:
                raise ValueError(f"edge endpoint not in node set: ({a!r}, {b!r})")
            u, v = (a, b) if a < b else (b, a)
            if (u, v) in canonical:
                raise ValueError(f"duplicate edge ({u!r}, {v!r})")
            if not (e.capacity_usd > 0 and e.capacity_sat > 0):
                raise ValueError(f"non-positive capacity on ({u!r}, {v!r})")
            if e.cost != 1.0 / e.capacity_usd:
                raise ValueError(f"cost != 1/capacity_usd on ({u!r}, {v!r})")
            canonical[(u, v)] = e
            adj[u][v] = e
            adj[v][u] = e
        self._nodes = node_tuple
        self._edges = {k: canonical[k] for k in sorted(canonical)}
        self._adj = {v: dict(sorted(adj[v].items())) for v in node_tuple}
        self._index = {v: i for i, v in enumerate(node_tuple)}
        self._csr_cache: dict[str, tuple] = {}

    # -- basic accessors ------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._nodes)

    @property
    def m(self) -> int:
        return len(self._edges)

    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    def edges(self) -> Iterable[tuple[str, str, Edge]]:
        for (u, v), e in self._edges.items():
            yield u, v, e

    def has_node(self, v: str) -> bool:
        return v in self._adj

    def has_edge(self, u: str, v: str) -> bool:
        return v in self._adj.get(u, {})

    def edge(self, u: str, v: str) -> Edge:
        return self._adj[u][v]

    def degree(self, v: str) -> int:
        return len(self._adj[v])

    def neighbors(self, v: str) -> tuple[str, ...]:
        return tuple(self._adj[v])

    def incident(self, v: str) -> Iterable[tuple[str, Edge]]:
        return self._adj[v].items()

    def total_capacity_sat(self) -> int:
        return sum(e.capacity_sat for e in self._edges.values())

    def total_capacity_usd(self) -> float:
        return float(sum(e.capacity_usd for e in self._edges.values()))

    def __repr__(self) -> str:
        return f"ChannelGraph(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChannelGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    # -- derived graphs ---------------------------------------------------

    def subgraph(self, keep: Iterable[str]) -> "ChannelGraph":
        """Induced subgraph on ``keep``; unknown names are rejected."""
        keep_set = set(keep)
        missing = keep_set - set(self._adj)
        if missing:
            raise ValueError(f"unknown nodes: {sorted(missing)[:3]}")
        edges = {
            (u, v): e
            for (u, v), e in self._edges.items()
            if u in keep_set and v in keep_set
        }
        return ChannelGraph(keep_set, edges)

    def remove_nodes(self, removed: Iterable[str]) -> "ChannelGraph":
        removed_set = set(removed)
        return self.subgraph(set(self._nodes) - removed_set)

    def drop_edge(self, u: str, v: str) -> "ChannelGraph":
        """Same node set with one edge removed."""
        key = (u, v) if u < v else (v, u)
        if key not in self._edges:
            raise ValueError(f"no edge ({u!r}, {v!r})")
        edges = {k: e for k, e in self._edges.items() if k != key}
        return ChannelGraph(self._nodes, edges)

    # -- internal numeric form ---------------------------------------------

    def _csr(self, mode: str):
        """Symmetric CSR adjacency; data is cost or all-ones (hop)."""
        _check_mode(mode)
        cached = self._csr_cache.get(mode)
        if cached is not None:
            return cached
        n = self.n
        idx = self._index
        us = np.empty(2 * self.m, dtype=np.int32)
        vs = np.empty(2 * self.m, dtype=np.int32)
        ws = np.empty(2 * self.m, dtype=np.float64)
        for i, ((a, b), e) in enumerate(self._edges.items()):
            w = 1.0 if mode == "hop" else e.cost
            us[2 * i], vs[2 * i], ws[2 * i] = idx[a], idx[b], w
            us[2 * i + 1], vs[2 * i + 1], ws[2 * i + 1] = idx[b], idx[a], w
        mat = csr_matrix((ws, (us, vs)), shape=(n, n))
        mat.sort_indices()
        cached = (mat.indptr, mat.indices, mat.data, mat)
        self._csr_cache[mode] = cached
        return cached

    def _int_adj(self, mode: str) -> list[list[tuple[int, float]]]:
        _check_mode(mode)
        idx = self._index
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for (a, b), e in self._edges.items():
            w = 1.0 if mode == "hop" else e.cost
            ia, ib = idx[a], idx[b]
            adj[ia].append((ib, w))
            adj[ib].append((ia, w))
        return adj


# ---------------------------------------------------------------------------
# Construction from snapshots


def build_graph(snapshot, btc_usd_rate: float) -> tuple[ChannelGraph, SkipTally]:
    """Build the weighted graph for one snapshot.

    Parallel channels between the same pair are merged by summing their
    satoshi capacity before converting to USD. Self-loop and
    zero-capacity channels are dropped; the tally reports all three
    counts. Every declared node is kept, including isolated ones.
    """
    if not btc_usd_rate > 0:
        raise ValueError(f"btc_usd_rate must be positive, got {btc_usd_rate}")
    sats: dict[tuple[str, str], int] = {}
    self_loops = zero_capacity = parallel_merged = 0
    nodes = set(snapshot.nodes)
    for ch in snapshot.channels:
        if ch.node1_pub == ch.node2_pub:
            self_loops += 1
            continue
        if ch.capacity_sat <= 0:
            zero_capacity += 1
            continue
        u, v = sorted((ch.node1_pub, ch.node2_pub))
        if (u, v) in sats:
            parallel_merged += 1
        sats[(u, v)] = sats.get((u, v), 0) + ch.capacity_sat
        nodes.add(u)
        nodes.add(v)
    if not sats:
        raise EmptyGraphError("snapshot has no usable channels")
    edges = {}
    for (u, v), sat in sats.items():
        usd = sat * (btc_usd_rate / SATOSHI_PER_BTC)
        edges[(u, v)] = Edge(capacity_usd=usd, capacity_sat=sat, cost=1.0 / usd)
    tally = SkipTally(self_loops, zero_capacity, parallel_merged)
    return ChannelGraph(nodes, edges), tally


# ---------------------------------------------------------------------------
# Components


def connected_components(g: ChannelGraph) -> list[tuple[str, ...]]:
    """Components as sorted node tuples, largest first (ties: smallest member)."""
    seen: set[str] = set()
    comps: list[tuple[str, ...]] = []
    for start in g.nodes():
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(tuple(sorted(comp)))
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def largest_component(g: ChannelGraph) -> ChannelGraph:
    """Induced subgraph on the largest component.

    Size ties go to the component containing the lexicographically
    smallest node id.
    """
    if g.n == 0:
        raise EmptyGraphError("graph has no nodes")
    comps = connected_components(g)
    return g.subgraph(comps[0])


def is_connected(g: ChannelGraph) -> bool:
    return g.n > 0 and len(connected_components(g)) == 1


# ---------------------------------------------------------------------------
# Distances


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """All-pairs shortest-path distances; +inf marks disconnected pairs."""

    mode: str
    nodes: tuple[str, ...]
    matrix: np.ndarray

    def __getitem__(self, pair: tuple[str, str]) -> float:
        u, v = pair
        i = self.nodes.index(u)
        j = self.nodes.index(v)
        return float(self.matrix[i, j])


def sp_distances(g: ChannelGraph, mode: str) -> DistanceMatrix:
    """Breadth-first (hop) or Dijkstra (cost) distances between all pairs."""
    _check_mode(mode)
    n = g.n
    if n == 0:
        return DistanceMatrix(mode, (), np.zeros((0, 0)))
    _, _, _, mat = g._csr(mode)
    dist = _csgraph_dijkstra(mat, directed=True, unweighted=(mode == "hop"))
    # shortest-path sums are direction-independent; ulp asymmetry from
    # float accumulation order is resolved toward the smaller value
    dist = np.minimum(dist, dist.T)
    return DistanceMatrix(mode, g.nodes(), dist)


def inverse_distance_sum(g: ChannelGraph, mode: str) -> float:
    """Sum of 1/d over ordered node pairs with a finite distance.

    The shared numerator of global efficiency and attack damage; kept
    separate so removal campaigns can normalize by the intact graph.
    """
    _check_mode(mode)
    indptr, indices, data, _ = g._csr(mode)
    if mode == "hop":
        data = np.ones_like(data)
    return _fastpath.inv_dist_sum(indptr, indices, data, g.n)


# ---------------------------------------------------------------------------
# Betweenness


def betweenness(g: ChannelGraph, mode: str) -> dict[str, float]:
    """Unnormalized shortest-path betweenness.

    Each unordered pair contributes 1 split equally over its shortest
    paths; endpoints never count for their own pairs. In cost mode two
    paths tie when their lengths agree to a relative ``REL_TOL``.
    """
    _check_mode(mode)
    n = g.n
    adj = g._int_adj(mode)
    score = [0.0] * n
    if mode == "hop":
        for s in range(n):
            _brandes_bfs(s, adj, score)
    else:
        for s in range(n):
            _brandes_dijkstra(s, n, adj, score)
    nodes = g.nodes()
    # accumulation visits each unordered pair from both endpoints
    return {nodes[i]: score[i] / 2.0 for i in range(n)}


def _brandes_bfs(s: int, adj: list[list[tuple[int, float]]], score: list[float]) -> None:
    n = len(adj)
    dist = [-1] * n
    sigma = [0.0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    dist[s] = 0
    sigma[s] = 1.0
    order: list[int] = []
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v]
        sv = sigma[v]
        for w, _ in adj[v]:
            if dist[w] < 0:
                dist[w] = dv + 1
                queue.append(w)
            if dist[w] == dv + 1:
                sigma[w] += sv
                preds[w].append(v)
    _accumulate(s, order, preds, sigma, score)


def _brandes_dijkstra(
    s: int, n: int, adj: list[list[tuple[int, float]]], score: list[float]
) -> None:
    inf = float("inf")
    dist = [inf] * n
    sigma = [0.0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    done = [False] * n
    order: list[int] = []
    dist[s] = 0.0
    sigma[s] = 1.0
    pq = [(0.0, s)]
    push, pop = heapq.heappush, heapq.heappop
    while pq:
        d, v = pop(pq)
        if done[v]:
            continue
        done[v] = True
        order.append(v)
        sv = sigma[v]
        for w, c in adj[v]:
            if done[w]:
                continue
            nd = d + c
            dw = dist[w]
            if dw == inf:
                dist[w] = nd
                sigma[w] = sv
                preds[w] = [v]
                push(pq, (nd, w))
            else:
                diff = nd - dw
                if diff < -REL_TOL * dw:
                    dist[w] = nd
                    sigma[w] = sv
                    preds[w] = [v]
                    push(pq, (nd, w))
                elif abs(diff) <= REL_TOL * dw:
                    sigma[w] += sv
                    preds[w].append(v)
    _accumulate(s, order, preds, sigma, score)


def _accumulate(
    s: int,
    order: list[int],
    preds: list[list[int]],
    sigma: list[float],
    score: list[float],
) -> None:
    delta = [0.0] * len(sigma)
    for w in reversed(order):
        coeff = (1.0 + delta[w]) / sigma[w]
        for v in preds[w]:
            delta[v] += sigma[v] * coeff
        if w != s:
            score[w] += delta[w]


# ---------------------------------------------------------------------------
# Clustering


def clustering_coeffs(g: ChannelGraph) -> dict[str, float]:
    """Local clustering coefficient per node; 0 by convention when degree < 2."""
    neigh = {v: set(g.neighbors(v)) for v in g.nodes()}
    out: dict[str, float] = {}
    for v in g.nodes():
        k = len(neigh[v])
        if k < 2:
            out[v] = 0.0
            continue
        links = 0
        nv = neigh[v]
        for u in nv:
            links += len(nv & neigh[u])
        # each triangle edge counted from both endpoints
        triangles = links // 2
        out[v] = triangles / (k * (k - 1) / 2)
    return out


def triangle_count(g: ChannelGraph) -> int:
    """Number of triangles in the graph."""
    neigh = {v: set(g.neighbors(v)) for v in g.nodes()}
    total = 0
    for u, v, _ in g.edges():
        total += len(neigh[u] & neigh[v])
    # each triangle is seen once per edge
    return total // 3


# ---------------------------------------------------------------------------
# Minimum spanning tree


def mst_total_weight(g: ChannelGraph) -> float:
    """Total cost of a minimum spanning tree over cost weights.

    Kruskal over edges sorted by (cost, endpoints); the sorted order
    makes the result independent of edge insertion order.
    """
    if g.n == 0:
        raise EmptyGraphError("graph has no nodes")
    if not is_connected(g):
        raise DisconnectedGraphError("MST requires a connected graph; pass the LCC")
    parent = {v: v for v in g.nodes()}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    total = 0.0
    taken = 0
    for cost, u, v in sorted((e.cost, u, v) for u, v, e in g.edges()):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            total += cost
            taken += 1
            if taken == g.n - 1:
                break
    return total
