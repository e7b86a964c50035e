"""Descriptive metric suite for one snapshot graph.

All weighted quantities use the edge cost (reciprocal USD capacity):
node strength is the sum of incident costs, the weighted assortativity
weights endpoint-degree pairs by cost, and cost-mode efficiency is the
mean inverse cost-distance, reported unnormalized (USD).
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import DisconnectedGraphError, UndefinedMetricError
from .graph import (
    SATOSHI_PER_BTC,
    ChannelGraph,
    inverse_distance_sum,
    is_connected,
    mst_total_weight,
    triangle_count,
)


@dataclass(frozen=True)
class MetricsReport:
    """One row of the per-snapshot metric table. None marks undefined values."""

    snapshot_date: date
    n_nodes: int
    n_channels: int
    median_degree: float
    median_strength: float
    total_capacity_btc: float
    total_capacity_usd: float
    assort_weighted: float | None
    assort_unweighted: float | None
    efficiency_cost: float
    efficiency_hop: float
    transitivity: float | None
    mst_ratio: float
    density: float
    degree_capacity_corr: float | None


def degree_strength_stats(g: ChannelGraph) -> dict[str, float]:
    """Median node degree and median cost-strength."""
    if g.n == 0:
        raise UndefinedMetricError("empty graph")
    degrees = [g.degree(v) for v in g.nodes()]
    strengths = [sum(e.cost for _, e in g.incident(v)) for v in g.nodes()]
    return {
        "median_degree": float(statistics.median(degrees)),
        "median_strength": float(statistics.median(strengths)),
    }


def _edge_endpoint_arrays(g: ChannelGraph):
    deg = {v: g.degree(v) for v in g.nodes()}
    j = np.array([deg[u] for u, _, _ in g.edges()], dtype=float)
    k = np.array([deg[v] for _, v, _ in g.edges()], dtype=float)
    w = np.array([e.cost for _, _, e in g.edges()], dtype=float)
    return j, k, w


def _endpoint_degree_corr(j: np.ndarray, k: np.ndarray, w: np.ndarray) -> float:
    # Weighted Pearson correlation of the (symmetrized) endpoint-degree
    # pairs; with unit weights this is exactly the classic edge-wise
    # degree assortativity with each edge counted in both orientations.
    if j.size == 0:
        raise UndefinedMetricError("graph has no edges")
    if np.min(np.minimum(j, k)) == np.max(np.maximum(j, k)):
        raise UndefinedMetricError("endpoint degrees have zero variance")
    h = w.sum()
    mean = (w * (j + k) / 2.0).sum() / h
    num = (w * j * k).sum() / h - mean * mean
    den = (w * (j * j + k * k) / 2.0).sum() / h - mean * mean
    return float(num / den)


def assortativity_degree(g: ChannelGraph) -> float:
    """Degree assortativity: Pearson correlation over edge endpoint degrees."""
    j, k, w = _edge_endpoint_arrays(g)
    return _endpoint_degree_corr(j, k, np.ones_like(w))


def assortativity_weighted(g: ChannelGraph) -> float:
    """Degree assortativity with each endpoint pair weighted by edge cost."""
    j, k, w = _edge_endpoint_arrays(g)
    return _endpoint_degree_corr(j, k, w)


def global_efficiency(g: ChannelGraph, mode: str) -> float:
    """Mean inverse shortest-path distance over ordered pairs.

    Hop mode lies in [0, 1] and hits 1 only on a complete graph; cost
    mode is the raw mean inverse cost-distance.
    """
    if g.n < 2:
        raise UndefinedMetricError("efficiency needs at least 2 nodes")
    return inverse_distance_sum(g, mode) / (g.n * (g.n - 1))


def transitivity(g: ChannelGraph) -> float:
    """Global transitivity: 3 * triangles / connected triples."""
    triples = sum(d * (d - 1) // 2 for d in (g.degree(v) for v in g.nodes()))
    if triples == 0:
        raise UndefinedMetricError("graph has no connected triples")
    return 3.0 * triangle_count(g) / triples


def density(g: ChannelGraph) -> float:
    if g.n < 2:
        raise UndefinedMetricError("density needs at least 2 nodes")
    return 2.0 * g.m / (g.n * (g.n - 1))


def mst_ratio(g: ChannelGraph) -> float:
    """MST cost over total edge cost; 1 exactly when the graph is a tree."""
    mst = mst_total_weight(g)
    # same summation order as Kruskal so a tree yields exactly 1.0
    total = sum(c for c, _, _ in sorted((e.cost, u, v) for u, v, e in g.edges()))
    return mst / total


def degree_capacity_correlation(g: ChannelGraph) -> float:
    """Pearson correlation between node degree and mean channel capacity (USD)."""
    nodes = [v for v in g.nodes() if g.degree(v) > 0]
    if len(nodes) < 2:
        raise UndefinedMetricError("need at least 2 non-isolated nodes")
    deg = np.array([g.degree(v) for v in nodes], dtype=float)
    avg_cap = np.array(
        [sum(e.capacity_usd for _, e in g.incident(v)) / g.degree(v) for v in nodes]
    )
    if deg.min() == deg.max():
        raise UndefinedMetricError("degrees have zero variance")
    if avg_cap.min() == avg_cap.max():
        raise UndefinedMetricError("average capacities have zero variance")
    dx = deg - deg.mean()
    dy = avg_cap - avg_cap.mean()
    return float((dx * dy).sum() / np.sqrt((dx * dx).sum() * (dy * dy).sum()))


def metrics_report(
    g: ChannelGraph, snapshot_date: date, btc_usd_rate: float | None = None
) -> MetricsReport:
    """Assemble the full metric row for a connected snapshot graph.

    Metrics that are undefined on this graph (zero variance, no
    triples) come back as None, never as silent zeros. ``btc_usd_rate``
    is accepted for symmetry with the build step; capacities on the
    graph already carry the conversion.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("metrics_report expects the largest component")
    stats = degree_strength_stats(g)

    def _maybe(fn, *args):
        try:
            return fn(*args)
        except UndefinedMetricError:
            return None

    return MetricsReport(
        snapshot_date=snapshot_date,
        n_nodes=g.n,
        n_channels=g.m,
        median_degree=stats["median_degree"],
        median_strength=stats["median_strength"],
        total_capacity_btc=g.total_capacity_sat() / SATOSHI_PER_BTC,
        total_capacity_usd=g.total_capacity_usd(),
        assort_weighted=_maybe(assortativity_weighted, g),
        assort_unweighted=_maybe(assortativity_degree, g),
        efficiency_cost=global_efficiency(g, "cost"),
        efficiency_hop=global_efficiency(g, "hop"),
        transitivity=_maybe(transitivity, g),
        mst_ratio=mst_ratio(g),
        density=density(g),
        degree_capacity_corr=_maybe(degree_capacity_correlation, g),
    )
