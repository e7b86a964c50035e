"""Graph Laplacian spectrum and the synchronizability eigenratio.

The eigenratio lambda_max / lambda_2 of L = D - A; lower values mean an
easier-to-synchronize topology. The unweighted Laplacian is the default;
the weighted variant uses edge costs as adjacency entries and node
strengths on the diagonal. Dense symmetric eigensolver, adequate at
desk scale (n up to a few thousand).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ComputeError, DisconnectedGraphError
from .graph import ChannelGraph

_ZERO_REL_TOL = 1e-8


@dataclass(frozen=True)
class SpectralResult:
    lambda_2: float
    lambda_max: float
    eigenratio: float
    weighted: bool
    n: int


def laplacian_matrix(g: ChannelGraph, weighted: bool = False) -> np.ndarray:
    n = g.n
    idx = {v: i for i, v in enumerate(g.nodes())}
    lap = np.zeros((n, n))
    for u, v, e in g.edges():
        w = e.cost if weighted else 1.0
        i, j = idx[u], idx[v]
        lap[i, j] -= w
        lap[j, i] -= w
        lap[i, i] += w
        lap[j, j] += w
    return lap


def laplacian_spectrum(g: ChannelGraph, weighted: bool = False) -> np.ndarray:
    """All Laplacian eigenvalues, ascending.

    Raises when the input is disconnected (second eigenvalue
    numerically zero); callers should pass the largest component.
    """
    if g.n == 0:
        raise DisconnectedGraphError("graph has no nodes")
    eig = np.linalg.eigvalsh(laplacian_matrix(g, weighted))
    if g.n >= 2 and eig[1] <= _ZERO_REL_TOL * max(eig[-1], 0.0):
        raise DisconnectedGraphError(
            "graph is disconnected; compute the spectrum on the largest component"
        )
    return eig


def eigenratio(g: ChannelGraph, weighted: bool = False) -> SpectralResult:
    """lambda_max over lambda_2 on a connected graph with >= 3 nodes."""
    if g.n < 3:
        raise ComputeError(f"eigenratio needs >= 3 nodes, got {g.n}")
    eig = laplacian_spectrum(g, weighted)
    lam2 = float(eig[1])
    lam_max = float(eig[-1])
    return SpectralResult(
        lambda_2=lam2,
        lambda_max=lam_max,
        eigenratio=lam_max / lam2,
        weighted=weighted,
        n=g.n,
    )
