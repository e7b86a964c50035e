"""Topological anonymity score over degree classes.

The score rewards degree classes according to a Boolean flag on the
spread of local clustering inside the class and penalizes classes small
enough to re-identify members (fewer than epsilon nodes):

    ta = (sum_i |D_i| * flag_i  -  sum_{|D_j| < epsilon} |D_j|) / n

Two flag senses ship. ``paper_literal`` sets the flag when the in-class
clustering variance is positive, which rewards classes whose members
are distinguishable; ``indistinguishability`` inverts it. The literal
sense is the default; its tension with the anonymity reading is why
both exist.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraphError
from .graph import ChannelGraph, clustering_coeffs

SENSES = ("paper_literal", "indistinguishability")
VAR_TOL = 1e-12


@dataclass(frozen=True)
class ClassRow:
    degree: int
    class_size: int
    cc_variance: float
    boolean_flag: int
    penalized: bool


@dataclass(frozen=True)
class TaResult:
    ta: float
    epsilon: int
    sense: str
    per_class: tuple[ClassRow, ...]


def degree_classes(g: ChannelGraph) -> dict[int, set[str]]:
    """Partition of the nodes by exact degree."""
    if g.n == 0:
        raise EmptyGraphError("graph has no nodes")
    classes: dict[int, set[str]] = {}
    for v in g.nodes():
        classes.setdefault(g.degree(v), set()).add(v)
    return classes


def topological_anonymity(
    g: ChannelGraph, epsilon: int = 4, sense: str = "paper_literal"
) -> TaResult:
    if epsilon < 2:
        raise ValueError(f"epsilon must be >= 2, got {epsilon}")
    if sense not in SENSES:
        raise ValueError(f"sense must be one of {SENSES}, got {sense!r}")
    classes = degree_classes(g)
    ccs = clustering_coeffs(g)
    rows = []
    reward = 0
    penalty = 0
    for deg in sorted(classes):
        members = classes[deg]
        var = float(np.var([ccs[v] for v in members]))
        spread = var > VAR_TOL
        flag = int(spread if sense == "paper_literal" else not spread)
        penalized = len(members) <= epsilon - 1
        reward += len(members) * flag
        penalty += len(members) if penalized else 0
        rows.append(ClassRow(int(deg), len(members), var, flag, penalized))
    ta = (reward - penalty) / g.n
    return TaResult(ta=ta, epsilon=epsilon, sense=sense, per_class=tuple(rows))
