"""Targeted-attack and random-failure campaigns.

Damage after removing nodes is measured two ways: the relative drop in
efficiency with the denominator frozen at the intact graph (so losses
are monotone in the removal set) and the surviving fraction of the
largest connected component.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, ComputeError
from .graph import ChannelGraph, betweenness, connected_components, inverse_distance_sum

STRATEGY_KINDS = ("degree", "strength", "betweenness_hop", "betweenness_cost", "random")
MODES = ("static", "adaptive")
DEFAULT_BUDGETS = (1, 2, 5, 10, 25, 50)


@dataclass(frozen=True)
class AttackStrategy:
    kind: str
    mode: str = "static"
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.kind == "random" and self.seed is None:
            raise ValueError("random strategy requires a seed")


@dataclass(frozen=True)
class AttackRow:
    strategy: str
    mode: str
    measure: str
    budget: int
    delta_eff_pct: float
    lcc_pct: float
    trials: int
    eff_std: float | None = None
    lcc_std: float | None = None


@dataclass(frozen=True)
class AttackReport:
    strategy: str
    mode: str
    measure: str
    rows: tuple[AttackRow, ...]


def _scores(g: ChannelGraph, kind: str) -> dict[str, float]:
    if kind == "degree":
        return {v: float(g.degree(v)) for v in g.nodes()}
    if kind == "strength":
        # capacity strength: the attack goes for the richest hubs
        return {v: sum(e.capacity_usd for _, e in g.incident(v)) for v in g.nodes()}
    if kind == "betweenness_hop":
        return betweenness(g, "hop")
    if kind == "betweenness_cost":
        return betweenness(g, "cost")
    raise ValueError(f"no score for strategy {kind!r}")


def rank_targets(g: ChannelGraph, strategy: AttackStrategy) -> list[str]:
    """All nodes ordered by descending score, ties by node id.

    Random strategy is a seeded uniform shuffle of the sorted node list.
    """
    if g.n == 0:
        raise ValueError("cannot rank targets on an empty graph")
    if strategy.kind == "random":
        rng = np.random.default_rng(strategy.seed)
        nodes = list(g.nodes())
        return [nodes[i] for i in rng.permutation(len(nodes))]
    scores = _scores(g, strategy.kind)
    return sorted(scores, key=lambda v: (-scores[v], v))


def _lcc_size(g: ChannelGraph) -> int:
    if g.n == 0:
        return 0
    return len(connected_components(g)[0])


def lcc_fraction(g_before: ChannelGraph, g_after: ChannelGraph) -> float:
    """Surviving share of the largest component, by node count."""
    before = _lcc_size(g_before)
    if before == 0:
        raise ComputeError("intact graph has no nodes")
    return _lcc_size(g_after) / before


def delta_weighted_efficiency(
    g_before: ChannelGraph, g_after: ChannelGraph, mode: str
) -> float:
    """Relative efficiency change with the intact-pair-count denominator.

    Both efficiencies are normalized by n_before*(n_before - 1), so the
    shared denominator cancels and the result is the relative change of
    the inverse-distance sum over surviving pairs. Always <= 0 when
    g_after is an induced subgraph of g_before.
    """
    missing = set(g_after.nodes()) - set(g_before.nodes())
    if missing:
        raise ValueError(f"g_after has nodes unknown to g_before: {sorted(missing)[:3]}")
    num_before = inverse_distance_sum(g_before, mode)
    if num_before == 0.0:
        raise ComputeError("intact graph has zero efficiency")
    num_after = inverse_distance_sum(g_after, mode)
    return num_after / num_before - 1.0


def _removal_sequence(g: ChannelGraph, strategy: AttackStrategy, depth: int) -> list[str]:
    if strategy.mode == "static" or strategy.kind == "random":
        return rank_targets(g, strategy)[:depth]
    removed: list[str] = []
    current = g
    for _ in range(depth):
        target = rank_targets(current, strategy)[0]
        removed.append(target)
        current = current.remove_nodes([target])
    return removed


def _damage(
    g: ChannelGraph,
    removed: list[str],
    measure: str,
    num_before: float,
    lcc_before: int,
) -> tuple[float, float]:
    g_after = g.remove_nodes(removed)
    num_after = inverse_distance_sum(g_after, measure)
    delta = num_after / num_before - 1.0
    lcc = _lcc_size(g_after) / lcc_before
    return delta, lcc


def _check_budgets(g: ChannelGraph, budgets: list[int]) -> list[int]:
    budgets = [int(b) for b in budgets]
    if not budgets:
        raise ValueError("no budgets given")
    if any(b < 0 for b in budgets):
        raise ValueError("budgets must be non-negative")
    if max(budgets) >= g.n:
        raise BudgetError(f"budget {max(budgets)} >= graph size {g.n}")
    return budgets


def run_attack(
    g: ChannelGraph,
    strategy: AttackStrategy,
    budgets: list[int],
    measure_mode: str = "cost",
) -> AttackReport:
    """Remove the top-b targets for each budget and record the damage.

    Static mode ranks once on the intact graph; adaptive mode re-ranks
    after every single removal, so removal sets are nested in both
    modes.
    """
    budgets = _check_budgets(g, budgets)
    num_before = inverse_distance_sum(g, measure_mode)
    if num_before == 0.0:
        raise ComputeError("intact graph has zero efficiency")
    lcc_before = _lcc_size(g)
    sequence = _removal_sequence(g, strategy, max(budgets))
    rows = []
    for b in sorted(set(budgets)):
        delta, lcc = _damage(g, sequence[:b], measure_mode, num_before, lcc_before)
        rows.append(
            AttackRow(
                strategy=strategy.kind,
                mode=strategy.mode,
                measure=measure_mode,
                budget=b,
                delta_eff_pct=delta,
                lcc_pct=lcc,
                trials=1,
            )
        )
    return AttackReport(strategy.kind, strategy.mode, measure_mode, tuple(rows))


def random_failure_campaign(
    g: ChannelGraph,
    budgets: list[int],
    trials: int,
    seed: int,
    measure_mode: str = "cost",
) -> AttackReport:
    """Mean and spread of damage over independent uniform removals.

    Per-draw generators derive from (seed, budget index, trial index),
    so results do not depend on execution order. Reported spreads are
    population standard deviations.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    budgets = _check_budgets(g, budgets)
    num_before = inverse_distance_sum(g, measure_mode)
    if num_before == 0.0:
        raise ComputeError("intact graph has zero efficiency")
    lcc_before = _lcc_size(g)
    nodes = list(g.nodes())
    rows = []
    for bi, b in enumerate(sorted(set(budgets))):
        deltas = np.empty(trials)
        lccs = np.empty(trials)
        for t in range(trials):
            rng = np.random.default_rng([seed, bi, t])
            removed = [nodes[i] for i in rng.permutation(len(nodes))[:b]]
            deltas[t], lccs[t] = _damage(g, removed, measure_mode, num_before, lcc_before)
        rows.append(
            AttackRow(
                strategy="random",
                mode="static",
                measure=measure_mode,
                budget=b,
                delta_eff_pct=float(deltas.mean()),
                lcc_pct=float(lccs.mean()),
                trials=trials,
                eff_std=float(deltas.std()),
                lcc_std=float(lccs.std()),
            )
        )
    return AttackReport("random", "static", measure_mode, tuple(rows))
