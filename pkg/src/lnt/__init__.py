"""Topology analysis for payment-channel network snapshots."""

__version__ = "0.1.0"

from .anonymity import TaResult, degree_classes, topological_anonymity
from .errors import LntError
from .graph import (
    ChannelGraph,
    DistanceMatrix,
    Edge,
    SkipTally,
    betweenness,
    build_graph,
    clustering_coeffs,
    connected_components,
    inverse_distance_sum,
    largest_component,
    mst_total_weight,
    sp_distances,
)
from .ingest import (
    RateTable,
    Snapshot,
    fetch_snapshot,
    generate_synthetic,
    parse_rates,
    parse_snapshot,
    serialize_snapshot,
)
from .metrics import (
    MetricsReport,
    assortativity_degree,
    assortativity_weighted,
    degree_capacity_correlation,
    degree_strength_stats,
    density,
    global_efficiency,
    metrics_report,
    mst_ratio,
    transitivity,
)
from .powerlaw import (
    PowerLawFit,
    bootstrap_p,
    fit_alpha,
    fit_alpha_approx,
    fit_power_law,
    fit_with_p_value,
    ks_stat,
    sample_power_law,
    select_xmin,
)
from .robustness import (
    AttackReport,
    AttackStrategy,
    delta_weighted_efficiency,
    lcc_fraction,
    random_failure_campaign,
    rank_targets,
    run_attack,
)
from .spectral import SpectralResult, eigenratio, laplacian_spectrum

__all__ = [
    "__version__",
    "AttackReport",
    "AttackStrategy",
    "ChannelGraph",
    "DistanceMatrix",
    "Edge",
    "LntError",
    "MetricsReport",
    "PowerLawFit",
    "RateTable",
    "SkipTally",
    "Snapshot",
    "SpectralResult",
    "TaResult",
    "assortativity_degree",
    "assortativity_weighted",
    "betweenness",
    "bootstrap_p",
    "build_graph",
    "clustering_coeffs",
    "connected_components",
    "degree_capacity_correlation",
    "degree_classes",
    "degree_strength_stats",
    "delta_weighted_efficiency",
    "density",
    "eigenratio",
    "fetch_snapshot",
    "fit_alpha",
    "fit_alpha_approx",
    "fit_power_law",
    "fit_with_p_value",
    "generate_synthetic",
    "global_efficiency",
    "inverse_distance_sum",
    "ks_stat",
    "laplacian_spectrum",
    "largest_component",
    "lcc_fraction",
    "metrics_report",
    "mst_ratio",
    "mst_total_weight",
    "parse_rates",
    "parse_snapshot",
    "random_failure_campaign",
    "rank_targets",
    "run_attack",
    "sample_power_law",
    "select_xmin",
    "serialize_snapshot",
    "sp_distances",
    "topological_anonymity",
    "transitivity",
]
