"""Command-line interface.

    lnt metrics|timeseries|attack|anonymity|sync|powerlaw|synth [flags]

Exit codes: 0 success, 1 usage error, 2 input/data error, 3 computation
failure. Every output embeds tool version, seed and the run
configuration, so a rerun with identical flags yields identical bytes.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .anonymity import topological_anonymity
from .errors import ComputeError, DataError, LntError, SnapshotParseError
from .graph import build_graph, largest_component
from .ingest import (
    DEFAULT_TIMESTAMP,
    generate_synthetic,
    parse_rates,
    parse_snapshot,
    serialize_snapshot,
)
from .metrics import metrics_report
from .powerlaw import fit_with_p_value
from .report import ReportTable, emit
from .robustness import AttackStrategy, random_failure_campaign, run_attack
from .spectral import eigenratio, laplacian_spectrum

METRICS_COLUMNS = [
    "snapshot_date",
    "nodes",
    "channels",
    "median_degree",
    "median_strength",
    "total_cap_btc",
    "total_cap_usd",
    "assort_weighted",
    "assort_unweighted",
    "efficiency_cost",
    "efficiency_hop",
    "transitivity",
    "mst_ratio",
    "density",
    "alpha",
    "ks_stat",
    "p_val",
    "ta",
    "eigenratio",
    "degree_capacity_corr",
]

ATTACK_COLUMNS = [
    "snapshot_date",
    "strategy",
    "mode",
    "measure",
    "budget",
    "delta_eff_pct",
    "lcc_pct",
    "trials",
    "eff_std",
    "lcc_std",
]

ATTACK_FORMATS = {
    "delta_eff_pct": "{:.4f}",
    "lcc_pct": "{:.4f}",
    "eff_std": "{:.4f}",
    "lcc_std": "{:.4f}",
}

STRATEGY_FLAG_TO_KIND = {
    "degree": "degree",
    "strength": "strength",
    "bc-hop": "betweenness_hop",
    "bc-cost": "betweenness_cost",
    "random": "random",
}

SENSE_FLAG_TO_NAME = {"paper": "paper_literal", "flipped": "indistinguishability"}


class _Parser(argparse.ArgumentParser):
    # usage problems are exit code 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None


def _write_output(data: bytes, out: str | None) -> None:
    if out is None:
        sys.stdout.buffer.write(data)
    else:
        Path(out).write_bytes(data)


def _config_string(args, skip=("func", "command", "out")) -> str:
    pairs = []
    for key, value in sorted(vars(args).items()):
        if key in skip or callable(value):
            continue
        pairs.append(f"{key}={'auto' if value is None else value}")
    return " ".join(pairs)


def _base_meta(args) -> dict[str, str]:
    return {
        "tool": f"lnt {__version__}",
        "command": args.command,
        "seed": str(getattr(args, "seed", "")),
        "config": _config_string(args),
    }


def _load_lcc(args, *, rates_required: bool):
    snapshot = parse_snapshot(_read_bytes(args.snapshot))
    if args.rates is not None:
        rate = parse_rates(_read_bytes(args.rates)).lookup(snapshot.snapshot_date)
    elif rates_required:
        raise DataError("this command requires --rates")
    else:
        rate = 1.0
    g, _ = build_graph(snapshot, rate)
    lcc = largest_component(g)
    excluded = (g.n - lcc.n) / g.n
    return snapshot, lcc, excluded


def _metrics_row(lcc, snapshot_date, args) -> dict:
    mr = metrics_report(lcc, snapshot_date)
    row = {
        "snapshot_date": snapshot_date.isoformat(),
        "nodes": mr.n_nodes,
        "channels": mr.n_channels,
        "median_degree": mr.median_degree,
        "median_strength": mr.median_strength,
        "total_cap_btc": mr.total_capacity_btc,
        "total_cap_usd": mr.total_capacity_usd,
        "assort_weighted": mr.assort_weighted,
        "assort_unweighted": mr.assort_unweighted,
        "efficiency_cost": mr.efficiency_cost,
        "efficiency_hop": mr.efficiency_hop,
        "transitivity": mr.transitivity,
        "mst_ratio": mr.mst_ratio,
        "density": mr.density,
        "degree_capacity_corr": mr.degree_capacity_corr,
    }
    degrees = [lcc.degree(v) for v in lcc.nodes()]
    try:
        fit = fit_with_p_value(degrees, x_min=args.xmin, n_boot=args.nboot, seed=args.seed)
        row.update(alpha=fit.alpha, ks_stat=fit.ks_stat, p_val=fit.p_value)
    except ComputeError:
        row.update(alpha=None, ks_stat=None, p_val=None)
    row["ta"] = topological_anonymity(
        lcc, epsilon=args.epsilon, sense=SENSE_FLAG_TO_NAME[args.sense]
    ).ta
    try:
        row["eigenratio"] = eigenratio(lcc, weighted=args.weighted_laplacian).eigenratio
    except ComputeError:
        row["eigenratio"] = None
    return row


# ---------------------------------------------------------------------------
# Commands


def cmd_metrics(args) -> int:
    snapshot, lcc, excluded = _load_lcc(args, rates_required=True)
    row = _metrics_row(lcc, snapshot.snapshot_date, args)
    meta = _base_meta(args)
    meta["lcc_excluded_frac"] = f"{excluded:.6g}"
    table = ReportTable(columns=METRICS_COLUMNS, rows=[row], meta=meta)
    _write_output(emit(table, args.format), args.out)
    return 0


def cmd_timeseries(args) -> int:
    directory = Path(args.snapshots)
    if not directory.is_dir():
        raise DataError(f"not a directory: {args.snapshots}")
    rates = parse_rates(_read_bytes(args.rates))
    parsed = []
    skipped = 0
    for path in sorted(directory.glob("*.json")):
        try:
            parsed.append(parse_snapshot(path.read_bytes()))
        except (SnapshotParseError, OSError) as exc:
            print(f"warning: skipping {path.name}: {exc}", file=sys.stderr)
            skipped += 1
    rows = []
    excluded_parts = []
    for snap in sorted(parsed, key=lambda s: s.timestamp):
        try:
            rate = rates.lookup(snap.snapshot_date)
        except DataError as exc:
            print(f"warning: skipping {snap.snapshot_date}: {exc}", file=sys.stderr)
            skipped += 1
            continue
        g, _ = build_graph(snap, rate)
        lcc = largest_component(g)
        excluded_parts.append(f"{snap.snapshot_date}:{(g.n - lcc.n) / g.n:.6g}")
        rows.append(_metrics_row(lcc, snap.snapshot_date, args))
    if not rows:
        raise DataError(f"no usable snapshots in {args.snapshots}")
    meta = _base_meta(args)
    meta["skipped"] = str(skipped)
    meta["lcc_excluded_frac"] = ",".join(excluded_parts)
    table = ReportTable(columns=METRICS_COLUMNS, rows=rows, meta=meta)
    _write_output(emit(table, args.format), args.out)
    return 0


def cmd_attack(args) -> int:
    snapshot, lcc, excluded = _load_lcc(args, rates_required=True)
    budgets = args.budgets
    kind = STRATEGY_FLAG_TO_KIND[args.strategy]
    if kind == "random":
        report = random_failure_campaign(
            lcc, budgets, trials=args.trials, seed=args.seed, measure_mode=args.measure
        )
    else:
        strategy = AttackStrategy(kind=kind, mode=args.mode)
        report = run_attack(lcc, strategy, budgets, measure_mode=args.measure)
    rows = []
    for r in report.rows:
        rows.append(
            {
                "snapshot_date": snapshot.snapshot_date.isoformat(),
                "strategy": r.strategy,
                "mode": r.mode,
                "measure": r.measure,
                "budget": r.budget,
                "delta_eff_pct": r.delta_eff_pct,
                "lcc_pct": r.lcc_pct,
                "trials": r.trials,
                "eff_std": r.eff_std,
                "lcc_std": r.lcc_std,
            }
        )
    meta = _base_meta(args)
    meta["lcc_excluded_frac"] = f"{excluded:.6g}"
    table = ReportTable(
        columns=ATTACK_COLUMNS, rows=rows, meta=meta, float_formats=dict(ATTACK_FORMATS)
    )
    _write_output(emit(table, args.format), args.out)
    return 0


def cmd_anonymity(args) -> int:
    snapshot, lcc, excluded = _load_lcc(args, rates_required=False)
    result = topological_anonymity(
        lcc, epsilon=args.epsilon, sense=SENSE_FLAG_TO_NAME[args.sense]
    )
    meta = _base_meta(args)
    meta["lcc_excluded_frac"] = f"{excluded:.6g}"
    table = ReportTable(
        columns=["snapshot_date", "nodes", "epsilon", "sense", "ta"],
        rows=[
            {
                "snapshot_date": snapshot.snapshot_date.isoformat(),
                "nodes": lcc.n,
                "epsilon": result.epsilon,
                "sense": result.sense,
                "ta": result.ta,
            }
        ],
        meta=meta,
    )
    _write_output(emit(table, args.format), args.out)
    if args.classes_out:
        detail = ReportTable(
            columns=["degree", "class_size", "cc_variance", "boolean_flag", "penalized"],
            rows=[
                {
                    "degree": c.degree,
                    "class_size": c.class_size,
                    "cc_variance": c.cc_variance,
                    "boolean_flag": c.boolean_flag,
                    "penalized": int(c.penalized),
                }
                for c in result.per_class
            ],
            meta=dict(meta),
        )
        Path(args.classes_out).write_bytes(emit(detail, "csv"))
    return 0


def cmd_sync(args) -> int:
    snapshot, lcc, excluded = _load_lcc(args, rates_required=False)
    result = eigenratio(lcc, weighted=args.weighted_laplacian)
    meta = _base_meta(args)
    meta["lcc_excluded_frac"] = f"{excluded:.6g}"
    table = ReportTable(
        columns=["snapshot_date", "nodes", "weighted", "lambda_2", "lambda_max", "eigenratio"],
        rows=[
            {
                "snapshot_date": snapshot.snapshot_date.isoformat(),
                "nodes": result.n,
                "weighted": int(result.weighted),
                "lambda_2": result.lambda_2,
                "lambda_max": result.lambda_max,
                "eigenratio": result.eigenratio,
            }
        ],
        meta=meta,
    )
    _write_output(emit(table, args.format), args.out)
    if args.spectrum_out:
        spectrum = laplacian_spectrum(lcc, weighted=args.weighted_laplacian)
        detail = ReportTable(
            columns=["eigenvalue"],
            rows=[{"eigenvalue": float(v)} for v in spectrum],
            meta=dict(meta),
        )
        Path(args.spectrum_out).write_bytes(emit(detail, "csv"))
    return 0


def cmd_powerlaw(args) -> int:
    snapshot, lcc, excluded = _load_lcc(args, rates_required=False)
    degrees = [lcc.degree(v) for v in lcc.nodes()]
    fit = fit_with_p_value(degrees, x_min=args.xmin, n_boot=args.nboot, seed=args.seed)
    meta = _base_meta(args)
    meta["lcc_excluded_frac"] = f"{excluded:.6g}"
    table = ReportTable(
        columns=["snapshot_date", "nodes", "n_tail", "x_min", "alpha", "ks_stat", "p_val"],
        rows=[
            {
                "snapshot_date": snapshot.snapshot_date.isoformat(),
                "nodes": lcc.n,
                "n_tail": fit.n_tail,
                "x_min": fit.x_min,
                "alpha": fit.alpha,
                "ks_stat": fit.ks_stat,
                "p_val": fit.p_value,
            }
        ],
        meta=meta,
    )
    _write_output(emit(table, args.format), args.out)
    return 0


def cmd_synth(args) -> int:
    try:
        snapshot = generate_synthetic(
            n_nodes=args.nodes,
            m_attach=args.m,
            capacity_lognormal_mu=args.mu,
            capacity_lognormal_sigma=args.sigma,
            seed=args.seed,
            timestamp=args.timestamp,
        )
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    _write_output(serialize_snapshot(snapshot), args.out)
    return 0


# ---------------------------------------------------------------------------
# Parser


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}")


def _add_io_flags(p: _Parser, snapshot: str = "file") -> None:
    if snapshot == "file":
        p.add_argument("--snapshot", required=True, help="snapshot JSON path")
    else:
        p.add_argument("--snapshots", required=True, help="directory of snapshot JSON files")
    p.add_argument("--format", choices=("csv", "md", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--seed", type=int, default=42)


def _add_analysis_flags(p: _Parser) -> None:
    p.add_argument("--epsilon", type=int, default=4, help="anonymity class-size threshold")
    p.add_argument("--sense", choices=("paper", "flipped"), default="paper")
    p.add_argument("--xmin", type=int, default=None, help="fixed power-law cutoff (default auto)")
    p.add_argument("--nboot", type=int, default=200, help="bootstrap replicates")
    p.add_argument("--weighted-laplacian", action="store_true")


def build_parser() -> _Parser:
    parser = _Parser(prog="lnt", description="Payment-channel network topology analysis")
    parser.add_argument("--version", action="version", version=f"lnt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("metrics", help="full metric row for one snapshot")
    _add_io_flags(p)
    p.add_argument("--rates", required=True, help="date,btc_usd CSV path")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("timeseries", help="metric rows for a directory of snapshots")
    _add_io_flags(p, snapshot="dir")
    p.add_argument("--rates", required=True)
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_timeseries)

    p = sub.add_parser("attack", help="targeted attack or random failure campaign")
    _add_io_flags(p)
    p.add_argument("--rates", required=True)
    p.add_argument("--strategy", choices=tuple(STRATEGY_FLAG_TO_KIND), required=True)
    p.add_argument("--mode", choices=("static", "adaptive"), default="static")
    p.add_argument("--budgets", type=_csv_ints, default=list((1, 2, 5, 10, 25, 50)))
    p.add_argument("--trials", type=int, default=100, help="random strategy only")
    p.add_argument("--measure", choices=("hop", "cost"), default="cost")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("anonymity", help="topological anonymity score")
    _add_io_flags(p)
    p.add_argument("--rates", default=None)
    p.add_argument("--epsilon", type=int, default=4)
    p.add_argument("--sense", choices=("paper", "flipped"), default="paper")
    p.add_argument("--classes-out", default=None, help="per-degree-class detail CSV path")
    p.set_defaults(func=cmd_anonymity)

    p = sub.add_parser("sync", help="Laplacian eigenratio")
    _add_io_flags(p)
    p.add_argument("--rates", default=None)
    p.add_argument("--weighted-laplacian", action="store_true")
    p.add_argument("--spectrum-out", default=None, help="full spectrum CSV path")
    p.set_defaults(func=cmd_sync)

    p = sub.add_parser("powerlaw", help="degree power-law fit")
    _add_io_flags(p)
    p.add_argument("--rates", default=None)
    p.add_argument("--xmin", type=int, default=None)
    p.add_argument("--nboot", type=int, default=200)
    p.set_defaults(func=cmd_powerlaw)

    p = sub.add_parser("synth", help="generate a synthetic snapshot")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--m", type=int, required=True, help="attachments per new node")
    p.add_argument("--mu", type=float, default=13.0, help="log-normal capacity mu (ln sat)")
    p.add_argument("--sigma", type=float, default=1.5, help="log-normal capacity sigma")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--timestamp", default=DEFAULT_TIMESTAMP)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LntError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
