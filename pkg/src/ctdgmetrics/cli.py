"""Command-line interface: dataset generation, scoring, and experiment runs."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from .events import augment_featureless, load_events_csv, write_events_csv, write_manifest
from .grid import generate_grid
from .perturb import edge_rewire


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctdgmetrics",
        description="Similarity metrics and evaluation harness for event-stream dynamic graphs.",
    )
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("gen-grid", help="generate the synthetic grid dataset as event CSV")
    p.add_argument("--side", type=int, default=24)
    p.add_argument("--events", type=int, default=1000)
    p.add_argument("--interval", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--manifest", action="store_true", help="also write <out>.manifest.json")
    p.set_defaults(func=cmd_gen_grid)

    p = sub.add_parser("metric", help="score one pair of event CSVs with one metric")
    p.add_argument("--metric", required=True, choices=sorted(harness.ALL_METRICS))
    p.add_argument("--ref", required=True, help="reference event CSV")
    p.add_argument("--gen", required=True, help="generated event CSV")
    p.add_argument("--truncate", type=int, default=None, help="use only the first N events")
    p.add_argument("--seed", type=int, default=0)
    _metric_options(p)
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("experiment", help="run the sensitivity protocol from a JSON/TOML config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="override the config's output directory")
    p.add_argument("--seed", type=int, default=None, help="override the config's seed list with one seed")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("sample-efficiency", help="minimum events needed to separate two datasets")
    p.add_argument("--ref", required=True, help="reference event CSV")
    p.add_argument("--gen", default=None, help="generated event CSV (default: rewired copy of ref)")
    p.add_argument("--metrics", nargs="+", default=[harness.PROJECTION_METRIC], choices=sorted(harness.ALL_METRICS))
    p.add_argument("--max-events", type=int, default=20)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="base seed for the rewired fallback")
    p.add_argument("--truncate", type=int, default=None)
    p.add_argument("--out", default=None, help="directory for CSV/JSON output")
    _metric_options(p)
    p.set_defaults(func=cmd_sample_efficiency)

    p = sub.add_parser("bench", help="benchmark metric runtime on datasets")
    p.add_argument("--data", nargs="+", required=True, help="event CSV paths, or 'grid' for the default grid")
    p.add_argument("--metrics", nargs="+", default=list(harness.ALL_METRICS), choices=sorted(harness.ALL_METRICS))
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--truncate", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="directory for CSV/JSON output")
    _metric_options(p)
    p.set_defaults(func=cmd_bench)

    return parser


def _metric_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--embed-dim", type=int, default=100)
    p.add_argument("--descriptor-dim", type=int, default=100)
    p.add_argument("--matrix", choices=["structured", "dense"], default="structured")
    p.add_argument("--normalization", choices=["per-graph", "reference"], default="per-graph")
    p.add_argument("--bins", type=int, default=32)
    p.add_argument("--bandwidth", type=float, default=None, help="explicit MMD kernel bandwidth")


def _load(path: str, truncate: int | None):
    g = load_events_csv(path)
    if truncate:
        g = g.truncated(truncate)
    return augment_featureless(g)


def cmd_gen_grid(args) -> int:
    g = generate_grid(side=args.side, num_events=args.events, interval=args.interval, seed=args.seed)
    write_events_csv(g, args.out)
    if args.manifest:
        write_manifest(g, f"{args.out}.manifest.json")
    print(f"wrote {g.num_events} events, {g.num_nodes} nodes to {args.out}")
    return 0


def cmd_metric(args) -> int:
    g_ref = _load(args.ref, args.truncate)
    g_gen = _load(args.gen, args.truncate)
    score = harness.evaluate_metric(
        args.metric,
        g_ref,
        g_gen,
        bins=args.bins,
        mmd_bandwidth=args.bandwidth,
        embed_dim=args.embed_dim,
        descriptor_dim=args.descriptor_dim,
        matrix_kind=args.matrix,
        normalization=args.normalization,
        random_state=args.seed,
    )
    print(repr(score))
    return 0


def cmd_experiment(args) -> int:
    cfg = harness.ExperimentConfig.from_file(args.config)
    if args.out:
        cfg.output_dir = args.out
    if args.seed is not None:
        cfg.seeds = [args.seed]
    table = harness.run_sensitivity(cfg)
    written = harness.emit_results(table, cfg.output_dir)
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_sample_efficiency(args) -> int:
    g_ref = _load(args.ref, args.truncate)
    if args.gen:
        g_gen = _load(args.gen, args.truncate)
    else:
        g_gen = edge_rewire(g_ref, 1.0, seed=args.seed)
    results = harness.run_sample_efficiency(
        g_ref,
        g_gen,
        metrics=args.metrics,
        seeds=range(args.seeds),
        lambda_schedule=range(3, args.max_events + 1),
        bins=args.bins,
        mmd_bandwidth=args.bandwidth,
        embed_dim=args.embed_dim,
        descriptor_dim=args.descriptor_dim,
        matrix_kind=args.matrix,
        normalization=args.normalization,
    )
    for metric in sorted(results):
        lam = results[metric]
        print(f"{metric}: {'not reached' if lam is None else lam}")
    if args.out:
        for path in harness.emit_sample_efficiency(results, args.out):
            print(f"wrote {path}")
    return 0


def cmd_bench(args) -> int:
    specs = []
    for item in args.data:
        if item == "grid":
            specs.append(harness.DatasetSpec(name="grid", generator={}, truncate=args.truncate))
        else:
            specs.append(harness.DatasetSpec(name=Path(item).stem, path=item, truncate=args.truncate))
    rows = harness.run_bench(
        specs,
        metrics=args.metrics,
        repeats=args.repeats,
        seed=args.seed,
        bins=args.bins,
        mmd_bandwidth=args.bandwidth,
        embed_dim=args.embed_dim,
        descriptor_dim=args.descriptor_dim,
        matrix_kind=args.matrix,
        normalization=args.normalization,
    )
    for r in sorted(rows, key=lambda r: (r.dataset, r.seconds_per_100_events)):
        print(f"{r.dataset} {r.metric}: {r.seconds_per_100_events:.4f} s/100 events")
    if args.out:
        for path in harness.emit_bench(rows, args.out):
            print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
