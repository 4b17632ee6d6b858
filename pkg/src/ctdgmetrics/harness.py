"""Experiment runner: sensitivity curves, sample efficiency, and benchmarks.

The sensitivity protocol compares a reference graph against perturbed copies
of itself over a grid of perturbation probabilities, scores every configured
metric on each pair, and summarizes each metric's response as the Spearman
rank correlation between probability and score. Snapshot statistics are
evaluated at the reference graph's Nyquist resolution (its minimum positive
inter-event gap). Metrics whose score curve is constant have no defined
correlation and are flagged as giving no response.
"""

from __future__ import annotations

import concurrent.futures
import json
import math
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .descriptors import activity_rate, snapshot_series
from .distances import (
    DEFAULT_BINS,
    feature_ks_distance,
    js_divergence,
    kl_divergence,
    ks_distance,
    mmd_distance,
    spearman,
)
from .embedding import RandomProjectionEmbedder, descriptor_distance
from .events import Ctdg, augment_featureless, load_events_csv
from .grid import generate_grid
from .perturb import (
    DIVERSITY_KINDS,
    PERTURBATION_KINDS,
    ModeAssignment,
    cluster_modes,
    edge_rewire,
    event_permute,
    mode_collapse,
    mode_drop,
    time_perturb,
)
from .snapshots import nyquist_resolution

PROJECTION_METRIC = "rp-cosine"

#: Snapshot-statistic metric keys and the descriptor they evaluate.
SNAPSHOT_METRICS = {
    "degree-ks": ("mean_degree", "ks"),
    "degree-mmd": ("mean_degree", "mmd"),
    "lcc-ks": ("lcc", "ks"),
    "lcc-mmd": ("lcc", "mmd"),
    "nc-ks": ("nc", "ks"),
    "nc-mmd": ("nc", "mmd"),
    "ple-ks": ("ple", "ks"),
    "ple-mmd": ("ple", "mmd"),
}
NODE_METRICS = {
    "activity-ks": "ks",
    "activity-mmd": "mmd",
}
FEATURE_METRICS = ("feature-kl", "feature-js", "feature-ks", "feature-mmd")

ALL_METRICS = (PROJECTION_METRIC, *SNAPSHOT_METRICS, *NODE_METRICS, *FEATURE_METRICS)

TOPOLOGICAL_METRICS = tuple(SNAPSHOT_METRICS)


@dataclass
class DatasetSpec:
    """One dataset: either a CSV path or generator parameters for the grid."""

    name: str
    path: str | None = None
    generator: dict | None = None
    truncate: int | None = None
    augment_featureless: bool = True

    def key(self) -> tuple:
        gen = tuple(sorted(self.generator.items())) if self.generator else None
        return (self.name, self.path, gen, self.truncate, self.augment_featureless)


@dataclass
class ExperimentConfig:
    datasets: list[DatasetSpec]
    metrics: list[str] = field(default_factory=lambda: list(ALL_METRICS))
    perturbations: list[str] = field(default_factory=lambda: list(PERTURBATION_KINDS))
    p_grid: list[float] = field(default_factory=lambda: [round(0.1 * i, 1) for i in range(11)])
    seeds: list[int] = field(default_factory=lambda: list(range(10)))
    embed_dim: int = 100
    descriptor_dim: int = 100
    matrix_kind: str = "structured"
    normalization: str = "per-graph"
    bins: int = DEFAULT_BINS
    mmd_bandwidth: float | None = None
    output_dir: str = "results"
    workers: int = 1

    def validate(self) -> None:
        if not self.datasets:
            raise ValueError("at least one dataset is required")
        if len(self.p_grid) < 2:
            raise ValueError("p_grid needs at least 2 grid points")
        if sorted(self.p_grid) != list(self.p_grid):
            raise ValueError("p_grid must be sorted ascending")
        if any(p < 0 or p > 1 for p in self.p_grid):
            raise ValueError("p_grid values must lie in [0, 1]")
        if self.p_grid[0] != 0.0:
            raise ValueError("p_grid must contain 0")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        for m in self.metrics:
            if m not in ALL_METRICS:
                raise ValueError(f"unknown metric {m!r}; expected one of {ALL_METRICS}")
        for k in self.perturbations:
            if k not in PERTURBATION_KINDS:
                raise ValueError(f"unknown perturbation {k!r}; expected one of {PERTURBATION_KINDS}")

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        d = dict(d)
        datasets = [DatasetSpec(**ds) for ds in d.pop("datasets", [])]
        seeds = d.pop("seeds", 10)
        if isinstance(seeds, int):
            seeds = list(range(seeds))
        cfg = ExperimentConfig(datasets=datasets, seeds=list(seeds), **d)
        return cfg

    @staticmethod
    def from_file(path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        if path.suffix.lower() == ".toml":
            try:
                import tomllib
            except ModuleNotFoundError:
                import tomli as tomllib
            with open(path, "rb") as fh:
                return ExperimentConfig.from_dict(tomllib.load(fh))
        with open(path, "r", encoding="utf-8") as fh:
            return ExperimentConfig.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ResultRow:
    dataset: str
    perturbation: str
    metric: str
    scores: list[float]  # one Spearman value per seed; NaN = no response

    @property
    def responding(self) -> list[float]:
        return [s for s in self.scores if not math.isnan(s)]

    @property
    def no_response(self) -> bool:
        return len(self.responding) == 0

    @property
    def median(self) -> float:
        r = self.responding
        return float(np.median(r)) if r else float("nan")

    @property
    def iqr(self) -> float:
        r = self.responding
        if not r:
            return float("nan")
        q75, q25 = np.percentile(r, [75, 25])
        return float(q75 - q25)


@dataclass
class CurvePoint:
    dataset: str
    perturbation: str
    metric: str
    seed: int
    p: float
    score: float


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)
    curves: list[CurvePoint] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def row(self, dataset: str, metric: str, perturbation: str) -> ResultRow:
        for r in self.rows:
            if (r.dataset, r.metric, r.perturbation) == (dataset, metric, perturbation):
                return r
        raise KeyError((dataset, metric, perturbation))


_DATASET_CACHE: dict[tuple, Ctdg] = {}
_SERIES_CACHE: dict[tuple, np.ndarray] = {}


def load_dataset(spec: DatasetSpec) -> Ctdg:
    """Load or generate one dataset, applying truncation and augmentation."""
    key = spec.key()
    if key in _DATASET_CACHE:
        return _DATASET_CACHE[key]
    if (spec.path is None) == (spec.generator is None):
        raise ValueError(f"dataset {spec.name!r} must set exactly one of path or generator")
    g = load_events_csv(spec.path) if spec.path else generate_grid(**spec.generator)
    if spec.truncate:
        g = g.truncated(spec.truncate)
    if spec.augment_featureless:
        g = augment_featureless(g)
    _DATASET_CACHE[key] = g
    return g


def apply_perturbation(
    kind: str, g: Ctdg, p: float, seed, modes: ModeAssignment | None = None
) -> Ctdg:
    if kind == "edge_rewiring":
        return edge_rewire(g, p, seed)
    if kind == "time_perturbation":
        return time_perturb(g, p, seed)
    if kind == "event_permutation":
        return event_permute(g, p, seed)
    if kind == "mode_dropping":
        return mode_drop(g, modes, p, seed)
    if kind == "mode_collapse":
        return mode_collapse(g, modes, p, seed)
    raise ValueError(f"unknown perturbation {kind!r}")


def evaluate_metric(
    name: str,
    g_ref: Ctdg,
    g_gen: Ctdg,
    *,
    phi: float | None = None,
    bins: int = DEFAULT_BINS,
    mmd_bandwidth: float | None = None,
    embed_dim: int = 100,
    descriptor_dim: int = 100,
    matrix_kind: str = "structured",
    normalization: str = "per-graph",
    random_state: int | None = None,
) -> float:
    """Score one reference/generated pair with one metric.

    Snapshot statistics are evaluated at ``phi`` (defaulting to the reference
    graph's Nyquist resolution) for both graphs. The projection metric fits
    its shared projections on the pair.
    """
    if name == PROJECTION_METRIC:
        emb = RandomProjectionEmbedder(
            embed_dim=embed_dim,
            descriptor_dim=descriptor_dim,
            matrix_kind=matrix_kind,
            normalization=normalization,
            random_state=random_state,
        ).fit([g_ref, g_gen])
        da, db = emb.transform([g_ref, g_gen])
        return descriptor_distance(da, db)
    if name in SNAPSHOT_METRICS:
        descriptor, estimator = SNAPSHOT_METRICS[name]
        if phi is None:
            phi = nyquist_resolution(g_ref)
        a = snapshot_series(g_ref, descriptor, phi).valid_values()
        b = snapshot_series(g_gen, descriptor, phi).valid_values()
        return _estimate(estimator, a, b, mmd_bandwidth)
    if name in NODE_METRICS:
        estimator = NODE_METRICS[name]
        a = activity_rate(g_ref).values
        b = activity_rate(g_gen).values
        return _estimate(estimator, a, b, mmd_bandwidth)
    if name in FEATURE_METRICS:
        a, b = g_ref.features, g_gen.features
        if a.shape[1] == 0 or b.shape[1] == 0:
            raise ValueError("feature metrics require event features")
        if name == "feature-kl":
            return kl_divergence(a, b, bins)
        if name == "feature-js":
            return js_divergence(a, b, bins)
        if name == "feature-ks":
            return feature_ks_distance(a, b)
        return mmd_distance(a, b, mmd_bandwidth)
    raise ValueError(f"unknown metric {name!r}")


def _estimate(estimator: str, a: np.ndarray, b: np.ndarray, bandwidth: float | None) -> float:
    if estimator == "ks":
        return ks_distance(a, b)
    return mmd_distance(a, b, bandwidth)


def run_sensitivity(cfg: ExperimentConfig) -> ResultTable:
    """Full sensitivity sweep over (dataset, perturbation, seed) tasks."""
    cfg.validate()
    tasks = [
        (ds_i, pert_i, seed)
        for ds_i in range(len(cfg.datasets))
        for pert_i in range(len(cfg.perturbations))
        for seed in cfg.seeds
    ]
    if cfg.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_sensitivity_task, [(cfg, *t) for t in tasks]))
    else:
        results = [_sensitivity_task((cfg, *t)) for t in tasks]

    table = ResultTable(config=cfg.to_dict())
    by_key: dict[tuple, list[tuple[int, float]]] = {}
    for (ds_i, pert_i, seed), (rhos, curve_points) in zip(tasks, results):
        ds = cfg.datasets[ds_i].name
        kind = cfg.perturbations[pert_i]
        for metric, rho in rhos.items():
            by_key.setdefault((ds, kind, metric), []).append((seed, rho))
        table.curves.extend(curve_points)
    for ds in cfg.datasets:
        for kind in cfg.perturbations:
            for metric in cfg.metrics:
                per_seed = sorted(by_key.get((ds.name, kind, metric), []))
                table.rows.append(
                    ResultRow(ds.name, kind, metric, [rho for _, rho in per_seed])
                )
    table.curves.sort(key=lambda c: (c.dataset, c.perturbation, c.metric, c.seed, c.p))
    return table


def _sensitivity_task(args) -> tuple[dict[str, float], list[CurvePoint]]:
    cfg, ds_i, pert_i, seed = args
    spec = cfg.datasets[ds_i]
    kind = cfg.perturbations[pert_i]
    g_ref = load_dataset(spec)
    phi = nyquist_resolution(g_ref)

    modes = None
    if kind in DIVERSITY_KINDS:
        modes = _modes_for(cfg, ds_i, seed)

    pert_streams = np.random.SeedSequence((seed, ds_i, pert_i, 1)).spawn(len(cfg.p_grid))
    variants = [
        apply_perturbation(kind, g_ref, p, pert_streams[j], modes)
        for j, p in enumerate(cfg.p_grid)
    ]

    scores: dict[str, list[float]] = {m: [] for m in cfg.metrics}
    if PROJECTION_METRIC in cfg.metrics:
        embed_seed = int(np.random.SeedSequence((seed, ds_i, pert_i, 2)).generate_state(1)[0])
        emb = RandomProjectionEmbedder(
            embed_dim=cfg.embed_dim,
            descriptor_dim=cfg.descriptor_dim,
            matrix_kind=cfg.matrix_kind,
            normalization=cfg.normalization,
            random_state=embed_seed,
        ).fit([g_ref] + variants)
        ref_descriptor = emb.transform([g_ref])[0]
        for v in variants:
            scores[PROJECTION_METRIC].append(
                descriptor_distance(ref_descriptor, emb.transform([v])[0])
            )

    needed = sorted({SNAPSHOT_METRICS[m][0] for m in cfg.metrics if m in SNAPSHOT_METRICS})
    ref_series = {d: _cached_ref_series(spec, g_ref, d, phi) for d in needed}
    need_activity = any(m in NODE_METRICS for m in cfg.metrics)
    ref_activity = activity_rate(g_ref).values if need_activity else None

    for v in variants:
        gen_series = {d: snapshot_series(v, d, phi).valid_values() for d in needed}
        gen_activity = activity_rate(v).values if need_activity else None
        for m in cfg.metrics:
            if m == PROJECTION_METRIC:
                continue
            if m in SNAPSHOT_METRICS:
                d, est = SNAPSHOT_METRICS[m]
                scores[m].append(_estimate(est, ref_series[d], gen_series[d], cfg.mmd_bandwidth))
            elif m in NODE_METRICS:
                scores[m].append(
                    _estimate(NODE_METRICS[m], ref_activity, gen_activity, cfg.mmd_bandwidth)
                )
            else:
                scores[m].append(
                    evaluate_metric(m, g_ref, v, bins=cfg.bins, mmd_bandwidth=cfg.mmd_bandwidth)
                )

    rhos = {m: _curve_response(cfg.p_grid, scores[m]) for m in cfg.metrics}
    curve_points = [
        CurvePoint(spec.name, kind, m, seed, p, scores[m][j])
        for m in cfg.metrics
        for j, p in enumerate(cfg.p_grid)
    ]
    return rhos, curve_points


def _curve_response(p_grid, scores) -> float:
    """Spearman correlation of a sensitivity curve.

    The minimal 2-point grid has no defined rank correlation; score it by the
    direction of the step (+1 / -1), or NaN when the curve is flat.
    """
    if len(scores) == 2:
        if scores[1] == scores[0]:
            return float("nan")
        return 1.0 if scores[1] > scores[0] else -1.0
    return spearman(p_grid, scores)


def _modes_for(cfg: ExperimentConfig, ds_i: int, seed: int) -> ModeAssignment:
    # Mode clustering depends on the dataset and seed only, so both diversity
    # perturbations of one task family share the same assignment.
    spec = cfg.datasets[ds_i]
    g_ref = load_dataset(spec)
    mode_seed = np.random.SeedSequence((seed, ds_i, 0, 0))
    return cluster_modes(
        g_ref,
        embed_dim=cfg.embed_dim,
        matrix_kind=cfg.matrix_kind,
        seed=mode_seed,
    )


def _cached_ref_series(spec: DatasetSpec, g: Ctdg, descriptor: str, phi: float) -> np.ndarray:
    key = (spec.key(), descriptor, phi)
    if key not in _SERIES_CACHE:
        _SERIES_CACHE[key] = snapshot_series(g, descriptor, phi).valid_values()
    return _SERIES_CACHE[key]


def run_sample_efficiency(
    g_real: Ctdg,
    g_gen: Ctdg,
    *,
    metrics=(PROJECTION_METRIC,),
    seeds=range(10),
    lambda_schedule=range(3, 21),
    majority: float = 0.6,
    bins: int = DEFAULT_BINS,
    mmd_bandwidth: float | None = None,
    embed_dim: int = 100,
    descriptor_dim: int = 100,
    matrix_kind: str = "structured",
    normalization: str = "per-graph",
) -> dict[str, int | None]:
    """Smallest subset size at which each metric separates real from generated.

    For each size lambda, two disjoint prefix windows of the real data and
    one prefix window of the generated data are compared; the metric
    discriminates at lambda when distance(real', real'') < distance(real',
    gen') for at least ``majority`` of the seeds. Returns None ("not
    reached") for metrics that never discriminate within the schedule.
    """
    seeds = list(seeds)
    out: dict[str, int | None] = {}
    for metric in metrics:
        found = None
        for lam in lambda_schedule:
            if 2 * lam > g_real.num_events or lam > g_gen.num_events:
                break
            a = g_real.window(0, lam)
            b = g_real.window(lam, 2 * lam)
            c = g_gen.window(0, lam)
            wins = 0
            for seed in seeds:
                try:
                    d_same, d_diff = _two_distances(
                        metric,
                        a,
                        b,
                        c,
                        seed=seed,
                        bins=bins,
                        mmd_bandwidth=mmd_bandwidth,
                        embed_dim=embed_dim,
                        descriptor_dim=descriptor_dim,
                        matrix_kind=matrix_kind,
                        normalization=normalization,
                    )
                except ValueError:
                    continue  # degenerate window; counts as no discrimination
                if d_same < d_diff:
                    wins += 1
            if wins >= math.ceil(majority * len(seeds)):
                found = lam
                break
        out[metric] = found
    return out


def _two_distances(
    metric: str,
    a: Ctdg,
    b: Ctdg,
    c: Ctdg,
    *,
    seed: int,
    bins: int,
    mmd_bandwidth: float | None,
    embed_dim: int,
    descriptor_dim: int,
    matrix_kind: str,
    normalization: str,
) -> tuple[float, float]:
    """distance(a, b) and distance(a, c) under shared metric state."""
    if metric == PROJECTION_METRIC:
        emb = RandomProjectionEmbedder(
            embed_dim=embed_dim,
            descriptor_dim=descriptor_dim,
            matrix_kind=matrix_kind,
            normalization=normalization,
            random_state=seed,
        ).fit([a, b, c])
        da, db, dc = emb.transform([a, b, c])
        return descriptor_distance(da, db), descriptor_distance(da, dc)
    kwargs = dict(bins=bins, mmd_bandwidth=mmd_bandwidth)
    if metric in SNAPSHOT_METRICS:
        kwargs["phi"] = nyquist_resolution(a)
    return (
        evaluate_metric(metric, a, b, **kwargs),
        evaluate_metric(metric, a, c, **kwargs),
    )


@dataclass
class BenchRow:
    dataset: str
    metric: str
    seconds_per_100_events: float
    median_seconds: float
    repeats: int
    num_events: int


def run_bench(
    datasets: list[DatasetSpec],
    metrics=ALL_METRICS,
    *,
    repeats: int = 3,
    seed: int = 0,
    bins: int = DEFAULT_BINS,
    mmd_bandwidth: float | None = None,
    embed_dim: int = 100,
    descriptor_dim: int = 100,
    matrix_kind: str = "structured",
    normalization: str = "per-graph",
) -> list[BenchRow]:
    """Wall-clock cost of each metric, normalized to seconds per 100 events.

    Each metric scores the dataset against an edge-rewired copy of itself;
    the timed region covers descriptor computation (including Nyquist
    discretization for snapshot statistics and projection setup for the
    embedding metric) and the distance estimate, but not file loading or the
    perturbation itself. The median of ``repeats`` runs is reported.
    """
    if repeats < 1:
        raise ValueError("repeats must be positive")
    rows = []
    for spec in datasets:
        g_ref = load_dataset(spec)
        g_gen = edge_rewire(g_ref, 0.5, seed=seed)
        for metric in metrics:
            times = []
            for _ in range(repeats):
                t0 = time.perf_counter()
                evaluate_metric(
                    metric,
                    g_ref,
                    g_gen,
                    bins=bins,
                    mmd_bandwidth=mmd_bandwidth,
                    embed_dim=embed_dim,
                    descriptor_dim=descriptor_dim,
                    matrix_kind=matrix_kind,
                    normalization=normalization,
                    random_state=seed,
                )
                times.append(time.perf_counter() - t0)
            med = float(np.median(times))
            rows.append(
                BenchRow(spec.name, metric, med * 100.0 / g_ref.num_events, med, repeats, g_ref.num_events)
            )
    return rows


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return ""
    return repr(float(x))


def emit_results(table: ResultTable, out_dir: str | Path) -> list[Path]:
    """Write sensitivity results: CSV + JSON plus a human-readable summary."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    path = out / "sensitivity.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("dataset,perturbation,metric,median_spearman,iqr,n_seeds,n_no_response,no_response\n")
        for r in sorted(table.rows, key=lambda r: (r.dataset, r.perturbation, r.metric)):
            n_nr = len(r.scores) - len(r.responding)
            fh.write(
                f"{r.dataset},{r.perturbation},{r.metric},{_fmt(r.median)},{_fmt(r.iqr)},"
                f"{len(r.scores)},{n_nr},{'true' if r.no_response else 'false'}\n"
            )
    written.append(path)

    path = out / "sensitivity_curves.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("dataset,perturbation,metric,seed,p,score\n")
        for c in table.curves:
            fh.write(f"{c.dataset},{c.perturbation},{c.metric},{c.seed},{_fmt(c.p)},{_fmt(c.score)}\n")
    written.append(path)

    path = out / "sensitivity.json"
    with open(path, "w", encoding="utf-8") as fh:
        payload = {
            "config": table.config,
            "rows": [
                {
                    "dataset": r.dataset,
                    "perturbation": r.perturbation,
                    "metric": r.metric,
                    "median_spearman": None if r.no_response else r.median,
                    "iqr": None if r.no_response else r.iqr,
                    "no_response": r.no_response,
                    "scores": [None if math.isnan(s) else s for s in r.scores],
                }
                for r in sorted(table.rows, key=lambda r: (r.dataset, r.perturbation, r.metric))
            ],
        }
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(path)

    path = out / "summary.txt"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_summary(table))
    written.append(path)
    return written


def format_summary(table: ResultTable) -> str:
    """Per-dataset grid of median Spearman scores, metrics by perturbations."""
    datasets = sorted({r.dataset for r in table.rows})
    perturbations = sorted({r.perturbation for r in table.rows})
    metrics = sorted({r.metric for r in table.rows})
    lines = []
    cell = 18
    for ds in datasets:
        lines.append(f"dataset: {ds}")
        lines.append("metric".ljust(cell) + "".join(k.ljust(cell) for k in perturbations))
        for m in metrics:
            cells = []
            for k in perturbations:
                try:
                    r = table.row(ds, m, k)
                except KeyError:
                    cells.append("")
                    continue
                cells.append("---" if r.no_response else f"{r.median:.3f}")
            lines.append(m.ljust(cell) + "".join(c.ljust(cell) for c in cells))
        lines.append("")
    return "\n".join(lines) + ("\n" if lines else "")


def emit_bench(rows: list[BenchRow], out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "bench.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("dataset,metric,seconds_per_100_events,median_seconds,repeats,num_events\n")
        for r in sorted(rows, key=lambda r: (r.dataset, r.metric)):
            fh.write(
                f"{r.dataset},{r.metric},{_fmt(r.seconds_per_100_events)},"
                f"{_fmt(r.median_seconds)},{r.repeats},{r.num_events}\n"
            )
    json_path = out / "bench.json"
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump([asdict(r) for r in sorted(rows, key=lambda r: (r.dataset, r.metric))], fh, indent=2)
        fh.write("\n")
    return [path, json_path]


def emit_sample_efficiency(results: dict[str, int | None], out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sample_efficiency.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("metric,min_events\n")
        for metric in sorted(results):
            lam = results[metric]
            fh.write(f"{metric},{'not_reached' if lam is None else lam}\n")
    json_path = out / "sample_efficiency.json"
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(results, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return [path, json_path]
