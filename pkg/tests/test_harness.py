import json
import math

import numpy as np
import pytest

from ctdgmetrics.grid import generate_grid
from ctdgmetrics.harness import (
    ALL_METRICS,
    DatasetSpec,
    ExperimentConfig,
    emit_results,
    evaluate_metric,
    load_dataset,
    run_bench,
    run_sample_efficiency,
    run_sensitivity,
)
from ctdgmetrics.perturb import edge_rewire


def small_grid_spec(name="grid-small", side=6, num_events=120):
    return DatasetSpec(name=name, generator={"side": side, "num_events": num_events})


def small_config(**overrides):
    base = dict(
        datasets=[small_grid_spec()],
        metrics=["rp-cosine", "degree-ks", "activity-ks", "feature-js"],
        perturbations=["edge_rewiring", "event_permutation"],
        p_grid=[0.0, 0.5, 1.0],
        seeds=[0, 1],
        embed_dim=16,
        descriptor_dim=16,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError, match="grid points"):
        small_config(p_grid=[0.0]).validate()
    with pytest.raises(ValueError, match="contain 0"):
        small_config(p_grid=[0.1, 0.5]).validate()
    with pytest.raises(ValueError, match="sorted"):
        small_config(p_grid=[0.0, 0.9, 0.5]).validate()
    with pytest.raises(ValueError, match="lie in"):
        small_config(p_grid=[0.0, 1.5]).validate()
    with pytest.raises(ValueError, match="seed"):
        small_config(seeds=[]).validate()
    with pytest.raises(ValueError, match="unknown metric"):
        small_config(metrics=["frobnicate"]).validate()
    with pytest.raises(ValueError, match="unknown perturbation"):
        small_config(perturbations=["scramble"]).validate()
    with pytest.raises(ValueError, match="dataset"):
        small_config(datasets=[]).validate()


def test_config_from_dict_and_files(tmp_path):
    payload = {
        "datasets": [{"name": "g", "generator": {"side": 4, "num_events": 30}}],
        "metrics": ["rp-cosine"],
        "perturbations": ["edge_rewiring"],
        "p_grid": [0.0, 1.0],
        "seeds": 3,
    }
    cfg = ExperimentConfig.from_dict(payload)
    assert cfg.seeds == [0, 1, 2]
    json_path = tmp_path / "cfg.json"
    json_path.write_text(json.dumps(payload))
    assert ExperimentConfig.from_file(json_path).seeds == [0, 1, 2]
    toml_path = tmp_path / "cfg.toml"
    toml_path.write_text(
        'metrics = ["rp-cosine"]\nperturbations = ["edge_rewiring"]\n'
        "p_grid = [0.0, 1.0]\nseeds = 2\n"
        '[[datasets]]\nname = "g"\n[datasets.generator]\nside = 4\nnum_events = 30\n'
    )
    assert ExperimentConfig.from_file(toml_path).seeds == [0, 1]


def test_load_dataset_validation(tmp_path):
    with pytest.raises(ValueError, match="exactly one"):
        load_dataset(DatasetSpec(name="bad"))
    with pytest.raises(ValueError, match="exactly one"):
        load_dataset(DatasetSpec(name="bad", path="x.csv", generator={}))


def test_load_dataset_truncate_and_augment(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text("0,1,0.0\n1,2,1.0\n2,3,2.0\n")
    g = load_dataset(DatasetSpec(name="t", path=str(path), truncate=2))
    assert g.num_events == 2
    assert g.feature_dim == 1  # featureless input gains a constant feature


def test_run_sensitivity_structure_and_flags():
    cfg = small_config()
    table = run_sensitivity(cfg)
    assert len(table.rows) == len(cfg.datasets) * len(cfg.perturbations) * len(cfg.metrics)
    keys = [(r.dataset, r.perturbation, r.metric) for r in table.rows]
    assert len(set(keys)) == len(keys)

    # Topology statistics cannot see feature permutation.
    assert table.row("grid-small", "degree-ks", "event_permutation").no_response
    # Feature metrics cannot see rewiring.
    assert table.row("grid-small", "feature-js", "edge_rewiring").no_response
    # The projection metric responds to both.
    assert not table.row("grid-small", "rp-cosine", "event_permutation").no_response
    assert not table.row("grid-small", "rp-cosine", "edge_rewiring").no_response
    assert table.row("grid-small", "rp-cosine", "edge_rewiring").median > 0.5


def test_run_sensitivity_p_zero_scores_are_zero():
    cfg = small_config()
    table = run_sensitivity(cfg)
    for c in table.curves:
        if c.p == 0.0:
            assert abs(c.score) <= 1e-9


def test_run_sensitivity_deterministic():
    cfg = small_config()
    a = run_sensitivity(cfg)
    b = run_sensitivity(cfg)
    for ra, rb in zip(a.rows, b.rows):
        np.testing.assert_array_equal(ra.scores, rb.scores)


def test_mode_perturbations_run():
    cfg = small_config(
        perturbations=["mode_dropping", "mode_collapse"],
        metrics=["rp-cosine"],
        seeds=[0],
    )
    table = run_sensitivity(cfg)
    for r in table.rows:
        assert len(r.scores) == 1


def test_emit_results_files(tmp_path):
    cfg = small_config(seeds=[0])
    table = run_sensitivity(cfg)
    written = emit_results(table, tmp_path)
    names = {p.name for p in written}
    assert names == {"sensitivity.csv", "sensitivity_curves.csv", "sensitivity.json", "summary.txt"}
    lines = (tmp_path / "sensitivity.csv").read_text().splitlines()
    assert lines[0].startswith("dataset,perturbation,metric")
    assert len(lines) == 1 + len(table.rows)
    summary = (tmp_path / "summary.txt").read_text()
    assert "---" in summary  # no-response cells render like the reference tables
    payload = json.loads((tmp_path / "sensitivity.json").read_text())
    assert len(payload["rows"]) == len(table.rows)


def test_emit_results_empty_table(tmp_path):
    from ctdgmetrics.harness import ResultTable

    written = emit_results(ResultTable(), tmp_path)
    for p in written:
        if p.suffix == ".csv":
            assert len(p.read_text().splitlines()) == 1


def test_emit_results_fields_roundtrip(tmp_path):
    import csv

    cfg = small_config(seeds=[0], metrics=["rp-cosine"], perturbations=["edge_rewiring"])
    table = run_sensitivity(cfg)
    emit_results(table, tmp_path)
    with open(tmp_path / "sensitivity.csv") as fh:
        (row,) = list(csv.DictReader(fh))
    assert row["dataset"] == "grid-small"
    assert row["metric"] == "rp-cosine"
    assert float(row["median_spearman"]) == table.rows[0].median
    assert row["no_response"] == "false"


def test_evaluate_metric_unknown():
    g = generate_grid(side=4, num_events=30)
    with pytest.raises(ValueError, match="unknown metric"):
        evaluate_metric("nope", g, g)


def test_evaluate_metric_identity_is_zero():
    g = generate_grid(side=5, num_events=60)
    for m in ALL_METRICS:
        score = evaluate_metric(m, g, g, random_state=0)
        assert abs(score) <= 1e-9, m


def test_sample_efficiency_discriminates_rewired_grid():
    g = generate_grid(side=8, num_events=400)
    gen = edge_rewire(g, 1.0, seed=0)
    result = run_sample_efficiency(
        g, gen, metrics=["rp-cosine"], seeds=range(6), lambda_schedule=range(3, 11),
        embed_dim=32, descriptor_dim=32,
    )
    assert result["rp-cosine"] is not None
    assert result["rp-cosine"] <= 10


def test_sample_efficiency_identical_control_runs():
    # Control: generated = the reference itself. Often "not reached"; we only
    # require that the search completes and reports something sane.
    g = generate_grid(side=6, num_events=200)
    result = run_sample_efficiency(
        g, g, metrics=["degree-ks"], seeds=range(3), lambda_schedule=range(3, 6)
    )
    assert "degree-ks" in result


def test_sample_efficiency_not_reached_when_data_too_small():
    g = generate_grid(side=4, num_events=10)
    result = run_sample_efficiency(
        g, g, metrics=["rp-cosine"], seeds=range(2), lambda_schedule=range(6, 8),
        embed_dim=8, descriptor_dim=8,
    )
    assert result["rp-cosine"] is None


def test_bench_tiny_dataset_finite():
    spec = DatasetSpec(name="tiny", generator={"side": 3, "num_events": 10})
    rows = run_bench([spec], metrics=["rp-cosine", "degree-ks", "activity-ks"], repeats=2,
                     embed_dim=8, descriptor_dim=8)
    assert len(rows) == 3
    for r in rows:
        assert math.isfinite(r.seconds_per_100_events)
        assert r.seconds_per_100_events > 0
        assert r.num_events == 10


def test_bench_emit(tmp_path):
    from ctdgmetrics.harness import emit_bench

    spec = DatasetSpec(name="tiny", generator={"side": 3, "num_events": 10})
    rows = run_bench([spec], metrics=["activity-ks"], repeats=1)
    paths = emit_bench(rows, tmp_path)
    assert (tmp_path / "bench.csv").read_text().count("\n") == 2


def test_sample_efficiency_emit(tmp_path):
    from ctdgmetrics.harness import emit_sample_efficiency

    paths = emit_sample_efficiency({"rp-cosine": 4, "degree-ks": None}, tmp_path)
    text = (tmp_path / "sample_efficiency.csv").read_text()
    assert "rp-cosine,4" in text
    assert "degree-ks,not_reached" in text


def test_parallel_workers_match_serial():
    cfg = small_config(seeds=[0], metrics=["rp-cosine", "degree-ks"])
    serial = run_sensitivity(cfg)
    cfg_par = small_config(seeds=[0], metrics=["rp-cosine", "degree-ks"], workers=2)
    parallel = run_sensitivity(cfg_par)
    for ra, rb in zip(serial.rows, parallel.rows):
        np.testing.assert_array_equal(ra.scores, rb.scores)
