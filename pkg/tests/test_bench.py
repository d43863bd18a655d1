from __future__ import annotations

import csv
import io
import json
import math

import numpy as np
import pytest

from cavs import MixedGraph, do_effect
from cavs.bench import (
    CSV_COLUMNS,
    ExperimentConfig,
    baseline_minimal_parents,
    baseline_parents,
    choose_pair,
    cosine_error,
    run_experiment,
    run_sweep,
)
from cavs.dataset import dataset_from_columns
from cavs.datasets import three_parents_graph, worked_example_graph
from cavs.errors import UndefinedSimilarityError, ValidationError
from cavs.network import random_dag, random_network

SMALL = dict(n_nodes=10, n_edges=14, cardinality=3, n_graphs=2, n_cpts=2,
             reference_n=2000, subsample_n=200, k_subsamples=3)


def _result(rows):
    return do_effect(dataset_from_columns({"X": [r[0] for r in rows], "Y": [r[1] for r in rows]}), "X", "Y")


def test_cosine_hand_computed():
    # X=0 rows give (1/2, 1/2) vs (1, 0): cos = 1/sqrt(2); X=1 rows agree exactly
    ref = _result([("0", "a"), ("0", "b"), ("1", "a"), ("1", "b")])
    est = _result([("0", "a"), ("1", "a"), ("1", "b"), ("0", "a")])
    assert cosine_error(ref, est) == pytest.approx((1 - 1 / math.sqrt(2)) / 2, abs=1e-15)
    assert cosine_error(ref, ref) == 0.0


def test_cosine_rejects_mismatched_alphabets():
    a = _result([("0", "a"), ("1", "b")])
    b = _result([("0", "a"), ("1", "a"), ("2", "b")])
    with pytest.raises(ValidationError):
        cosine_error(a, b)


def test_cosine_zero_vector():
    a = _result([("0", "a"), ("1", "b")])
    zero = type(a)(a.x_variable, a.y_variable, a.adjustment, a.x_categories, a.y_categories,
                   np.zeros_like(a.per_x), a.diagnostics)
    with pytest.raises(UndefinedSimilarityError):
        cosine_error(a, zero)


def test_baselines():
    g = three_parents_graph()
    assert baseline_parents(g, "X") == ("P1", "P2", "P3")
    assert baseline_minimal_parents(g, "X", "Y") == ("P1", "P2", "P3")
    g = worked_example_graph()
    assert set(baseline_minimal_parents(g, "X", "Y")) == {"V3", "V7"}
    g = MixedGraph.from_edges("AXY", [("A", "X"), ("X", "Y")])
    assert baseline_minimal_parents(g, "X", "Y") == ()
    with pytest.raises(ValidationError):
        baseline_minimal_parents(MixedGraph.from_edges("XY", [("Y", "X")]), "X", "Y")


def test_choose_pair_returns_an_edge():
    g = random_dag(30, 40, 3)
    x, y = choose_pair(g, 1)
    assert (x, y) in g.directed_edges()
    assert choose_pair(g, 1) == (x, y)
    with pytest.raises(ValidationError):
        choose_pair(MixedGraph.from_edges("AB"), 0)


def test_config_validation():
    for bad in (dict(subsample_n=0), dict(subsample_n=20_000), dict(k_subsamples=0),
                dict(methods=("magic",)), dict(mi_source="both"), dict(x="V1")):
        with pytest.raises(ValidationError):
            ExperimentConfig(seed=0, **bad).validate()


def test_report_is_deterministic():
    cfg = ExperimentConfig(seed=5, **SMALL)
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert a.to_csv() == b.to_csv() and a.to_json() == b.to_json()
    assert run_experiment(ExperimentConfig(seed=6, **SMALL)).to_csv() != a.to_csv()


def test_report_layout():
    cfg = ExperimentConfig(seed=5, **SMALL)
    rep = run_experiment(cfg)
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 2 * 2 * 3 * 3 - len([f for f in rep.failures if f["subsample_seed"]])
    doc = json.loads(rep.to_json())
    assert doc["schema_version"] == 1 and set(doc["summary"]) == {"cavs", "minimal_parents", "parents"}
    order = [(r["graph_seed"], r["cpt_seed"]) for r in rep.rows]
    assert order == sorted(order, key=order.index)
    assert "mean" in rep.table()


def test_full_subsample_gives_zero_error():
    cfg = ExperimentConfig(seed=1, **{**SMALL, "subsample_n": 2000, "k_subsamples": 2})
    rep = run_experiment(cfg)
    assert rep.rows and all(r["error"] == 0.0 for r in rep.rows)


def test_fixed_network_and_subsample_mi():
    net = random_network(8, 10, 3, 4)
    x, y = choose_pair(net.graph, 0)
    cfg = ExperimentConfig(seed=2, x=x, y=y, reference_n=1000, subsample_n=100,
                           k_subsamples=2, mi_source="subsample")
    rep = run_experiment(cfg, network=net)
    assert len(rep.networks) == 1 and rep.networks[0]["graph_seed"] is None
    assert len(rep.rows) == 6


def test_sweep_shape():
    cfg = ExperimentConfig(seed=3, **{**SMALL, "n_graphs": 1, "n_cpts": 1, "k_subsamples": 2})
    out = run_sweep(cfg, sizes=(400, 100), repetitions=2)
    assert set(out) == {"cavs", "minimal_parents", "parents"}
    assert out["cavs"].shape == (2, 2) and np.isfinite(out["cavs"]).all()
