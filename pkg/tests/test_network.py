from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavs import CptNetwork, MixedGraph, forward_sample, random_network
from cavs.errors import GraphError, ValidationError
from cavs.network import derive_seed, random_cpts, random_dag


def test_derive_seed_is_stable():
    assert derive_seed(7, "graph", 0) == derive_seed(7, "graph", 0)
    seeds = {derive_seed(7, "graph", k) for k in range(100)}
    assert len(seeds) == 100
    assert derive_seed(7, "graph", 0) != derive_seed(8, "graph", 0)
    assert derive_seed(7, "graph", 0) != derive_seed(7, "cpt", 0)


def test_cpt_validation():
    g = MixedGraph.from_edges("AB", [("A", "B")])
    ok = (np.array([[0.5, 0.5]]), np.array([[1.0, 0.0], [0.3, 0.7]]))
    CptNetwork(g, (("0", "1"), ("0", "1")), ok)
    with pytest.raises(ValidationError, match="sums"):
        CptNetwork(g, (("0", "1"), ("0", "1")), (np.array([[0.5, 0.6]]), ok[1]))
    with pytest.raises(ValidationError, match="shape"):
        CptNetwork(g, (("0", "1"), ("0", "1")), (ok[0], ok[1][:1]))
    with pytest.raises(GraphError):
        CptNetwork(MixedGraph.from_edges("AB", [], [("A", "B")]), (("0",), ("0",)), ok)


def test_sampling_converges_to_cpts():
    g = MixedGraph.from_edges("AB", [("A", "B")])
    net = CptNetwork(g, (("0", "1"), ("0", "1", "2")),
                     (np.array([[0.3, 0.7]]), np.array([[0.2, 0.3, 0.5], [0.6, 0.3, 0.1]])))
    d = forward_sample(net, 200_000, 1)
    a, b = d.column("A"), d.column("B")
    assert abs(a.mean() - 0.7) < 0.005
    for k, row in enumerate(net.cpts[1]):
        freq = np.bincount(b[a == k], minlength=3) / (a == k).sum()
        assert np.abs(freq - row).max() < 0.01


def test_sampling_is_deterministic():
    net = random_network(10, 12, 3, seed=2)
    assert forward_sample(net, 100, 9) == forward_sample(net, 100, 9)
    assert forward_sample(net, 100, 9) != forward_sample(net, 100, 10)
    with pytest.raises(ValidationError):
        forward_sample(net, 0, 1)


def test_random_dag_bounds():
    with pytest.raises(ValidationError, match="infeasible"):
        random_dag(4, 7, 0)
    with pytest.raises(ValidationError):
        random_cpts(random_dag(3, 2, 0), 2, 0, mode="beta")
    assert len(random_dag(30, 40, 7).directed) == 40


def test_dirichlet_mode():
    net = random_cpts(random_dag(6, 8, 1), [2, 3, 2, 4, 2, 2], 3, mode="dirichlet")
    assert [len(a) for a in net.alphabets] == [2, 3, 2, 4, 2, 2]


def test_random_network_validity_many_seeds():
    for seed in range(1000):
        net = random_network(8, 10, 3, seed)
        assert net.graph.is_dag and len(net.graph.directed) == 10
        for t in net.cpts:
            assert (t >= 0).all() and np.allclose(t.sum(axis=1), 1.0, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**63), st.data())
def test_random_network_properties(n, seed, data):
    m = data.draw(st.integers(0, n * (n - 1) // 2))
    a, b = random_network(n, m, 2, seed), random_network(n, m, 2, seed)
    assert a == b and a.fingerprint() == b.fingerprint()
    assert len(a.graph.directed) == m
