from __future__ import annotations

import itertools

import pytest
from hypothesis import HealthCheck, given, settings

from cavs import MixedGraph, d_separated, enumerate_paths, path_blocked, prune_to_ancestors, relatives, remove_outgoing
from cavs.datasets import worked_example_graph
from cavs.errors import EnumerationLimitError, GraphError, UnknownVariableError, ValidationError
from cavs.graph import VariableId, max_paths_from_env

from conftest import dags, to_graph
from oracles import moral_dsep

SETTINGS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def dfs_path_count(edges, x, y):
    nbr = {}
    for a, b in edges:
        nbr.setdefault(a, set()).add(b)
        nbr.setdefault(b, set()).add(a)

    def walk(v, seen):
        if v == y:
            return 1
        return sum(walk(w, seen | {w}) for w in nbr.get(v, ()) if w not in seen)

    return walk(x, {x})


class TestConstruction:
    def test_cycle_rejected(self):
        with pytest.raises(GraphError, match="cycle"):
            MixedGraph.from_edges("ABC", [("A", "B"), ("B", "C"), ("C", "A")])

    def test_self_loop_and_duplicates(self):
        with pytest.raises(GraphError):
            MixedGraph.from_edges("AB", [("A", "A")])
        with pytest.raises(GraphError):
            MixedGraph.from_edges("AB", [("A", "B"), ("B", "A")])
        with pytest.raises(GraphError):
            MixedGraph.from_edges("AB", [("A", "B")], [("A", "B")])

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            MixedGraph.from_edges("AB", [("A", "Q")])
        g = MixedGraph.from_edges("AB", [("A", "B")])
        with pytest.raises(UnknownVariableError):
            g.index("Q")

    def test_node_handles_are_interchangeable(self):
        g = worked_example_graph()
        i = g.index("X")
        assert g.index(i) == i
        assert g.index(VariableId(i, "X")) == i
        assert g.variable("X") == VariableId(i, "X")


def test_relatives_on_worked_example():
    g = worked_example_graph()
    assert relatives(g, "X", "parents") == {"V3", "V7"}
    assert relatives(g, "X", "children") == {"V2"}
    assert relatives(g, "X", "descendants") == {"V2", "Y"}
    assert "V4" not in relatives(g, "X", "ancestors") | relatives(g, "Y", "ancestors")
    with pytest.raises(ValueError):
        relatives(g, "X", "cousins")


def test_prune_drops_non_ancestor_edges():
    g = worked_example_graph()
    pruned = prune_to_ancestors(g, "X", "Y")
    dropped = set(g.directed_edges()) - set(pruned.directed_edges())
    assert dropped == {("V3", "V4"), ("V5", "V4")}


def test_worked_example_paths_after_surgery():
    g = remove_outgoing(prune_to_ancestors(worked_example_graph(), "X", "Y"), "X")
    got = sorted(p.nodes for p in enumerate_paths(g, "X", "Y"))
    assert got == [("X", "V3", "V6", "V8", "Y"), ("X", "V7", "V8", "Y")]


def test_collider_marks_and_blocking():
    g = MixedGraph.from_edges("ABC", [("A", "B"), ("C", "B")])
    (p,) = enumerate_paths(g, "A", "C")
    assert p.colliders == (True,)
    assert path_blocked(p, [], g)
    assert not path_blocked(p, ["B"], g)
    with pytest.raises(ValidationError):
        path_blocked(p, ["A"], g)


def test_collider_descendant_opens_path():
    g = MixedGraph.from_edges("ABCD", [("A", "B"), ("C", "B"), ("B", "D")])
    assert d_separated(g, "A", "C")
    assert not d_separated(g, "A", "C", ["D"])


def test_path_cap_raises(monkeypatch):
    names = [f"N{k}" for k in range(7)]
    complete = [(a, b) for a, b in itertools.combinations(names, 2)]
    g = MixedGraph.from_edges(names, complete)
    with pytest.raises(EnumerationLimitError):
        enumerate_paths(g, "N0", "N6", cap=10)
    monkeypatch.setenv("CAVS_MAX_PATHS", "5")
    assert max_paths_from_env() == 5
    with pytest.raises(EnumerationLimitError):
        enumerate_paths(g, "N0", "N6")
    monkeypatch.setenv("CAVS_MAX_PATHS", "many")
    with pytest.raises(ValidationError):
        max_paths_from_env()


def test_topological_order_respects_edges():
    g = worked_example_graph()
    pos = {v: k for k, v in enumerate(g.topological_order)}
    assert all(pos[a] < pos[b] for a, b in g.directed)


def test_dot_output_mentions_every_edge():
    g = MixedGraph.from_edges("ABC", [("A", "B")], [("B", "C")])
    dot = g.to_dot()
    assert '"A" -> "B"' in dot and "dir=none" in dot


class TestProperties:
    @SETTINGS
    @given(dags(max_nodes=7))
    def test_dsep_matches_moral_oracle(self, drawn):
        names, edges = drawn
        g = to_graph(names, edges)
        for x, y in itertools.combinations(names, 2):
            rest = [v for v in names if v not in (x, y)]
            for z in (rest[:1], rest[1:3], rest):
                assert d_separated(g, x, y, z) == moral_dsep(edges, x, y, z)

    @SETTINGS
    @given(dags(max_nodes=6))
    def test_paths_are_simple_and_complete(self, drawn):
        names, edges = drawn
        g = to_graph(names, edges)
        und = {frozenset(e) for e in edges}
        x, y = names[0], names[-1]
        paths = enumerate_paths(g, x, y)
        assert len({p.nodes for p in paths}) == len(paths)
        for p in paths:
            assert len(set(p.nodes)) == len(p.nodes)
            assert all(frozenset(s) in und for s in zip(p.nodes, p.nodes[1:]))
        assert len(paths) == dfs_path_count(edges, x, y)

    @SETTINGS
    @given(dags(max_nodes=7))
    def test_ancestor_descendant_duality(self, drawn):
        names, edges = drawn
        g = to_graph(names, edges)
        for a, b in itertools.permutations(names, 2):
            assert (a in relatives(g, b, "ancestors")) == (b in relatives(g, a, "descendants"))

    @SETTINGS
    @given(dags(max_nodes=7))
    def test_surgery_keeps_acyclicity(self, drawn):
        names, edges = drawn
        g = to_graph(names, edges)
        h = remove_outgoing(prune_to_ancestors(g, names[0], names[-1]), names[0])
        assert h.is_dag
        assert set(h.directed) <= set(g.directed)
