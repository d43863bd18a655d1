from __future__ import annotations

import pytest
from hypothesis import strategies as st

from cavs import MixedGraph

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record_acceptance():
    def record(number, ok, detail):
        ACCEPTANCE[number] = (bool(ok), detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")


@st.composite
def dags(draw, min_nodes=2, max_nodes=8):
    """(names, edges) for a random DAG; node i may only point to j > i after a shuffle."""
    n = draw(st.integers(min_nodes, max_nodes))
    names = [f"N{k}" for k in range(n)]
    order = draw(st.permutations(range(n)))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                edges.append((names[order[i]], names[order[j]]))
    return names, edges


def to_graph(names, edges) -> MixedGraph:
    return MixedGraph.from_edges(names, edges)


@pytest.fixture
def fig2():
    from cavs import datasets

    return datasets.sparse_stratum_graph(), datasets.sparse_stratum_dataset()
