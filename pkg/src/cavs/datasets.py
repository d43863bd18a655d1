"""Small built-in graphs and datasets used by the demos and tests."""
from __future__ import annotations

from importlib import resources

from .dataset import Dataset
from .graph import MixedGraph
from .io import parse_network


def _load(name):
    return parse_network(resources.files("cavs.data").joinpath(name).read_text(encoding="utf-8"))


def worked_example_graph() -> MixedGraph:
    """DAG with minimal back-door sets {V8}, {V3, V7}, {V6, V7} for (X, Y)."""
    return _load("worked_example.net")


def chain_cpdag() -> MixedGraph:
    """CPDAG with undirected chain X -- Z1 -- Z2 and a three-member class."""
    return _load("chain_cpdag.net")


def three_parents_graph() -> MixedGraph:
    return _load("three_parents.net")


# (x, z) -> (rows with y=0, rows with y=1)
SPARSE_STRATUM_COUNTS = {
    ("0", "0"): (1, 0),
    ("0", "1"): (20, 80),
    ("1", "0"): (40, 60),
    ("1", "1"): (30, 70),
}


def sparse_stratum_graph() -> MixedGraph:
    return MixedGraph.from_edges(["Z", "X", "Y"], [("Z", "X"), ("Z", "Y"), ("X", "Y")])


def sparse_stratum_dataset() -> Dataset:
    """301 binary records where the (X=0, Z=0) cell holds a single row.

    Z=0 covers 101 rows, and the lone X=0, Z=0 row has Y=0, so the naive
    estimate of P(Y=1 | X=0, Z=0) is 0 while its neighbours sit at 0.6-0.8.
    """
    rows = []
    for (xv, zv), (n0, n1) in SPARSE_STRATUM_COUNTS.items():
        rows += [(zv, xv, "0")] * n0 + [(zv, xv, "1")] * n1
    return Dataset.from_labels(["Z", "X", "Y"], [("0", "1")] * 3, rows)

