"""Categorical Bayesian networks: CPT storage, forward sampling, random generation."""
from __future__ import annotations

import hashlib
import zlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import Dataset
from .errors import GraphError, ValidationError
from .graph import MixedGraph

ROW_TOLERANCE = 1e-9


def derive_seed(master: int, *tags) -> int:
    """Deterministic 64-bit child seed for ``master`` and a sequence of tags.

    Tags may be ints or strings; strings are reduced with CRC-32. The same
    inputs always give the same seed on every platform.
    """
    key = []
    for t in tags:
        key.append(zlib.crc32(t.encode()) if isinstance(t, str) else int(t))
    ss = np.random.SeedSequence(entropy=int(master) & (2**64 - 1), spawn_key=tuple(key))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


@dataclass(frozen=True, eq=False)
class CptNetwork:
    """A DAG plus one conditional probability table per node.

    ``cpts[i]`` has shape ``(rows, len(alphabets[i]))`` with one row per joint
    parent state. Parents are taken in node-index order and the last parent
    varies fastest.
    """

    graph: MixedGraph
    alphabets: tuple[tuple[str, ...], ...]
    cpts: tuple[np.ndarray, ...]

    def __post_init__(self):
        g = self.graph
        if not g.is_dag:
            raise GraphError("a CPT network needs a DAG")
        if len(self.alphabets) != len(g) or len(self.cpts) != len(g):
            raise ValidationError("one alphabet and one CPT per node are required")
        frozen = []
        for i, (alpha, table) in enumerate(zip(self.alphabets, self.cpts)):
            name = g.names[i]
            if not alpha:
                raise ValidationError(f"{name}: empty alphabet")
            table = np.array(table, dtype=float)
            rows = self.n_rows(i)
            if table.shape != (rows, len(alpha)):
                raise ValidationError(
                    f"{name}: CPT must have shape ({rows}, {len(alpha)}), got {table.shape}"
                )
            if (table < 0).any():
                raise ValidationError(f"{name}: negative probability")
            sums = table.sum(axis=1)
            bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_TOLERANCE)
            if bad.size:
                raise ValidationError(
                    f"{name}: CPT row {bad[0]} sums to {sums[bad[0]]:.12g}, not 1"
                )
            table.setflags(write=False)
            frozen.append(table)
        object.__setattr__(self, "alphabets", tuple(tuple(a) for a in self.alphabets))
        object.__setattr__(self, "cpts", tuple(frozen))

    def n_rows(self, i: int) -> int:
        rows = 1
        for p in self.graph.pa(i):
            rows *= len(self.alphabets[p])
        return rows

    def parent_states(self, i: int) -> list[tuple[str, ...]]:
        from itertools import product

        return list(product(*(self.alphabets[p] for p in self.graph.pa(i))))

    def cpt(self, name: str) -> np.ndarray:
        return self.cpts[self.graph.index(name)]

    def probability(self, name: str, value: str, parents: dict[str, str] | None = None) -> float:
        i = self.graph.index(name)
        row = 0
        parents = parents or {}
        for p in self.graph.pa(i):
            row = row * len(self.alphabets[p]) + self.alphabets[p].index(parents[self.graph.names[p]])
        return float(self.cpts[i][row, self.alphabets[i].index(value)])

    def fingerprint(self) -> str:
        from .io import emit_network

        return hashlib.sha256(emit_network(self).encode()).hexdigest()

    def __eq__(self, other):
        if not isinstance(other, CptNetwork):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.alphabets == other.alphabets
            and all(np.array_equal(a, b) for a, b in zip(self.cpts, other.cpts))
        )

    __hash__ = None


def forward_sample(net: CptNetwork, n: int, seed: int) -> Dataset:
    """Draw ``n`` i.i.d. records, nodes in topological order.

    Output is a pure function of ``(net, n, seed)``.
    """
    if n < 1:
        raise ValidationError("sample size must be positive")
    rng = np.random.default_rng(int(seed) & (2**64 - 1))
    g = net.graph
    data = np.zeros((n, len(g)), dtype=np.int64)
    for i in g.topological_order:
        row = np.zeros(n, dtype=np.int64)
        for p in g.pa(i):
            row = row * len(net.alphabets[p]) + data[:, p]
        cum = np.cumsum(net.cpts[i], axis=1)
        u = rng.random(n)
        draws = (u[:, None] >= cum[row]).sum(axis=1)
        data[:, i] = np.minimum(draws, len(net.alphabets[i]) - 1)
    return Dataset(g.names, net.alphabets, data)


def random_dag(n_nodes: int, n_edges: int, seed: int, prefix: str = "V") -> MixedGraph:
    """Random DAG with exactly ``n_edges`` edges.

    A random node order is drawn and edges are sprinkled uniformly over the
    pairs that respect it, so the result is acyclic by construction.
    """
    if n_nodes < 1:
        raise ValidationError("need at least one node")
    max_edges = n_nodes * (n_nodes - 1) // 2
    if not 0 <= n_edges <= max_edges:
        raise ValidationError(
            f"{n_edges} edges is infeasible for a DAG on {n_nodes} nodes (max {max_edges})"
        )
    rng = np.random.default_rng(int(seed) & (2**64 - 1))
    order = rng.permutation(n_nodes)
    pairs = [(i, j) for i in range(n_nodes) for j in range(i + 1, n_nodes)]
    picked = rng.choice(len(pairs), size=n_edges, replace=False)
    edges = {(int(order[pairs[k][0]]), int(order[pairs[k][1]])) for k in picked}
    names = tuple(f"{prefix}{k + 1}" for k in range(n_nodes))
    return MixedGraph(names, frozenset(edges))


def random_cpts(
    g: MixedGraph, cardinality: int | Sequence[int], seed: int, mode: str = "uniform"
) -> CptNetwork:
    """Random CPTs for ``g``.

    ``mode="uniform"`` draws every entry from U(0, 1) and normalizes each row;
    ``mode="dirichlet"`` draws rows from a flat Dirichlet.
    """
    if isinstance(cardinality, (int, np.integer)):
        cards = [int(cardinality)] * len(g)
    else:
        cards = [int(c) for c in cardinality]
    if any(c < 1 for c in cards):
        raise ValidationError("cardinality must be at least 1")
    rng = np.random.default_rng(int(seed) & (2**64 - 1))
    alphabets = tuple(tuple(str(k) for k in range(c)) for c in cards)
    tables = []
    for i in range(len(g)):
        rows = int(np.prod([cards[p] for p in g.pa(i)], dtype=np.int64))
        if mode == "uniform":
            t = rng.random((rows, cards[i]))
            t /= t.sum(axis=1, keepdims=True)
        elif mode == "dirichlet":
            t = rng.dirichlet(np.ones(cards[i]), size=rows)
        else:
            raise ValidationError(f"unknown CPT mode {mode!r}")
        tables.append(t)
    return CptNetwork(g, alphabets, tuple(tables))


def random_network(
    n_nodes: int,
    n_edges: int,
    cardinality: int,
    seed: int,
    *,
    cpt_seed: int | None = None,
    mode: str = "uniform",
) -> CptNetwork:
    """Random structure from ``seed`` and random CPTs from ``cpt_seed``.

    Without ``cpt_seed`` the CPT seed is derived from ``seed``.
    """
    g = random_dag(n_nodes, n_edges, seed)
    if cpt_seed is None:
        cpt_seed = derive_seed(seed, "cpt")
    return random_cpts(g, cardinality, cpt_seed, mode)
