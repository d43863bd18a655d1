"""Minimal back-door sets and MI-based selection on a ten-variable DAG.

Run with ``python demos/worked_example.py``.
"""
from cavs import (
    enumerate_minimal_backdoor_sets,
    enumerate_paths,
    forward_sample,
    prune_to_ancestors,
    remove_outgoing,
    select_adjustment,
)
from cavs.datasets import worked_example_graph
from cavs.network import random_cpts

g = worked_example_graph()
print("edges:", ", ".join(f"{a}->{b}" for a, b in g.directed_edges()))

# Keep only ancestors of X and Y, then cut the edges leaving X.
# What remains between X and Y are the back-door paths.
surgered = remove_outgoing(prune_to_ancestors(g, "X", "Y"), "X")
print("\nback-door paths:")
for p in enumerate_paths(surgered, "X", "Y"):
    print("  ", p)

sets = enumerate_minimal_backdoor_sets(g, "X", "Y")
print("\nminimal back-door sets:", "  ".join(str(c) for c in sets))

# Any of these sets identifies P(Y | do(X)). To pick one, draw data from
# random ternary CPTs and rank the sets by their MI with X.
net = random_cpts(g, 3, seed=3)
data = forward_sample(net, 5000, seed=3)
report = select_adjustment(g, "X", "Y", data, unit="bits")
print("\nMI with X (bits):")
for c in report.ranked:
    print(f"   {str(c):<12} {c.mi_score:.4f}")
print("chosen:", report.chosen)
