"""Reference implementations used only by the tests.

None of these share code with the package: they work on plain edge lists
and, where handy, on networkx graphs.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from itertools import chain, combinations

import networkx as nx


def _parents(edges):
    pa = defaultdict(set)
    for a, b in edges:
        pa[b].add(a)
    return pa


def ancestors_incl(edges, nodes):
    pa = _parents(edges)
    out, stack = set(nodes), list(nodes)
    while stack:
        v = stack.pop()
        for p in pa[v]:
            if p not in out:
                out.add(p)
                stack.append(p)
    return out


def descendants_strict(edges, v):
    ch = defaultdict(set)
    for a, b in edges:
        ch[a].add(b)
    out, stack = set(), [v]
    while stack:
        u = stack.pop()
        for c in ch[u]:
            if c not in out:
                out.add(c)
                stack.append(c)
    return out


def moral_dsep(edges, x, y, z):
    """d-separation through the moralized ancestral graph."""
    z = set(z)
    keep = ancestors_incl(edges, {x, y} | z)
    sub = [(a, b) for a, b in edges if a in keep and b in keep]
    nbr = defaultdict(set)
    for a, b in sub:
        nbr[a].add(b)
        nbr[b].add(a)
    for ps in _parents(sub).values():
        for a, b in combinations(ps, 2):
            nbr[a].add(b)
            nbr[b].add(a)
    seen, stack = {x}, [x]
    while stack:
        v = stack.pop()
        if v == y:
            return False
        for w in nbr[v]:
            if w not in seen and w not in z:
                seen.add(w)
                stack.append(w)
    return True


def _nx(nodes, edges):
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from(edges)
    return g


def _is_dsep(g, x, y, z):
    fn = getattr(nx, "is_d_separator", None) or nx.d_separated
    return fn(g, {x}, {y}, set(z))


def powerset(items):
    items = list(items)
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def backdoor_valid(nodes, edges, x, y, z):
    if set(z) & descendants_strict(edges, x):
        return False
    surgered = [(a, b) for a, b in edges if a != x]
    return _is_dsep(_nx(nodes, surgered), x, y, z)


def minimal_backdoor_sets(nodes, edges, x, y):
    """Every valid set with no valid proper subset, by exhaustive search."""
    rest = [v for v in nodes if v not in (x, y)]
    valid = [frozenset(s) for s in powerset(rest) if backdoor_valid(nodes, edges, x, y, s)]
    return {s for s in valid if not any(t < s for t in valid)}


def adjustment_valid(nodes, edges, x, y, z):
    """Adjustment criterion for a single treatment in a DAG.

    Z must avoid descendants of every non-x node on a directed x->y path and
    d-separate x from y once the first edge of each such path is removed.
    """
    g = _nx(nodes, edges)
    z = set(z)
    causal_nodes = set()
    for p in nx.all_simple_paths(g, x, y):
        causal_nodes.update(p[1:])
    forbidden = set()
    for w in causal_nodes:
        forbidden |= {w} | nx.descendants(g, w)
    if z & forbidden:
        return False
    pbd = g.copy()
    for w in list(g.successors(x)):
        if w in causal_nodes:
            pbd.remove_edge(x, w)
    return _is_dsep(pbd, x, y, z)


def stratum_sum_effect(rows, x, y, z):
    """P(y | do(x)) by explicit summation over observed strata.

    ``rows`` is a list of dicts of labels. Returns {x_label: {y_label: p}}
    over observed labels, using P(y | x) when a stratum lacks x.
    """
    n = len(rows)
    xs = sorted({r[x] for r in rows})
    ys = sorted({r[y] for r in rows})
    key = lambda r: tuple(r[v] for v in z)  # noqa: E731
    pz = Counter(key(r) for r in rows)
    out = {}
    for xl in xs:
        xrows = [r for r in rows if r[x] == xl]
        dist = {}
        for yl in ys:
            total = 0.0
            for s, c in pz.items():
                cell = [r for r in xrows if key(r) == s]
                if cell:
                    p = sum(r[y] == yl for r in cell) / len(cell)
                else:
                    p = sum(r[y] == yl for r in xrows) / len(xrows)
                total += (c / n) * p
            dist[yl] = total
        out[xl] = dist
    return out
