"""Adjustment on CPDAGs: amenability, the generalized adjustment criterion,
Markov-equivalence enumeration and restriction by orienting edges at the
treatment.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .dataset import Dataset
from .errors import (
    ClassSizeLimitError,
    GraphError,
    InconsistentOrientationError,
    NotAmenableError,
    ValidationError,
)
from .graph import MixedGraph, Node, max_paths_from_env, simple_paths
from .selection import SelectionReport, select_adjustment

DEFAULT_MAX_CLASS = 10_000


class _Conflict(Exception):
    pass


# -- basic structure --------------------------------------------------------------

def _key(a, b):
    return (a, b) if a < b else (b, a)


def v_structures(g: MixedGraph) -> frozenset[tuple[int, int, int]]:
    """Triples ``(a, b, c)`` with ``a < c``, ``a -> b <- c`` and a, c non-adjacent."""
    out = set()
    for b in range(len(g)):
        pa = g.pa(b)
        for i, a in enumerate(pa):
            for c in pa[i + 1:]:
                if not g.adjacent(a, c):
                    out.add((a, b, c))
    return frozenset(out)


def skeleton(g: MixedGraph) -> frozenset[tuple[int, int]]:
    return frozenset(_key(a, b) for a, b in g.directed) | g.undirected


def possible_descendants(g: MixedGraph, v: int) -> set[int]:
    """Nodes reachable from ``v`` along directed-forward or undirected edges, ``v`` included."""
    seen = {v}
    stack = [v]
    while stack:
        a = stack.pop()
        for b in g.ch(a) + g.ne(a):
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


def _forward_ok(g, a, b):
    return (a, b) in g.directed or _key(a, b) in g.undirected


def is_possibly_directed(g: MixedGraph, seq) -> bool:
    return all(_forward_ok(g, a, b) for a, b in zip(seq, seq[1:]))


def possibly_directed_paths(g: MixedGraph, x: int, y: int, cap: int) -> list[tuple[int, ...]]:
    return [p for p in simple_paths(g, x, y, cap) if is_possibly_directed(g, p)]


# -- amenability ------------------------------------------------------------------

def amenability_witness(g: MixedGraph, x: Node, y: Node) -> list[str] | None:
    """A possibly directed x-y path leaving x through an undirected edge, if any."""
    xi, yi = g.index(x), g.index(y)
    if xi == yi:
        raise ValidationError("treatment and outcome must differ")
    for w in g.ne(xi):
        prev = {w: None}
        queue = [w]
        while queue:
            a = queue.pop(0)
            if a == yi:
                path = []
                while a is not None:
                    path.append(a)
                    a = prev[a]
                return [g.names[i] for i in [xi] + path[::-1]]
            for b in g.ch(a) + g.ne(a):
                if b != xi and b not in prev:
                    prev[b] = a
                    queue.append(b)
    return None


def is_amenable(g: MixedGraph, x: Node, y: Node) -> bool:
    """Every possibly directed path from x to y starts with a directed edge out of x."""
    check_cpdag_or_dag(g)
    return amenability_witness(g, x, y) is None


# -- generalized adjustment criterion --------------------------------------------

def _status(g, a, b, c):
    """'collider', 'noncollider' or None (indefinite) for b on a path a-b-c."""
    if (a, b) in g.directed and (c, b) in g.directed:
        return "collider"
    if (b, a) in g.directed or (b, c) in g.directed:
        return "noncollider"
    if _key(a, b) in g.undirected and _key(b, c) in g.undirected and not g.adjacent(a, c):
        return "noncollider"
    return None


def gac_violation(
    g: MixedGraph, x: Node, y: Node, z: Iterable[Node], cap: int | None = None
) -> str | None:
    """Which generalized-adjustment condition ``z`` fails, or None.

    On a DAG this reduces to the adjustment criterion.
    """
    cap = max_paths_from_env() if cap is None else cap
    xi, yi = g.index(x), g.index(y)
    if xi == yi:
        raise ValidationError("treatment and outcome must differ")
    zi = {g.index(v) for v in z}
    if xi in zi or yi in zi:
        raise ValidationError("adjustment set must not contain the treatment or the outcome")

    witness = amenability_witness(g, xi, yi)
    if witness is not None:
        return "condition 1: not amenable, possibly directed path " + " - ".join(witness)

    on_causal = set()
    for p in possibly_directed_paths(g, xi, yi, cap):
        on_causal.update(p[1:])
    forbidden = set()
    for w in on_causal:
        forbidden |= possible_descendants(g, w)
    bad = sorted(zi & forbidden)
    if bad:
        return "condition 2: {} possibly descend(s) from a node on a causal path".format(
            ", ".join(g.names[i] for i in bad)
        )

    pde_cache: dict[int, set[int]] = {}
    for p in simple_paths(g, xi, yi, cap):
        if is_possibly_directed(g, p):
            continue
        marks = [_status(g, p[k - 1], p[k], p[k + 1]) for k in range(1, len(p) - 1)]
        if None in marks:
            continue
        blocked = False
        for v, m in zip(p[1:-1], marks):
            if m == "noncollider" and v in zi:
                blocked = True
                break
            if m == "collider":
                if v not in pde_cache:
                    pde_cache[v] = possible_descendants(g, v)
                if not (pde_cache[v] & zi):
                    blocked = True
                    break
        if not blocked:
            return "condition 3: non-causal path {} is open".format(
                " - ".join(g.names[i] for i in p)
            )
    return None


def satisfies_gac(g: MixedGraph, x: Node, y: Node, z: Iterable[Node], cap=None) -> bool:
    check_cpdag_or_dag(g)
    return gac_violation(g, x, y, z, cap) is None


# -- Meek closure and class enumeration --------------------------------------------

def _has_cycle(n, directed):
    children = [[] for _ in range(n)]
    indeg = [0] * n
    for a, b in directed:
        children[a].append(b)
        indeg[b] += 1
    ready = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    while ready:
        a = ready.pop()
        seen += 1
        for b in children[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                ready.append(b)
    return seen != n


class _PDAG:
    """Mutable partially directed graph used during orientation propagation."""

    def __init__(self, n, directed, undirected, allowed_v):
        self.n = n
        self.d = set(directed)
        self.u = set(undirected)
        self.allowed_v = allowed_v
        self.adj = [set() for _ in range(n)]
        for a, b in self.d:
            self.adj[a].add(b)
            self.adj[b].add(a)
        for a, b in self.u:
            self.adj[a].add(b)
            self.adj[b].add(a)

    def copy(self):
        return _PDAG(self.n, self.d, self.u, self.allowed_v)

    def undirected_at(self, a):
        return [b for b in self.adj[a] if _key(a, b) in self.u]

    def orient(self, a, b):
        k = _key(a, b)
        if (a, b) in self.d:
            return
        if (b, a) in self.d or k not in self.u:
            raise _Conflict(f"edge {a}-{b} cannot be oriented {a}->{b}")
        self.u.discard(k)
        self.d.add((a, b))
        for c in self.adj[b]:
            if c != a and (c, b) in self.d and c not in self.adj[a]:
                if (min(a, c), b, max(a, c)) not in self.allowed_v:
                    raise _Conflict(f"orienting {a}->{b} creates a new v-structure with {c}")

    def _forced(self, a, b):
        """Whether a Meek rule forces a -> b on the undirected edge a - b."""
        adj, d = self.adj, self.d
        # R1: c -> a - b, c and b non-adjacent
        for c in adj[a]:
            if (c, a) in d and c != b and c not in adj[b]:
                return True
        # R2: a -> c -> b
        for c in adj[a]:
            if (a, c) in d and (c, b) in d:
                return True
        und_a = [c for c in adj[a] if _key(a, c) in self.u and c != b]
        # R3: a - c -> b, a - e -> b, c and e non-adjacent
        into_b = [c for c in und_a if (c, b) in d]
        for i, c in enumerate(into_b):
            for e in into_b[i + 1:]:
                if e not in adj[c]:
                    return True
        # R4: a - e -> c -> b, a adjacent c, e and b non-adjacent
        for e in und_a:
            if e in adj[b]:
                continue
            for c in adj[e]:
                if (e, c) in d and (c, b) in d and c in adj[a]:
                    return True
        return False

    def close(self):
        changed = True
        while changed:
            changed = False
            for a, b in sorted(self.u):
                fwd, back = self._forced(a, b), self._forced(b, a)
                if fwd and back:
                    raise _Conflict(f"edge {a}-{b} is forced both ways")
                if fwd:
                    self.orient(a, b)
                elif back:
                    self.orient(b, a)
                else:
                    continue
                changed = True
                break
        if _has_cycle(self.n, self.d):
            raise _Conflict("orientation creates a directed cycle")


def _extensions(state: _PDAG) -> Iterator[frozenset]:
    try:
        state.close()
    except _Conflict:
        return
    if not state.u:
        yield frozenset(state.d)
        return
    a, b = min(state.u)
    for head, tail in ((b, a), (a, b)):
        branch = state.copy()
        try:
            branch.orient(tail, head)
        except _Conflict:
            continue
        yield from _extensions(branch)


def _members(g: MixedGraph, state: _PDAG, cap: int) -> list[MixedGraph]:
    target_v = state.allowed_v
    target_skel = skeleton(g)
    found = set()
    for d in _extensions(state):
        dag = g.with_edges(directed=d, undirected=())
        if v_structures(dag) != target_v or skeleton(dag) != target_skel:
            continue
        found.add(d)
        if len(found) > cap:
            raise ClassSizeLimitError(cap)
    return [g.with_edges(directed=d, undirected=()) for d in sorted(found, key=sorted)]


def cpdag_of(dag: MixedGraph) -> MixedGraph:
    """The CPDAG representing the Markov equivalence class of ``dag``."""
    if not dag.is_dag:
        raise GraphError("cpdag_of expects a DAG")
    vs = v_structures(dag)
    compelled = {(a, b) for a, b, _ in vs} | {(c, b) for _, b, c in vs}
    state = _PDAG(len(dag), compelled, skeleton(dag) - {_key(a, b) for a, b in compelled}, vs)
    state.close()
    return dag.with_edges(directed=state.d, undirected=state.u)


def check_cpdag_or_dag(g: MixedGraph):
    """Raise :class:`GraphError` unless ``g`` is a DAG or a valid CPDAG."""
    if g.is_dag:
        return
    state = _PDAG(len(g), g.directed, g.undirected, v_structures(g))
    first = next(_extensions(state), None)
    if first is None:
        raise GraphError("graph is not a CPDAG: it has no consistent DAG extension")
    if cpdag_of(g.with_edges(directed=first, undirected=())) != g:
        raise GraphError("graph is not a CPDAG: its orientations are not the completed pattern")


@dataclass
class EquivalenceClass:
    members: list[MixedGraph]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, k):
        return self.members[k]


def enumerate_equivalence_class(g: MixedGraph, cap: int = DEFAULT_MAX_CLASS) -> EquivalenceClass:
    """All DAGs sharing skeleton and v-structures with the CPDAG ``g``.

    Members are ordered by their sorted directed-edge index pairs.
    """
    check_cpdag_or_dag(g)
    state = _PDAG(len(g), g.directed, g.undirected, v_structures(g))
    return EquivalenceClass(_members(g, state, cap))


@dataclass(frozen=True)
class OrientationChoice:
    """Chosen direction for undirected edges at the treatment, as (tail, head) names."""

    edges: tuple[tuple[str, str], ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "OrientationChoice":
        return cls(tuple(sorted(tuple(p) for p in pairs)))

    @classmethod
    def from_mapping(cls, heads: Mapping[frozenset, str]) -> "OrientationChoice":
        pairs = []
        for edge, head in heads.items():
            (tail,) = set(edge) - {head}
            pairs.append((tail, head))
        return cls.from_pairs(pairs)

    @classmethod
    def parse(cls, text: str) -> "OrientationChoice":
        """``"Z1->X,X->W"`` style; ``<-`` is accepted as well."""
        pairs = []
        for item in filter(None, (t.strip() for t in text.split(","))):
            if "->" in item:
                a, b = item.split("->", 1)
            elif "<-" in item:
                b, a = item.split("<-", 1)
            else:
                raise ValidationError(f"cannot read orientation {item!r}; use A->B")
            pairs.append((a.strip(), b.strip()))
        return cls.from_pairs(pairs)


def _apply_choice(g: MixedGraph, x: Node, choice: OrientationChoice) -> _PDAG:
    xi = g.index(x)
    at_x = {_key(xi, w) for w in g.ne(xi)}
    given = {}
    for tail, head in choice.edges:
        t, h = g.index(tail), g.index(head)
        k = _key(t, h)
        if xi not in k:
            raise ValidationError(f"{tail}->{head} is not an edge at {g.names[xi]}")
        if k not in g.undirected:
            raise ValidationError(f"{tail} - {head} is not an undirected edge")
        if k in given:
            raise ValidationError(f"edge {tail} - {head} oriented twice")
        given[k] = (t, h)
    if set(given) != at_x:
        missing = sorted(at_x - set(given))
        raise ValidationError(
            "orientation must cover every undirected edge at {}; missing {}".format(
                g.names[xi], ", ".join(f"{g.names[a]} - {g.names[b]}" for a, b in missing)
            )
        )
    state = _PDAG(len(g), g.directed, g.undirected, v_structures(g))
    try:
        for t, h in sorted(given.values()):
            state.orient(t, h)
        state.close()
    except _Conflict as exc:
        raise InconsistentOrientationError(_named_conflict(g, str(exc))) from None
    return state


def _named_conflict(g, msg):
    # replace bare indices in propagation messages by node names
    import re

    return re.sub(r"\b(\d+)\b", lambda m: g.names[int(m.group(1))], msg)


def orient_and_restrict(
    g: MixedGraph, x: Node, choice: OrientationChoice, cap: int = DEFAULT_MAX_CLASS
) -> EquivalenceClass:
    """Orient the undirected edges at ``x``, propagate, and list the remaining DAGs."""
    check_cpdag_or_dag(g)
    state = _apply_choice(g, x, choice)
    members = _members(g, state, cap)
    if not members:
        raise InconsistentOrientationError(
            "no DAG in the equivalence class agrees with " +
            ", ".join(f"{a}->{b}" for a, b in choice.edges)
        )
    return EquivalenceClass(members)


def restricted_cpdag(g: MixedGraph, x: Node, choice: OrientationChoice) -> MixedGraph:
    """The partially directed graph after orienting and propagating ``choice``."""
    state = _apply_choice(g, x, choice)
    return g.with_edges(directed=state.d, undirected=state.u)


def cavs_on_cpdag(
    g: MixedGraph,
    x: Node,
    y: Node,
    d: Dataset,
    choice: OrientationChoice | None = None,
    *,
    cap: int = DEFAULT_MAX_CLASS,
    **select_kwargs,
) -> SelectionReport:
    """Run adjustment selection on a CPDAG.

    When every edge at ``x`` is directed, any member DAG gives the same
    answer; the first member is used. Otherwise ``choice`` must orient the
    undirected edges at ``x``, and the first DAG of the restricted class is
    used.
    """
    check_cpdag_or_dag(g)
    xi = g.index(x)
    if g.ne(xi):
        if choice is None:
            raise NotAmenableError(
                f"{g.names[xi]} has undirected edges "
                f"({', '.join(g.names[w] for w in g.ne(xi))}); orient every edge at "
                f"{g.names[xi]} to make the effect computable"
            )
        members = orient_and_restrict(g, xi, choice, cap)
    else:
        if choice is not None and choice.edges:
            raise ValidationError(f"{g.names[xi]} has no undirected edges to orient")
        members = enumerate_equivalence_class(g, cap)
    dag = members[0]
    report = select_adjustment(dag, x, y, d, **select_kwargs)
    report.dag = dag
    report.class_size = len(members)
    return report
