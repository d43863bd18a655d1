"""Mixed graphs (DAGs and CPDAGs) and the structural primitives on them.

Nodes are identified by name in the public API; every function also accepts
a node's integer index or a :class:`VariableId`. Internally edges are stored
as index pairs so that orderings are deterministic (by node index).
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from .errors import EnumerationLimitError, GraphError, UnknownVariableError, ValidationError

DEFAULT_MAX_PATHS = 100_000

RELATIVE_KINDS = ("parents", "children", "ancestors", "descendants", "adjacent")


class VariableId(NamedTuple):
    index: int
    name: str


Node = Union[str, int, VariableId]


def max_paths_from_env(default=DEFAULT_MAX_PATHS):
    """Path cap, overridable through ``CAVS_MAX_PATHS``."""
    raw = os.environ.get("CAVS_MAX_PATHS")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"CAVS_MAX_PATHS must be an integer, got {raw!r}")
    if value < 1:
        raise ValidationError("CAVS_MAX_PATHS must be positive")
    return value


@dataclass(frozen=True)
class MixedGraph:
    """Nodes plus a directed and an undirected edge set.

    ``directed`` holds ``(tail, head)`` index pairs, ``undirected`` holds
    ``(lo, hi)`` index pairs with ``lo < hi``. Instances are immutable and
    validated on construction: no self-loops, no pair of nodes joined twice,
    acyclic directed part.
    """

    names: tuple[str, ...]
    directed: frozenset[tuple[int, int]] = frozenset()
    undirected: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        n = len(self.names)
        seen = set()
        for name in self.names:
            if not isinstance(name, str) or not name:
                raise GraphError(f"variable names must be non-empty strings, got {name!r}")
            if name in seen:
                raise GraphError(f"duplicate variable {name!r}")
            seen.add(name)
        pairs = set()
        for a, b in self.directed:
            self._check_pair(a, b, n)
            key = (min(a, b), max(a, b))
            if key in pairs:
                raise GraphError(
                    f"nodes {self.names[a]!r} and {self.names[b]!r} are joined more than once"
                )
            pairs.add(key)
        for a, b in self.undirected:
            self._check_pair(a, b, n)
            if a > b:
                raise GraphError("undirected edges must be stored as (lo, hi)")
            if (a, b) in pairs:
                raise GraphError(
                    f"nodes {self.names[a]!r} and {self.names[b]!r} are joined more than once"
                )
            pairs.add((a, b))
        cycle = self._find_cycle()
        if cycle:
            raise GraphError("directed cycle: " + " -> ".join(self.names[i] for i in cycle))

    def _check_pair(self, a, b, n):
        if not (0 <= a < n and 0 <= b < n):
            raise GraphError(f"edge ({a}, {b}) references a node outside the graph")
        if a == b:
            raise GraphError(f"self-loop on {self.names[a]!r}")

    def _find_cycle(self):
        children = [[] for _ in self.names]
        for a, b in self.directed:
            children[a].append(b)
        state = [0] * len(self.names)  # 0 new, 1 on stack, 2 done
        for root in range(len(self.names)):
            if state[root]:
                continue
            stack = [(root, iter(sorted(children[root])))]
            trail = [root]
            state[root] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    stack.pop()
                    trail.pop()
                    state[node] = 2
                elif state[nxt] == 1:
                    return trail[trail.index(nxt):] + [nxt]
                elif state[nxt] == 0:
                    state[nxt] = 1
                    trail.append(nxt)
                    stack.append((nxt, iter(sorted(children[nxt]))))
        return None

    # -- construction ----------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        names: Sequence[str],
        directed: Iterable[tuple[str, str]] = (),
        undirected: Iterable[tuple[str, str]] = (),
    ) -> "MixedGraph":
        names = tuple(names)
        pos = {name: i for i, name in enumerate(names)}

        def lookup(name):
            try:
                return pos[name]
            except KeyError:
                raise UnknownVariableError(name) from None

        d = []
        for a, b in directed:
            d.append((lookup(a), lookup(b)))
        u = []
        for a, b in undirected:
            i, j = lookup(a), lookup(b)
            u.append((min(i, j), max(i, j)))
        if len(set(d)) != len(d) or len(set(u)) != len(u):
            raise GraphError("duplicate edge")
        return cls(names, frozenset(d), frozenset(u))

    def with_edges(self, directed=None, undirected=None) -> "MixedGraph":
        """Copy with replaced index-pair edge sets."""
        return MixedGraph(
            self.names,
            frozenset(self.directed if directed is None else directed),
            frozenset(self.undirected if undirected is None else undirected),
        )

    # -- lookup ----------------------------------------------------------------

    @cached_property
    def _pos(self):
        return {name: i for i, name in enumerate(self.names)}

    def index(self, v: Node) -> int:
        if isinstance(v, VariableId):
            if v.index < len(self.names) and self.names[v.index] == v.name:
                return v.index
            raise UnknownVariableError(v.name)
        if isinstance(v, str):
            try:
                return self._pos[v]
            except KeyError:
                raise UnknownVariableError(v) from None
        if isinstance(v, int) and 0 <= v < len(self.names):
            return v
        raise UnknownVariableError(v)

    def variable(self, v: Node) -> VariableId:
        i = self.index(v)
        return VariableId(i, self.names[i])

    @property
    def variables(self) -> list[VariableId]:
        return [VariableId(i, name) for i, name in enumerate(self.names)]

    def __contains__(self, v):
        try:
            self.index(v)
        except UnknownVariableError:
            return False
        return True

    def __len__(self):
        return len(self.names)

    @property
    def is_dag(self) -> bool:
        return not self.undirected

    # -- adjacency (index level) -------------------------------------------------

    @cached_property
    def _adjacency(self):
        n = len(self.names)
        pa = [set() for _ in range(n)]
        ch = [set() for _ in range(n)]
        ne = [set() for _ in range(n)]
        for a, b in self.directed:
            ch[a].add(b)
            pa[b].add(a)
        for a, b in self.undirected:
            ne[a].add(b)
            ne[b].add(a)
        freeze = lambda sets: tuple(tuple(sorted(s)) for s in sets)  # noqa: E731
        adj = tuple(tuple(sorted(pa[i] | ch[i] | ne[i])) for i in range(n))
        return freeze(pa), freeze(ch), freeze(ne), adj

    def pa(self, i: int) -> tuple[int, ...]:
        return self._adjacency[0][i]

    def ch(self, i: int) -> tuple[int, ...]:
        return self._adjacency[1][i]

    def ne(self, i: int) -> tuple[int, ...]:
        """Undirected neighbours."""
        return self._adjacency[2][i]

    def adj(self, i: int) -> tuple[int, ...]:
        return self._adjacency[3][i]

    def adjacent(self, i: int, j: int) -> bool:
        return (i, j) in self.directed or (j, i) in self.directed or (
            (min(i, j), max(i, j)) in self.undirected
        )

    def anc(self, nodes: Iterable[int]) -> set[int]:
        """Strict ancestors of a node set over directed edges."""
        return _closure(nodes, self.pa)

    def des(self, nodes: Iterable[int]) -> set[int]:
        return _closure(nodes, self.ch)

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        indeg = [len(self.pa(i)) for i in range(len(self.names))]
        ready = [i for i, d in enumerate(indeg) if d == 0]
        order = []
        while ready:
            ready.sort()
            i = ready.pop(0)
            order.append(i)
            for c in self.ch(i):
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        return tuple(order)

    # -- presentation ----------------------------------------------------------

    def directed_edges(self) -> list[tuple[str, str]]:
        return [(self.names[a], self.names[b]) for a, b in sorted(self.directed)]

    def undirected_edges(self) -> list[tuple[str, str]]:
        return [(self.names[a], self.names[b]) for a, b in sorted(self.undirected)]

    def names_of(self, idxs: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.names[i] for i in sorted(idxs))

    def to_dot(self) -> str:
        lines = ["digraph G {"]
        for name in self.names:
            lines.append(f'  "{name}";')
        for a, b in self.directed_edges():
            lines.append(f'  "{a}" -> "{b}";')
        for a, b in self.undirected_edges():
            lines.append(f'  "{a}" -> "{b}" [dir=none];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        parts = [f"{a}->{b}" for a, b in self.directed_edges()]
        parts += [f"{a}--{b}" for a, b in self.undirected_edges()]
        return f"MixedGraph({', '.join(parts) or 'no edges'}; nodes={list(self.names)})"


def _closure(start, step):
    seen = set()
    stack = list(start)
    while stack:
        v = stack.pop()
        for w in step(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def require_dag(g: MixedGraph, what="operation"):
    if not g.is_dag:
        raise GraphError(f"{what} requires a DAG but the graph has undirected edges")


# -- relatives and surgery ------------------------------------------------------

def relatives(g: MixedGraph, v: Node, kind: str) -> frozenset[str]:
    """Parents, children, ancestors, descendants or adjacent nodes of ``v``.

    Everything except ``adjacent`` follows directed edges only; ancestors and
    descendants exclude ``v`` itself.
    """
    i = g.index(v)
    if kind == "parents":
        found = g.pa(i)
    elif kind == "children":
        found = g.ch(i)
    elif kind == "ancestors":
        found = g.anc([i])
    elif kind == "descendants":
        found = g.des([i])
    elif kind == "adjacent":
        found = g.adj(i)
    else:
        raise ValueError(f"kind must be one of {RELATIVE_KINDS}, got {kind!r}")
    return frozenset(g.names[j] for j in found)


def prune_to_ancestors(g: MixedGraph, x: Node, y: Node) -> MixedGraph:
    """Drop every edge touching a node outside {x, y} and their ancestors."""
    require_dag(g, "prune_to_ancestors")
    xi, yi = g.index(x), g.index(y)
    if xi == yi:
        raise ValidationError("x and y must differ")
    keep = {xi, yi} | g.anc([xi, yi])
    return g.with_edges(
        directed={(a, b) for a, b in g.directed if a in keep and b in keep},
        undirected=set(),
    )


def remove_outgoing(g: MixedGraph, x: Node) -> MixedGraph:
    xi = g.index(x)
    return g.with_edges(directed={(a, b) for a, b in g.directed if a != xi})


# -- paths ------------------------------------------------------------------------

@dataclass(frozen=True)
class Path:
    """A simple path with a collider flag for every interior node."""

    nodes: tuple[str, ...]
    colliders: tuple[bool, ...]

    @property
    def interior(self) -> tuple[str, ...]:
        return self.nodes[1:-1]

    def __str__(self):
        return " - ".join(self.nodes)


def simple_paths(g: MixedGraph, x: int, y: int, cap: int) -> list[tuple[int, ...]]:
    """All simple x-y paths over the skeleton, lexicographic by index sequence."""
    if x == y:
        raise ValidationError("path endpoints must differ")
    out: list[tuple[int, ...]] = []
    trail = [x]
    on_trail = {x}

    def walk(v):
        for w in g.adj(v):
            if w in on_trail:
                continue
            if w == y:
                out.append(tuple(trail) + (y,))
                if len(out) > cap:
                    raise EnumerationLimitError(cap)
                continue
            trail.append(w)
            on_trail.add(w)
            walk(w)
            trail.pop()
            on_trail.discard(w)

    walk(x)
    return out


def collider_marks(g: MixedGraph, seq: Sequence[int]) -> tuple[bool, ...]:
    return tuple(
        (seq[k - 1], seq[k]) in g.directed and (seq[k + 1], seq[k]) in g.directed
        for k in range(1, len(seq) - 1)
    )


def enumerate_paths(g: MixedGraph, x: Node, y: Node, cap: int | None = None) -> list[Path]:
    """Every simple path between ``x`` and ``y`` ignoring edge direction.

    Raises :class:`EnumerationLimitError` rather than truncating when more
    than ``cap`` paths exist.
    """
    require_dag(g, "enumerate_paths")
    cap = max_paths_from_env() if cap is None else cap
    if cap < 1:
        raise ValidationError("cap must be positive")
    xi, yi = g.index(x), g.index(y)
    return [
        Path(tuple(g.names[i] for i in seq), collider_marks(g, seq))
        for seq in simple_paths(g, xi, yi, cap)
    ]


def path_blocked(p: Path, z: Iterable[Node], g: MixedGraph) -> bool:
    """Whether conditioning on ``z`` blocks ``p``; collider descendants come from ``g``."""
    zi = {g.index(v) for v in z}
    ends = {g.index(p.nodes[0]), g.index(p.nodes[-1])}
    if zi & ends:
        raise ValidationError("conditioning set contains an endpoint of the path")
    for name, is_collider in zip(p.interior, p.colliders):
        v = g.index(name)
        if is_collider:
            if v not in zi and not (g.des([v]) & zi):
                return True
        elif v in zi:
            return True
    return False


def d_separated(
    g: MixedGraph, x: Node, y: Node, z: Iterable[Node] = (), cap: int | None = None
) -> bool:
    require_dag(g, "d_separated")
    z = list(z)
    xi, yi = g.index(x), g.index(y)
    if xi in {g.index(v) for v in z} or yi in {g.index(v) for v in z}:
        raise ValidationError("x and y must not be in the conditioning set")
    return all(path_blocked(p, z, g) for p in enumerate_paths(g, xi, yi, cap))


def iter_edges(g: MixedGraph) -> Iterator[tuple[str, str, str]]:
    """Yield ``(a, mark, b)`` triples with mark ``->`` or ``--``."""
    for a, b in g.directed_edges():
        yield a, "->", b
    for a, b in g.undirected_edges():
        yield a, "--", b
