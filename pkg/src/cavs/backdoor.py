"""Back-door criterion checks and enumeration of minimal back-door sets."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterable

from .errors import SubsetScanLimitError, ValidationError
from .graph import (
    MixedGraph,
    Node,
    collider_marks,
    d_separated,
    enumerate_paths,
    max_paths_from_env,
    path_blocked,
    prune_to_ancestors,
    remove_outgoing,
    require_dag,
    simple_paths,
)

DEFAULT_MAX_POOL = 20


@dataclass(frozen=True)
class CandidateSet:
    """An adjustment set; ``members`` are kept in node-index order."""

    members: tuple[str, ...]
    minimal: bool = True
    mi_score: float | None = field(default=None, compare=False)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, name):
        return name in self.members

    def as_set(self) -> frozenset[str]:
        return frozenset(self.members)

    def with_score(self, score: float) -> "CandidateSet":
        return replace(self, mi_score=score)

    def __str__(self):
        return "{" + ", ".join(self.members) + "}"


def _check_endpoints(g, x, y, z):
    xi, yi = g.index(x), g.index(y)
    if xi == yi:
        raise ValidationError("treatment and outcome must differ")
    zi = {g.index(v) for v in z}
    if xi in zi or yi in zi:
        raise ValidationError("adjustment set must not contain the treatment or the outcome")
    return xi, yi, zi


def backdoor_violation(
    g: MixedGraph,
    x: Node,
    y: Node,
    z: Iterable[Node],
    *,
    descendants_in: str = "surgered",
    cap: int | None = None,
) -> str | None:
    """Describe which back-door condition ``z`` violates, or None if it holds.

    ``descendants_in`` selects the graph used for the collider-descendant rule:
    ``"surgered"`` (edges out of x removed, the default) or ``"original"``.
    """
    require_dag(g, "the back-door criterion")
    z = list(z)
    xi, yi, zi = _check_endpoints(g, x, y, z)
    bad = sorted(zi & g.des([xi]))
    if bad:
        names = ", ".join(g.names[i] for i in bad)
        return f"condition (i): {names} descend(s) from {g.names[xi]}"
    surgered = remove_outgoing(g, xi)
    if descendants_in == "surgered":
        if d_separated(surgered, xi, yi, zi, cap):
            return None
        open_path = next(p for p in enumerate_paths(surgered, xi, yi, cap)
                         if not path_blocked(p, zi, surgered))
    elif descendants_in == "original":
        paths = enumerate_paths(surgered, xi, yi, cap)
        open_path = next((p for p in paths if not path_blocked(p, zi, g)), None)
        if open_path is None:
            return None
    else:
        raise ValueError("descendants_in must be 'surgered' or 'original'")
    return f"condition (ii): back-door path {open_path} is open"


def satisfies_backdoor(g, x, y, z, *, descendants_in="surgered", cap=None) -> bool:
    return backdoor_violation(g, x, y, z, descendants_in=descendants_in, cap=cap) is None


def _blocking_masks(g: MixedGraph, paths):
    """Per path: (mask of interior non-colliders, masks that keep each collider open)."""
    out = []
    for seq in paths:
        noncol = 0
        col = []
        for v, is_collider in zip(seq[1:-1], collider_marks(g, seq)):
            if is_collider:
                m = 1 << v
                for d in g.des([v]):
                    m |= 1 << d
                col.append(m)
            else:
                noncol |= 1 << v
        out.append((noncol, tuple(col)))
    return out


def _blocks_all(mask, path_masks):
    for noncol, col in path_masks:
        if mask & noncol:
            continue
        if any(not (mask & c) for c in col):
            continue
        return False
    return True


def enumerate_minimal_backdoor_sets(
    g: MixedGraph,
    x: Node,
    y: Node,
    *,
    max_pool: int = DEFAULT_MAX_POOL,
    cap: int | None = None,
) -> list[CandidateSet]:
    """All minimal sets satisfying the back-door criterion for (x, y).

    The graph is restricted to ``{x, y} | anc(x) | anc(y)``, edges out of ``x``
    are removed, and all x-y paths of the result are listed. Subsets of the
    interior path nodes (descendants of ``x`` excluded) are then scanned by
    increasing size, keeping those that block every path and contain no set
    kept earlier. Output is ordered by size, then by member indices.
    """
    require_dag(g, "back-door enumeration")
    xi, yi, _ = _check_endpoints(g, x, y, ())
    cap = max_paths_from_env() if cap is None else cap
    surgered = remove_outgoing(prune_to_ancestors(g, xi, yi), xi)
    paths = simple_paths(surgered, xi, yi, cap)
    masks = _blocking_masks(surgered, paths)
    if _blocks_all(0, masks):
        return [CandidateSet(())]

    forbidden = g.des([xi]) | {xi, yi}
    pool = sorted({v for seq in paths for v in seq[1:-1]} - forbidden)
    if len(pool) > max_pool:
        raise SubsetScanLimitError(len(pool), max_pool)

    kept: list[int] = []
    found: list[tuple[int, ...]] = []
    for k in range(1, len(pool) + 1):
        for combo in combinations(pool, k):
            m = 0
            for v in combo:
                m |= 1 << v
            if any(m & s == s for s in kept):
                continue
            if _blocks_all(m, masks):
                kept.append(m)
                found.append(combo)
    # empty only when y -> x, an unblockable back-door path
    return [CandidateSet(g.names_of(c)) for c in found]

