"""Ranking candidate adjustment sets by mutual information with the treatment."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .backdoor import DEFAULT_MAX_POOL, CandidateSet, enumerate_minimal_backdoor_sets
from .dataset import Dataset
from .errors import DataError, ValidationError
from .graph import MixedGraph, require_dag

UNITS = {"nats": 1.0, "bits": 1.0 / math.log(2.0)}
TIE_DECIMALS = 12


def mutual_information(d: Dataset, x: str, s: Iterable[str], unit: str = "nats") -> float:
    """Plug-in mutual information between ``x`` and the joint state of ``s``.

    Probabilities are raw relative frequencies; empty cells contribute 0.
    Returns exactly 0.0 for an empty ``s``.
    """
    s = d.canonical(s)
    d.index(x)
    if x in s:
        raise ValidationError(f"{x!r} cannot be scored against a set containing itself")
    if unit not in UNITS:
        raise ValueError(f"unit must be one of {sorted(UNITS)}")
    if len(d) == 0:
        raise DataError("mutual information needs at least one row")
    if not s:
        return 0.0
    # observed joint states only, so the table never exceeds n cells
    _, s_codes = np.unique(d.data[:, [d.index(v) for v in s]], axis=0, return_inverse=True)
    s_codes = s_codes.reshape(-1)
    n_s = int(s_codes.max()) + 1
    kx = len(d.alphabet(x))
    table = np.bincount(d.column(x) * n_s + s_codes, minlength=kx * n_s).reshape(kx, n_s)
    p = table / len(d)
    px = p.sum(axis=1, keepdims=True)
    ps = p.sum(axis=0, keepdims=True)
    nz = p > 0
    mi = float(np.sum(p[nz] * np.log(p[nz] / (px @ ps)[nz])))
    return max(mi, 0.0) * UNITS[unit]


@dataclass
class SelectionReport:
    x: str
    y: str
    ranked: list[CandidateSet]
    chosen: CandidateSet
    ties_broken: bool
    unit: str = "nats"
    # filled when the selection ran on one member of a CPDAG's class
    dag: MixedGraph | None = field(default=None, repr=False)
    class_size: int | None = None

    def to_dict(self) -> dict:
        out = {
            "x": self.x,
            "y": self.y,
            "unit": self.unit,
            "chosen": list(self.chosen.members),
            "chosen_score": self.chosen.mi_score,
            "ties_broken": self.ties_broken,
            "ranked": [
                {"members": list(c.members), "mi": c.mi_score} for c in self.ranked
            ],
        }
        if self.dag is not None:
            out["dag"] = {
                "directed": [list(e) for e in self.dag.directed_edges()],
            }
            out["class_size"] = self.class_size
        return out


def rank_candidates(
    g: MixedGraph, d: Dataset, x: str, candidates: list[CandidateSet], unit: str = "nats"
) -> tuple[list[CandidateSet], bool]:
    """Score and sort candidates; ties fall back to size, then node order."""
    scored = [c.with_score(mutual_information(d, x, c.members, unit)) for c in candidates]
    key = lambda c: (  # noqa: E731
        round(c.mi_score, TIE_DECIMALS),
        len(c),
        tuple(g.index(m) for m in c.members),
    )
    scored.sort(key=key)
    ties = len(scored) > 1 and key(scored[0])[0] == key(scored[1])[0]
    return scored, ties


def check_coverage(g: MixedGraph, d: Dataset):
    missing = [v for v in g.names if v not in d.variables]
    if missing:
        raise DataError("dataset lacks graph variable(s): " + ", ".join(missing))


def select_adjustment(
    g: MixedGraph,
    x: str,
    y: str,
    d: Dataset,
    *,
    unit: str = "nats",
    max_pool: int = DEFAULT_MAX_POOL,
    cap: int | None = None,
) -> SelectionReport:
    """Pick the minimal back-door set least informative about ``x``."""
    require_dag(g, "select_adjustment")
    check_coverage(g, d)
    if len(d) == 0:
        raise DataError("dataset has no rows")
    x, y = g.names[g.index(x)], g.names[g.index(y)]
    candidates = enumerate_minimal_backdoor_sets(g, x, y, max_pool=max_pool, cap=cap)
    if not candidates:
        raise ValidationError(f"no back-door set exists: {y} is a parent of {x}")
    ranked, ties = rank_candidates(g, d, x, candidates, unit)
    return SelectionReport(x, y, ranked, ranked[0], ties, unit)
