"""Interventional distributions by stratified (back-door) adjustment."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

import numpy as np

from .dataset import Dataset
from .errors import DataError, EmptyStratumError, UnestimableInterventionError, ValidationError

SPARSE_THRESHOLD = 5


def estimate_conditional(d: Dataset, y: str, given: Mapping[str, object] | None = None):
    """Relative frequencies of ``y`` among rows matching ``given``.

    Returns ``(probabilities, support)``. With zero support the probability
    vector is all-NaN; what to substitute is the caller's decision.
    """
    given = dict(given or {})
    if y in given:
        raise ValidationError(f"{y!r} cannot be both the target and conditioned on")
    mask = np.ones(len(d), dtype=bool)
    for name, label in given.items():
        mask &= d.column(name) == d.category_index(name, label)
    ky = len(d.alphabet(y))
    counts = np.bincount(d.column(y)[mask], minlength=ky)
    support = int(counts.sum())
    if support == 0:
        return np.full(ky, np.nan), 0
    return counts / support, support


@dataclass
class StratumDiagnostics:
    """Sample counts behind an adjustment.

    ``counts[j, s]`` is the number of rows with X = j in stratum ``s``;
    ``weights[s]`` is the empirical P(Z = s). ``fallbacks`` lists
    ``(x_label, stratum)`` pairs whose conditional was replaced because no row
    matched while the stratum itself had positive weight; ``sparse`` lists the
    pairs with fewer than ``sparse_threshold`` (but at least one) samples.
    """

    strata: list[tuple[str, ...]]
    weights: np.ndarray
    counts: np.ndarray
    fallbacks: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)
    sparse: list[tuple[str, tuple[str, ...], int]] = field(default_factory=list)
    sparse_threshold: int = SPARSE_THRESHOLD


@dataclass
class InterventionResult:
    x_variable: str
    y_variable: str
    adjustment: tuple[str, ...]
    x_categories: tuple[str, ...]
    y_categories: tuple[str, ...]
    per_x: np.ndarray  # (|X|, |Y|)
    diagnostics: StratumDiagnostics
    weights_exact: list[tuple[int, int]] = field(default_factory=list, repr=False)

    def distribution(self, x_label) -> np.ndarray:
        return self.per_x[self._x(x_label)]

    def _x(self, label):
        if isinstance(label, (int, np.integer)) and 0 <= label < len(self.x_categories):
            return int(label)
        if label in self.x_categories:
            return self.x_categories.index(label)
        raise DataError(f"{label!r} is not a category of {self.x_variable!r}")

    def _y(self, label):
        if isinstance(label, (int, np.integer)) and 0 <= label < len(self.y_categories):
            return int(label)
        if label in self.y_categories:
            return self.y_categories.index(label)
        raise DataError(f"{label!r} is not a category of {self.y_variable!r}")

    def to_dict(self) -> dict:
        diag = self.diagnostics
        return {
            "x": self.x_variable,
            "y": self.y_variable,
            "adjustment": list(self.adjustment),
            "x_categories": list(self.x_categories),
            "y_categories": list(self.y_categories),
            "per_x": {
                xl: dict(zip(self.y_categories, map(float, row)))
                for xl, row in zip(self.x_categories, self.per_x)
            },
            "strata": [
                {
                    "values": list(s),
                    "weight": float(diag.weights[k]),
                    "weight_fraction": list(self.weights_exact[k]) if self.weights_exact else None,
                    "counts": {xl: int(diag.counts[j, k]) for j, xl in enumerate(self.x_categories)},
                }
                for k, s in enumerate(diag.strata)
            ],
            "fallbacks": [{"x": xl, "stratum": list(s)} for xl, s in diag.fallbacks],
            "sparse": [{"x": xl, "stratum": list(s), "count": c} for xl, s, c in diag.sparse],
        }


def do_effect(
    d: Dataset,
    x: str,
    y: str,
    z: Iterable[str] = (),
    *,
    strict: bool = False,
    smoothing: float = 0.0,
    sparse_threshold: int = SPARSE_THRESHOLD,
) -> InterventionResult:
    """Estimate P(y | do(x = x_j)) for every category x_j by adjusting for ``z``.

    Each x_j mixes the stratum conditionals P(y | x_j, z) with weights P(z).
    A stratum with positive weight but no rows at x_j uses P(y | x_j) instead
    and is reported in the diagnostics; ``strict=True`` raises instead.
    ``smoothing`` adds a pseudo-count to every (x, z, y) cell.
    """
    z = d.canonical(z)
    if x == y:
        raise ValidationError("treatment and outcome must differ")
    if x in z or y in z:
        raise ValidationError("adjustment set must exclude treatment and outcome")
    if len(d) == 0:
        raise DataError("dataset has no rows")
    if smoothing < 0:
        raise ValidationError("smoothing must be non-negative")
    xa, ya = d.alphabet(x), d.alphabet(y)
    kx, ky = len(xa), len(ya)
    s_codes, n_strata = d.encode(z)
    xcol, ycol = d.column(x), d.column(y)

    cells = np.bincount(
        (xcol * n_strata + s_codes) * ky + ycol, minlength=kx * n_strata * ky
    ).reshape(kx, n_strata, ky)
    stratum_n = cells.sum(axis=(0, 2))
    weights = stratum_n / len(d)
    per_xz = cells.sum(axis=2)
    x_totals = per_xz.sum(axis=1)

    strata = list(product(*(d.alphabet(v) for v in z))) if z else [()]
    per_x = np.zeros((kx, ky))
    fallbacks, sparse = [], []
    for j in range(kx):
        if x_totals[j] == 0:
            raise UnestimableInterventionError(x, xa[j])
        marginal = (cells[j].sum(axis=0) + smoothing * n_strata) / (
            x_totals[j] + smoothing * n_strata * ky
        )
        acc = np.zeros(ky)
        for s in np.flatnonzero(stratum_n):
            n_js = per_xz[j, s]
            if n_js == 0 and smoothing == 0:
                if strict:
                    raise EmptyStratumError(
                        f"no rows with {x}={xa[j]} in stratum {dict(zip(z, strata[s]))}"
                    )
                cond = marginal
                fallbacks.append((xa[j], strata[s]))
            else:
                cond = (cells[j, s] + smoothing) / (n_js + smoothing * ky)
                if 0 < n_js < sparse_threshold:
                    sparse.append((xa[j], strata[s], int(n_js)))
            acc += weights[s] * cond
        per_x[j] = acc / acc.sum()

    diag = StratumDiagnostics(strata, weights, per_xz, fallbacks, sparse, sparse_threshold)
    exact = [(int(c), len(d)) for c in stratum_n]
    return InterventionResult(x, y, z, xa, ya, per_x, diag, exact)


def average_causal_effect(r: InterventionResult, x0, x1, y_target) -> float:
    """P(y_target | do(x1)) - P(y_target | do(x0))."""
    k = r._y(y_target)
    return float(r.per_x[r._x(x1), k] - r.per_x[r._x(x0), k])
