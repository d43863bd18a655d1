"""Categorical datasets stored as integer-coded numpy arrays."""
from __future__ import annotations

from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError, LimitError, UnknownVariableError

MAX_JOINT_STATES = 1_000_000


class Dataset:
    """A table of categorical samples.

    ``data`` has one row per record and one column per variable; each cell is
    the index of the category within that variable's alphabet.
    """

    def __init__(self, variables: Sequence[str], alphabets: Sequence[Sequence[str]], data):
        self.variables = tuple(variables)
        self.alphabets = tuple(tuple(a) for a in alphabets)
        if len(self.alphabets) != len(self.variables):
            raise DataError("one alphabet per variable is required")
        if len(set(self.variables)) != len(self.variables):
            raise DataError("duplicate variable names")
        for name, alpha in zip(self.variables, self.alphabets):
            if not alpha:
                raise DataError(f"variable {name!r} has an empty alphabet")
            if len(set(alpha)) != len(alpha):
                raise DataError(f"variable {name!r} has duplicate categories")
        arr = np.asarray(data, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, len(self.variables))
        if arr.ndim != 2 or arr.shape[1] != len(self.variables):
            raise DataError(
                f"data must have shape (rows, {len(self.variables)}), got {arr.shape}"
            )
        sizes = np.array([len(a) for a in self.alphabets], dtype=np.int64)
        if arr.shape[0] and ((arr < 0).any() or (arr >= sizes).any()):
            bad = np.argwhere((arr < 0) | (arr >= sizes))[0]
            raise DataError(
                f"row {bad[0]}: category index {arr[bad[0], bad[1]]} out of range "
                f"for {self.variables[bad[1]]!r}"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        self.data = arr
        self._pos = {v: i for i, v in enumerate(self.variables)}

    @classmethod
    def from_labels(cls, variables, alphabets, rows: Iterable[Sequence[str]]) -> "Dataset":
        lookup = [{lab: k for k, lab in enumerate(a)} for a in alphabets]
        coded = []
        for r, row in enumerate(rows):
            try:
                coded.append([lookup[c][lab] for c, lab in enumerate(row)])
            except KeyError as exc:
                raise DataError(f"row {r}: unknown label {exc.args[0]!r}") from None
        return cls(variables, alphabets, np.array(coded, dtype=np.int64).reshape(-1, len(variables)))

    def __len__(self):
        return self.data.shape[0]

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]

    def __repr__(self):
        return f"Dataset({len(self)} rows, variables={list(self.variables)})"

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.alphabets == other.alphabets
            and np.array_equal(self.data, other.data)
        )

    __hash__ = None

    def index(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise UnknownVariableError(name) from None

    def alphabet(self, name: str) -> tuple[str, ...]:
        return self.alphabets[self.index(name)]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.index(name)]

    def category_index(self, name: str, label) -> int:
        alpha = self.alphabet(name)
        if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
            if 0 <= label < len(alpha):
                return int(label)
        elif label in alpha:
            return alpha.index(label)
        raise DataError(f"{label!r} is not a category of {name!r}")

    def take(self, rows) -> "Dataset":
        return Dataset(self.variables, self.alphabets, self.data[np.asarray(rows)])

    def canonical(self, names: Iterable[str]) -> tuple[str, ...]:
        """Names sorted by their column index."""
        return tuple(sorted(set(names), key=self.index))

    def encode(self, names: Sequence[str]) -> tuple[np.ndarray, int]:
        """Mixed-radix code of each row's joint state over ``names``.

        The last name varies fastest, matching :func:`joint_states`. Returns
        the codes and the size of the joint alphabet.
        """
        codes = np.zeros(len(self), dtype=np.int64)
        size = 1
        for name in names:
            k = len(self.alphabet(name))
            size *= k
            if size > MAX_JOINT_STATES:
                raise LimitError("joint state space", MAX_JOINT_STATES)
            codes = codes * k + self.column(name)
        return codes, size

    def counts(self, name: str) -> np.ndarray:
        return np.bincount(self.column(name), minlength=len(self.alphabet(name)))


def joint_states(d: Dataset, s: Iterable[str]) -> list[tuple[str, ...]]:
    """Every combination of categories of ``s``, canonical order.

    Variables are ordered by column index and the last one varies fastest.
    """
    names = d.canonical(s)
    if not names:
        raise DataError("joint_states needs at least one variable")
    return list(product(*(d.alphabet(n) for n in names)))


def dataset_from_columns(columns: Mapping[str, Sequence[str]], alphabets=None) -> Dataset:
    """Build a dataset from label columns; alphabets default to sorted labels."""
    names = list(columns)
    if alphabets is None:
        alphabets = {n: sorted(set(columns[n])) for n in names}
    rows = list(zip(*(columns[n] for n in names)))
    return Dataset.from_labels(names, [alphabets[n] for n in names], rows)
