"""Network and dataset file formats.

Network files are line-oriented UTF-8 text::

    # comment
    [variables]
    Rain: no,yes
    Wet: dry,wet
    [edges]
    Rain -> Wet
    [cpts]
    Rain:
    0.8 0.2
    Wet:          # parents: Rain
    0.9 0.1       # Rain=no
    0.2 0.8       # Rain=yes

The ``[cpts]`` section is optional; without it the file describes a bare
graph and variables may omit their states. Undirected edges (``A -- B``) are
only allowed in files without CPTs. CPT rows follow the parents in
variable-declaration order, last parent fastest.

Datasets are CSV with a header row; labels match ``[A-Za-z0-9_]+``.
"""
from __future__ import annotations

import csv
import io as _io
import re
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .dataset import Dataset
from .errors import DataError, GraphError, ParseError, ValidationError
from .graph import MixedGraph
from .network import CptNetwork

TOKEN = re.compile(r"[A-Za-z0-9_]+\Z")
SECTIONS = ("variables", "edges", "cpts")


def _strip_comment(line):
    k = line.find("#")
    return line if k < 0 else line[:k]


def _col(raw, token, start=0):
    k = raw.find(token, start)
    return (k + 1) if k >= 0 else None


def parse_network(text: str) -> CptNetwork | MixedGraph:
    """Parse a network file; returns a :class:`CptNetwork` when CPTs are present."""
    section = None
    seen_sections = set()
    names: list[str] = []
    states: dict[str, list[str] | None] = {}
    var_line: dict[str, int] = {}
    directed, undirected = [], []
    edge_line: dict[frozenset, int] = {}
    blocks: dict[str, list[tuple[int, list[float]]]] = {}
    block_line: dict[str, int] = {}
    current = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = re.fullmatch(r"\[\s*([A-Za-z]+)\s*\]", line)
        if m:
            section = m.group(1).lower()
            if section not in SECTIONS:
                raise ParseError(f"unknown section [{m.group(1)}]", lineno, _col(raw, "[") or 1)
            if section in seen_sections:
                raise ParseError(f"section [{section}] appears twice", lineno, 1)
            seen_sections.add(section)
            current = None
            continue
        if section is None:
            raise ParseError("content before the first section header", lineno, 1)

        if section == "variables":
            name, sep, rest = line.partition(":")
            name = name.strip()
            if not TOKEN.match(name):
                raise ParseError(f"invalid variable name {name!r}", lineno, _col(raw, name) or 1)
            if name in states:
                raise ParseError(f"variable {name!r} declared twice", lineno, _col(raw, name))
            labels = None
            if sep:
                labels = [s.strip() for s in rest.split(",")]
                for lab in labels:
                    if not TOKEN.match(lab):
                        raise ParseError(
                            f"invalid state label {lab!r} for {name}", lineno,
                            _col(raw, lab, raw.find(":")) if lab else raw.find(":") + 2,
                        )
                if len(set(labels)) != len(labels):
                    raise ParseError(f"duplicate state label for {name}", lineno, raw.find(":") + 2)
            names.append(name)
            states[name] = labels
            var_line[name] = lineno

        elif section == "edges":
            m = re.fullmatch(r"(\S+)\s*(->|--|<-)\s*(\S+)", line)
            if not m:
                raise ParseError("expected 'A -> B' or 'A -- B'", lineno, 1)
            a, mark, b = m.groups()
            if mark == "<-":
                a, b, mark = b, a, "->"
            for v in (a, b):
                if v not in states:
                    raise ParseError(f"edge references undeclared variable {v!r}", lineno, _col(raw, v))
            if a == b:
                raise ParseError(f"self-loop on {a!r}", lineno, _col(raw, a))
            key = frozenset((a, b))
            if key in edge_line:
                raise ParseError(
                    f"duplicate edge between {a} and {b} (first on line {edge_line[key]})",
                    lineno, _col(raw, a),
                )
            edge_line[key] = lineno
            (directed if mark == "->" else undirected).append((a, b))

        else:  # cpts
            m = re.fullmatch(r"([A-Za-z0-9_]+)\s*:", line)
            if m:
                current = m.group(1)
                if current not in states:
                    raise ParseError(f"CPT for undeclared variable {current!r}", lineno, _col(raw, current))
                if current in blocks:
                    raise ParseError(f"second CPT block for {current!r}", lineno, _col(raw, current))
                blocks[current] = []
                block_line[current] = lineno
                continue
            if current is None:
                raise ParseError("probability row outside a CPT block", lineno, 1)
            row = []
            pos = 0
            for tok in line.split():
                pos = raw.find(tok, pos)
                try:
                    row.append(float(tok))
                except ValueError:
                    raise ParseError(f"not a probability: {tok!r}", lineno, pos + 1) from None
                pos += len(tok)
            blocks[current].append((lineno, row))

    if not names:
        raise ParseError("no variables declared")
    if undirected and blocks:
        line = min(edge_line[frozenset(e)] for e in undirected)
        raise ParseError("undirected edges are not allowed in a file with CPTs", line, 1)
    try:
        g = MixedGraph.from_edges(names, directed, undirected)
    except GraphError as exc:
        raise ParseError(str(exc)) from None

    if "cpts" not in seen_sections:
        return g

    for name in names:
        if states[name] is None:
            raise ParseError(f"variable {name!r} needs states when CPTs are given", var_line[name], 1)
        if name not in blocks:
            raise ParseError(f"missing CPT block for {name!r}")
    tables = []
    for i, name in enumerate(names):
        rows = blocks[name]
        k = len(states[name])
        want = 1
        for p in g.pa(i):
            want *= len(states[names[p]])
        if len(rows) != want:
            raise ParseError(
                f"CPT for {name!r} has {len(rows)} rows, expected {want}", block_line[name], 1
            )
        for lineno, row in rows:
            if len(row) != k:
                raise ParseError(
                    f"CPT row for {name!r} has {len(row)} entries, expected {k}", lineno, 1
                )
            if any(p < 0 for p in row):
                raise ParseError(f"negative probability in CPT for {name!r}", lineno, 1)
            if abs(sum(row) - 1.0) > 1e-9:
                raise ParseError(
                    f"CPT row for {name!r} sums to {sum(row):.12g}, not 1", lineno, 1
                )
        tables.append(np.array([r for _, r in rows], dtype=float))
    try:
        return CptNetwork(g, tuple(tuple(states[n]) for n in names), tuple(tables))
    except ValidationError as exc:
        raise ParseError(str(exc)) from None


def emit_network(obj: CptNetwork | MixedGraph) -> str:
    """Serialize a network or bare graph in the format read by :func:`parse_network`."""
    if isinstance(obj, CptNetwork):
        g, alphabets = obj.graph, obj.alphabets
    else:
        g, alphabets = obj, None
    out = ["[variables]"]
    for i, name in enumerate(g.names):
        out.append(f"{name}: {','.join(alphabets[i])}" if alphabets else name)
    out.append("[edges]")
    out += [f"{a} -> {b}" for a, b in g.directed_edges()]
    out += [f"{a} -- {b}" for a, b in g.undirected_edges()]
    if alphabets:
        out.append("[cpts]")
        for i, name in enumerate(g.names):
            parents = [g.names[p] for p in g.pa(i)]
            out.append(f"{name}:" + (f"  # parents: {', '.join(parents)}" if parents else ""))
            for row in obj.cpts[i]:
                out.append(" ".join(repr(float(p)) for p in row))
    return "\n".join(out) + "\n"


def read_network(path) -> CptNetwork | MixedGraph:
    return parse_network(Path(path).read_text(encoding="utf-8"))


def write_network(obj, path):
    Path(path).write_text(emit_network(obj), encoding="utf-8")


def read_csv_dataset(text: str, alphabets: Mapping[str, Sequence[str]] | None = None) -> Dataset:
    """Parse CSV text into a :class:`Dataset`.

    Alphabets default to the sorted observed labels of each column. When
    ``alphabets`` is given (for some or all columns) labels are checked
    against it.
    """
    rows = list(csv.reader(_io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows:
        raise DataError("dataset file is empty")
    header = [h.strip() for h in rows[0]]
    for c, h in enumerate(header, start=1):
        if not TOKEN.match(h):
            raise ParseError(f"invalid column name {h!r}", 1, c)
    if len(set(header)) != len(header):
        raise ParseError("duplicate column name in header", 1)
    body = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(row)}", r)
        cells = [c.strip() for c in row]
        for c, lab in enumerate(cells):
            if not TOKEN.match(lab):
                raise ParseError(f"invalid label {lab!r}", r, c + 1)
        body.append(cells)
    alphabets = dict(alphabets or {})
    alpha = []
    for c, name in enumerate(header):
        if name in alphabets:
            known = tuple(alphabets[name])
            allowed = set(known)
            for r, row in enumerate(body, start=2):
                if row[c] not in allowed:
                    raise DataError(
                        f"row {r}, column {name!r}: label {row[c]!r} not in alphabet {list(known)}"
                    )
            alpha.append(known)
        else:
            alpha.append(tuple(sorted({row[c] for row in body})) or ("0",))
    return Dataset.from_labels(header, alpha, body)


def write_csv_dataset(d: Dataset) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(d.variables)
    labels = [np.asarray(a, dtype=object) for a in d.alphabets]
    cols = [labels[c][d.data[:, c]] for c in range(len(d.variables))]
    for row in zip(*cols):
        w.writerow(row)
    return buf.getvalue()


def read_dataset(path, alphabets=None) -> Dataset:
    return read_csv_dataset(Path(path).read_text(encoding="utf-8"), alphabets)
