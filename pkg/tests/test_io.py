from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavs import CptNetwork, MixedGraph, emit_network, parse_network, random_network, read_csv_dataset, write_csv_dataset
from cavs.errors import DataError, ParseError
from cavs.io import read_network, write_network

RAIN = """\
# comment line
[variables]
Rain: no,yes
Wet: dry,wet   # trailing comment
[edges]
Rain -> Wet
[cpts]
Rain:
0.8 0.2
Wet:
0.9 0.1
0.2 0.8
"""


def test_parse_small_network():
    net = parse_network(RAIN)
    assert isinstance(net, CptNetwork)
    assert net.graph.directed_edges() == [("Rain", "Wet")]
    assert net.probability("Wet", "wet", {"Rain": "yes"}) == 0.8


def test_bare_graph_and_reverse_arrow():
    g = parse_network("[variables]\nA\nB\nC\n[edges]\nB <- A\nB -- C\n")
    assert isinstance(g, MixedGraph)
    assert g.directed_edges() == [("A", "B")] and g.undirected_edges() == [("B", "C")]


@pytest.mark.parametrize(
    "text, line",
    [
        ("[variables]\nA\n[bogus]\n", 3),
        ("A\n[variables]\n", 1),
        ("[variables]\nA\nA\n", 3),
        ("[variables]\nA: x,x\n", 2),
        ("[variables]\nA\n[edges]\nA -> Q\n", 4),
        ("[variables]\nA\nB\n[edges]\nA -> B\nB -> A\n", 6),
        ("[variables]\nA\n[edges]\nA -> A\n", 4),
        ("[variables]\nA\nB\n[edges]\nA => B\n", 5),
        ("[variables]\nA: a,b\n[cpts]\nA:\n0.5 0.6\n", 5),
        ("[variables]\nA: a,b\n[cpts]\nA:\n0.5 zero\n", 5),
        ("[variables]\nA: a,b\n[cpts]\n0.5 0.5\n", 4),
        ("[variables]\nA: a,b\nB: a,b\n[edges]\nA -> B\n[cpts]\nA:\n0.5 0.5\nB:\n0.5 0.5\n", 9),
        ("[variables]\nA\nB: a,b\n[edges]\nA -- B\n[cpts]\nA:\n1\nB:\n0.5 0.5\n", 5),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_network(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_cycle_reported_as_parse_error():
    with pytest.raises(ParseError, match="cycle"):
        parse_network("[variables]\nA\nB\nC\n[edges]\nA -> B\nB -> C\nC -> A\n")


def test_missing_block_and_empty_file():
    with pytest.raises(ParseError, match="missing CPT"):
        parse_network("[variables]\nA: a,b\nB: a\n[cpts]\nA:\n0.5 0.5\n")
    with pytest.raises(ParseError, match="no variables"):
        parse_network("# nothing\n")


def test_file_round_trip(tmp_path):
    net = random_network(8, 10, 3, seed=4)
    write_network(net, tmp_path / "n.net")
    assert read_network(tmp_path / "n.net") == net


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2**32), st.integers(2, 4))
def test_emit_parse_round_trip(n, seed, card):
    net = random_network(n, min(n, n * (n - 1) // 2), card, seed)
    text = emit_network(net)
    again = parse_network(text)
    assert again == net
    assert emit_network(again) == text


def test_csv_round_trip_and_alphabets():
    d = read_csv_dataset("A,B\nx,1\ny,0\nx,0\n")
    assert d.alphabets == (("x", "y"), ("0", "1"))
    assert read_csv_dataset(write_csv_dataset(d)) == d
    d2 = read_csv_dataset("A\nx\n", {"A": ["x", "y", "z"]})
    assert d2.alphabet("A") == ("x", "y", "z")


def test_csv_errors():
    with pytest.raises(DataError, match="empty"):
        read_csv_dataset("")
    with pytest.raises(ParseError) as info:
        read_csv_dataset("A,B\n1,2\n3\n")
    assert info.value.line == 3
    with pytest.raises(ParseError):
        read_csv_dataset("A,A\n1,2\n")
    with pytest.raises(ParseError):
        read_csv_dataset("A\nbad label\n")
    with pytest.raises(DataError, match="row 3"):
        read_csv_dataset("A\nx\nq\n", {"A": ["x"]})
