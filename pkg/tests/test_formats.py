from __future__ import annotations

import random

import networkx as nx
import pytest

from elcgraphs.formats import (
    from_adjacency_text,
    from_graph6,
    read_graph6_lines,
    to_adjacency_text,
    to_graph6,
)
from elcgraphs.graph import Graph, GraphError, path_graph


def _random_graph(rng, n, p=0.4):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


@pytest.mark.parametrize("n", [1, 2, 5, 13, 62, 63, 64])
def test_graph6_agrees_with_networkx(n):
    rng = random.Random(n)
    g = _random_graph(rng, n)
    ours = to_graph6(g)
    ref = nx.Graph()
    ref.add_nodes_from(range(n))
    ref.add_edges_from(g.edges())
    theirs = nx.to_graph6_bytes(ref, nodes=list(range(n)), header=False).decode().strip()
    assert ours == theirs
    assert from_graph6(ours) == g


def test_known_strings():
    assert to_graph6(path_graph(4)) == "Ch"
    k4 = Graph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    assert to_graph6(k4) == "C~"
    assert from_graph6(">>graph6<<C~") == k4


@pytest.mark.parametrize("bad", ["", "C", "C~~", "C\x7f", "B@"])
def test_bad_graph6(bad):
    with pytest.raises(GraphError):
        from_graph6(bad)


def test_read_lines_skips_blank_and_comments():
    got = list(read_graph6_lines(["Ch", "", "C~\n"]))
    assert [g.n for g in got] == [4, 4]


def test_adjacency_text_round_trip():
    g = path_graph(5)
    assert from_adjacency_text(to_adjacency_text(g)) == g
    with pytest.raises(GraphError):
        from_adjacency_text("01\n11\n")
