from __future__ import annotations

import random

import pytest

from elcgraphs.canonical import canon_rows
from elcgraphs.codes import LinearCode
from elcgraphs.constructions import build
from elcgraphs.enumeration import (
    CENSUS_FIELDS,
    CapacityError,
    Census,
    brute_force_classes,
    census_csv,
    classification_csv,
    classify_preserved,
    connected_counts_from_totals,
    connected_graphs,
    connected_graphs_naive,
    extend_bipartite,
    self_dual_orbit_survey,
    unlabelled_graph_counts,
)
from elcgraphs.graph import Graph
from elcgraphs.orbits import elc_orbit


def test_cycle_index_oracle():
    totals = unlabelled_graph_counts(8)
    assert totals[:6] == [1, 1, 2, 4, 11, 34]
    assert connected_counts_from_totals(totals)[1:] == [1, 1, 2, 6, 21, 112, 853, 11117]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_brute_force_oracle_matches_generation(n):
    assert brute_force_classes(n) == sum(1 for _ in connected_graphs(n))
    assert brute_force_classes(n, True) == sum(1 for _ in connected_graphs(n, True))


def test_connected_counts_to_seven():
    expected = connected_counts_from_totals(unlabelled_graph_counts(7))
    for n in range(1, 8):
        graphs = list(connected_graphs(n))
        assert len(graphs) == expected[n]
        assert len({g.adj for g in graphs}) == len(graphs)
        assert all(g.is_connected() for g in graphs)


@pytest.mark.parametrize("n,bip", [(6, False), (7, False), (8, True)])
def test_orderly_matches_naive(n, bip):
    orderly = sorted(g.adj for g in connected_graphs(n, bip))
    naive = sorted(g.adj for g in connected_graphs_naive(n, bip))
    assert orderly == naive


def test_n4_bipartite_classes():
    got = {g.adj for g in connected_graphs(4, True)}
    want = {canon_rows(build(s).adj) for s in ("s4",)}
    want.add(canon_rows(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]).adj))
    want.add(canon_rows(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).adj))
    assert got == want


def test_generation_cap():
    with pytest.raises(CapacityError):
        next(connected_graphs(11))
    with pytest.raises(ValueError):
        next(connected_graphs(0))


def test_extend_bipartite_count():
    s2 = Graph.from_edges(2, [(0, 1)])
    assert len(list(extend_bipartite([s2]))) == 2
    g = build("S-2(s3)")
    a, b = g.bipartition().sizes
    assert len(list(extend_bipartite([g]))) == 2**a + 2**b - 2
    with pytest.raises(ValueError):
        list(extend_bipartite([build("c3")]))


def test_extension_reps_match_full_enumeration(census):
    # every bipartite connected graph of order <= 8 lies in exactly one counted orbit
    for n in range(2, 9):
        level = census.level(n, "elc", True)
        covered = set()
        for rep in level.reps:
            members = set(elc_orbit(Graph(rep)).members)
            assert not covered & members
            covered |= members
        assert covered == {g.adj for g in connected_graphs(n, True)}
        assert sum(level.sizes) == len(covered)


def test_random_membership_spot_check(census):
    rng = random.Random(1)
    graphs = list(connected_graphs(7))
    reps = set(census.level(7, "elc").reps)
    for g in rng.sample(graphs, 40):
        assert min(elc_orbit(g).members) in reps


@pytest.mark.parametrize(
    "count,cls,n,value",
    [
        ("orbits", "bipartite", 5, 3),
        ("orbits", "bipartite", 8, 43),
        ("orbits", "nonbipartite", 6, 27),
        ("preserved", "bipartite", 8, 3),
        ("preserved", "nonbipartite", 6, 2),
        ("size-two", "bipartite", 5, 2),
        ("size-two", "lc", 6, 2),
        ("size-two", "nonbipartite", 4, 1),
    ],
)
def test_census_examples(census, count, cls, n, value):
    fn = {"orbits": census.orbit_count,
          "preserved": lambda n, c: len(census.preserved(n, c)),
          "size-two": lambda n, c: len(census.size_two(n, c))}[count]
    assert fn(n, cls) == value


def test_preserved_at_most_orbits(census):
    for n in range(3, 8):
        row = census.census_row(n)
        assert set(row) == set(CENSUS_FIELDS)
        for cls in ("bipartite", "nonbipartite"):
            assert 0 <= row[f"elc_preserved_{cls}"] <= row[f"elc_orbits_{cls}"]


def test_census_csv_and_caps(census):
    text = census_csv(census, "preserved", "bipartite", range(2, 7))
    assert text.splitlines() == ["n,elc_preserved_bipartite", "2,1", "3,1", "4,1", "5,1", "6,2"]
    with pytest.raises(CapacityError):
        Census().level(9, "elc")


def test_checkpoint_resume(tmp_path):
    a = Census(tmp_path)
    counts = [a.orbit_count(n, "bipartite") for n in range(2, 8)]
    files = sorted(p.name for p in tmp_path.iterdir())
    assert "elc-bip-n7.g6" in files
    b = Census(tmp_path)
    b._build_level = None  # a resumed run must not rebuild anything
    assert [b.orbit_count(n, "bipartite") for n in range(2, 8)] == counts


def test_parallel_filter_is_deterministic():
    serial = Census().size_two(6, "nonbipartite")
    parallel = Census(jobs=2).size_two(6, "nonbipartite")
    assert serial == parallel


def test_classification_small(census):
    entries = classify_preserved(9, 8, census)
    assert all(e.spec is not None for e in entries)
    by_n = {}
    for e in entries:
        by_n.setdefault((e.bipartite, e.n), set()).add(e.spec_text)
    assert by_n[(True, 8)] == {"s8", "S-2(s4)", "he3"}
    assert by_n[(False, 6)] == {"c6", "C2(s3)"}
    assert classification_csv(entries).startswith("n,class,graph6,spec\n")


def test_self_dual_survey():
    from elcgraphs.codes import code_from_graph

    def code(spec):
        g = build(spec)
        return code_from_graph(g, g.bipartition())

    rows = self_dual_orbit_survey([("he3", code("he3")), ("H(s2)", code("H(s2)")),
                                   ("circ3", code("circ(3)")),
                                   ("rep", LinearCode.from_rows([[1, 1, 1, 1, 1, 1, 1]]))])
    sizes = {r["name"]: r["orbit_size"] for r in rows}
    assert sizes["he3"] == 1 and sizes["H(s2)"] == 1 and sizes["circ3"] == 2
    assert all(r["self_dual"] for r in rows[:3])
