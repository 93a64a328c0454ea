import itertools
import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import brute_chi

from unitdist.coloring import verify_coloring
from unitdist.errors import BudgetExceeded
from unitdist.field import sq_distance
from unitdist.graph import UDGraph
from unitdist.solver import (
    MOSER_EDGES,
    exact_chromatic,
    fixture,
    fixture_points,
    greedy_dsatur,
    max_clique,
)


def cycle(n):
    return UDGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return UDGraph.from_edges(n, itertools.combinations(range(n), 2))


def wheel(n):
    return UDGraph.from_edges(n + 1, [(0, i) for i in range(1, n + 1)] + [(i, i % n + 1) for i in range(1, n + 1)])


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return UDGraph.from_edges(10, outer + inner + spokes)


CORPUS = {
    "triangle": fixture("triangle-sqrt3"),
    "k4-q4": fixture("k4-q4"),
    "moser": fixture("moser-spindle"),
    "c5": cycle(5),
    "c6": cycle(6),
    "c7": cycle(7),
    "k5": complete(5),
    "w5": wheel(5),
    "w6": wheel(6),
    "edgeless": UDGraph.from_edges(5, []),
    "path": UDGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)]),
}


def test_moser_fixture_shape():
    g = fixture("moser-spindle")
    assert g.n == 7 and len(g.edges) == 11 == len(MOSER_EDGES)
    assert g.points is None
    assert sorted(len(a) for a in g.adjacency) == [3, 3, 3, 3, 3, 3, 4]


def test_k4_fixture_exact_distances():
    pts = fixture_points("k4-q4")
    dists = [sq_distance(p, q) for p, q in itertools.combinations(pts, 2)]
    assert dists == [1] * 6
    assert len(fixture("k4-q4").edges) == 6


def test_triangle_lattice_fixtures():
    assert len(fixture("triangle-sqrt3").edges) == 3
    g = fixture("trilattice-19")
    assert g.n == 19
    # hexagonal patch of radius 2: 3*r*(3r+1) = 42 lattice edges
    assert len(g.edges) == 42
    assert sorted(len(a) for a in g.adjacency).count(6) == 7


def test_unknown_fixture():
    with pytest.raises(ValueError, match="unknown fixture"):
        fixture("petersen")


def test_dsatur_examples():
    assert max(greedy_dsatur(fixture("triangle-sqrt3"))) + 1 == 3
    assert set(greedy_dsatur(UDGraph.from_edges(5, []))) == {0}
    moser = greedy_dsatur(fixture("moser-spindle"))
    assert verify_coloring(fixture("moser-spindle"), moser) == []
    assert max(moser) + 1 == 4


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_dsatur_proper(name):
    g = CORPUS[name]
    assert verify_coloring(g, greedy_dsatur(g)) == []


@pytest.mark.parametrize(
    "name, chi, method",
    [
        ("triangle", 3, "clique"),
        ("k4-q4", 4, "clique"),
        ("moser", 4, "exhaustive-search"),
        ("c5", 3, "exhaustive-search"),
        ("c6", 2, "clique"),
        ("k5", 5, "clique"),
        ("w5", 4, "exhaustive-search"),
        ("edgeless", 1, "clique"),
    ],
)
def test_exact_examples(name, chi, method):
    g = CORPUS[name]
    cert = exact_chromatic(g, 8)
    assert (cert.chi, cert.lower_bound_method) == (chi, method)
    cert.check(g)


def test_petersen():
    cert = exact_chromatic(petersen(), 8)
    assert cert.chi == 3


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_exact_matches_brute_force(name):
    g = CORPUS[name]
    expected = brute_chi(g, 4)
    try:
        got = exact_chromatic(g, 4).chi
    except BudgetExceeded:
        got = None
    assert got == expected


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.data())
def test_random_small_graphs_against_brute_force(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    g = UDGraph.from_edges(n, edges)
    expected = brute_chi(g, 4)
    if expected is None:
        with pytest.raises(BudgetExceeded):
            exact_chromatic(g, 4)
    else:
        cert = exact_chromatic(g, 4)
        assert cert.chi == expected
        cert.check(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_permutation_invariance(seed):
    rng = random.Random(seed)
    g = rng.choice([CORPUS["moser"], CORPUS["w5"], fixture("trilattice-19"), petersen()])
    perm = list(range(g.n))
    rng.shuffle(perm)
    assert exact_chromatic(g.permuted(perm)).chi == exact_chromatic(g).chi


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_adding_an_edge_never_lowers_chi(seed):
    rng = random.Random(seed)
    g = rng.choice(list(CORPUS.values()))
    missing = [(i, j) for i, j in itertools.combinations(range(g.n), 2) if (i, j) not in g.edge_set]
    if not missing:
        return
    h = g.with_edge(*rng.choice(missing))
    assert exact_chromatic(h, 8).chi >= exact_chromatic(g, 8).chi


def test_budget_exceeded_carries_upper_bound():
    with pytest.raises(BudgetExceeded) as info:
        exact_chromatic(complete(5), 3)
    assert info.value.upper_bound == 5
    with pytest.raises(BudgetExceeded, match="budget exceeded"):
        exact_chromatic(fixture("moser-spindle"), 3)


def test_vertex_cap():
    with pytest.raises(ValueError, match="at most 64"):
        exact_chromatic(cycle(65))
    assert exact_chromatic(cycle(64)).chi == 2
    assert exact_chromatic(cycle(63)).chi == 3


def test_max_clique():
    assert len(max_clique(complete(6))) == 6
    assert len(max_clique(fixture("moser-spindle"))) == 3
    assert len(max_clique(petersen())) == 2


def test_determinism():
    a = exact_chromatic(fixture("trilattice-19"))
    b = exact_chromatic(fixture("trilattice-19"))
    assert a == b


def test_moser_timing():
    t0 = time.perf_counter()
    exact_chromatic(fixture("moser-spindle"))
    assert time.perf_counter() - t0 < 1
