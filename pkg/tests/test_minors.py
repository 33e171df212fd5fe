import random

import pytest

from oracles import is_minor_bruteforce
from structura.graph import (
    Graph,
    RootedGraph,
    SizeCapExceeded,
    complete,
    complete_bipartite,
    cycle,
    diamond,
    disjoint_union,
    named_graph,
    path,
    star,
)
from structura.inventory import all_unlabeled
from structura.labeled import minor_bitmap
from structura.minors import contains_minor, max_disjoint_copies, pendant_appearances


def test_known_minors():
    assert contains_minor(complete(5), complete(4))
    assert not contains_minor(cycle(6), complete(4))
    assert contains_minor(cycle(6), cycle(3))
    assert not contains_minor(path(5), cycle(3))
    assert contains_minor(complete_bipartite(3, 3), complete(4))
    assert not contains_minor(complete_bipartite(2, 3), complete(4))
    assert contains_minor(Graph.empty(3), Graph.null())


def test_petersen_has_k5_minor():
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(6 + i, 6 + (i + 2) % 5) for i in range(5)]
    g = Graph.from_edges(10, outer + spokes + inner)
    assert contains_minor(g, complete(5))
    assert contains_minor(g, complete_bipartite(3, 3))


HS = [complete(3), cycle(4), complete(4), diamond(), named_graph("K23"), path(3), Graph.empty(2)]


@pytest.mark.parametrize("h", HS, ids=lambda h: f"n{h.n}m{h.num_edges}")
def test_matches_branch_set_oracle(h):
    for n in range(h.n, 7):
        gs = all_unlabeled(n)
        if n == 6:
            gs = random.Random(n).sample(gs, 60)
        for u in gs:
            assert contains_minor(u.canon, h) == is_minor_bruteforce(u.canon, h)


@pytest.mark.parametrize("h", [complete(3), complete(4), named_graph("K23")], ids=["K3", "K4", "K23"])
def test_bitmap_matches_search(h):
    for n in range(h.n, 7):
        bm = minor_bitmap(h, n)
        rng = random.Random(n)
        m = n * (n - 1) // 2
        for mask in (range(1 << m) if n <= 5 else (rng.getrandbits(m) for _ in range(800))):
            assert bool(bm[mask]) == contains_minor(Graph.from_mask(n, mask), h)


def test_cap():
    with pytest.raises(SizeCapExceeded):
        contains_minor(Graph.empty(12), complete(3), cap=11)


def test_pendant_appearances():
    tri = disjoint_union(complete(3), Graph.empty(1)).add_edge(3, 4)
    hits = pendant_appearances(tri, RootedGraph(complete(1), 1))
    assert hits == [((3, 4), frozenset({4}))]
    p = path(4)
    edge = RootedGraph(complete(2), 1)
    assert sorted((e, sorted(w)) for e, w in pendant_appearances(p, edge)) == [((2, 3), [1, 2]), ((2, 3), [3, 4])]
    assert pendant_appearances(complete(4), edge) == []


def test_max_disjoint_copies():
    assert max_disjoint_copies(disjoint_union(complete(3), complete(3)), complete(3)) == 2
    assert max_disjoint_copies(complete(5), complete(3)) == 1
    assert max_disjoint_copies(complete(6), complete(3)) == 2
    assert max_disjoint_copies(star(5), path(2)) == 1
    assert max_disjoint_copies(cycle(6), path(2)) == 3
