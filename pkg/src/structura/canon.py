"""Canonical forms and automorphism counts for small graphs.

The canonical form is the relabeling with the smallest upper-triangle
adjacency bit string (row-major, most significant bit first) among the
labelings that respect an isomorphism-invariant equitable partition.
Vertices that are twins inside a cell are interchangeable, so only distinct
arrangements of twin classes are searched; each twin class of size s
contributes a factor s! to the automorphism count.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Sequence

import numpy as np

from . import kernels
from .graph import Graph, RootedGraph, SizeCapExceeded, _bits

CANON_CAP = 10


@dataclass(frozen=True)
class UnlabeledGraph:
    canon: Graph
    aut_size: int

    @property
    def n(self) -> int:
        return self.canon.n

    @property
    def key(self) -> tuple[int, int]:
        return (self.canon.n, self.canon.mask())

    def __lt__(self, other: "UnlabeledGraph") -> bool:
        return (self.n, self.canon.num_edges, self.canon.mask()) < (other.n, other.canon.num_edges, other.canon.mask())


def _refine(rows: tuple[int, ...], colors: tuple[int, ...]) -> list[list[int]]:
    n = len(rows)
    cell_of = [0] * n
    keys = sorted(set((colors[v], bin(rows[v]).count("1")) for v in range(n)))
    index = {k: i for i, k in enumerate(keys)}
    for v in range(n):
        cell_of[v] = index[(colors[v], bin(rows[v]).count("1"))]
    ncells = len(keys)
    while True:
        sig = []
        for v in range(n):
            counts = [0] * ncells
            for u in _bits(rows[v]):
                counts[cell_of[u]] += 1
            sig.append((cell_of[v], tuple(counts)))
        keys = sorted(set(sig))
        if len(keys) == ncells:
            break
        index = {k: i for i, k in enumerate(keys)}
        cell_of = [index[s] for s in sig]
        ncells = len(keys)
    cells: list[list[int]] = [[] for _ in range(ncells)]
    for v in range(n):
        cells[cell_of[v]].append(v)
    return cells


def _twins(rows: tuple[int, ...], u: int, w: int) -> bool:
    mask = ~((1 << u) | (1 << w))
    return rows[u] & mask == rows[w] & mask


@lru_cache(maxsize=1 << 18)
def _canon_rows(rows: tuple[int, ...], colors: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    n = len(rows)
    if n == 0:
        return (), (), 1
    cells = _refine(rows, colors)
    classes: list[list[int]] = []
    cell_classes: list[list[int]] = []
    for cell in cells:
        local: list[int] = []
        for v in cell:
            for c in local:
                if all(_twins(rows, v, w) for w in classes[c]):
                    classes[c].append(v)
                    break
            else:
                classes.append([v])
                local.append(len(classes) - 1)
        cell_classes.append([c for c in local for _ in classes[c]])
    lab, count = kernels.canon_search(np.array(rows, dtype=np.int64), cell_classes, classes)
    aut = count
    for c in classes:
        aut *= factorial(len(c))
    lab = [int(x) for x in lab]
    pos = [0] * n
    for p, v in enumerate(lab):
        pos[v] = p
    new_rows = [0] * n
    for v in range(n):
        r = 0
        for u in _bits(rows[v]):
            r |= 1 << pos[u]
        new_rows[pos[v]] = r
    return tuple(new_rows), tuple(lab), aut


def canonical_labeling(g: Graph, colors: Sequence[int] | None = None) -> tuple[Graph, list[int], int]:
    """(canonical graph, lab, aut) where vertex ``lab[p]`` (1-based) lands at position p+1."""
    if g.n > CANON_CAP:
        raise SizeCapExceeded(f"canonicalize is capped at {CANON_CAP} vertices, got {g.n}")
    cols = tuple(colors) if colors is not None else (0,) * g.n
    rows, lab, aut = _canon_rows(g.rows, cols)
    return Graph(g.n, rows), [v + 1 for v in lab], aut


def canonicalize(g: Graph) -> UnlabeledGraph:
    canon, _, aut = canonical_labeling(g)
    return UnlabeledGraph(canon, aut)


def certificate(g: Graph) -> tuple[int, int]:
    if g.n > CANON_CAP:
        raise SizeCapExceeded(f"canonicalize is capped at {CANON_CAP} vertices, got {g.n}")
    rows, _, _ = _canon_rows(g.rows, (0,) * g.n)
    return (g.n, Graph(g.n, rows).mask())


def rooted_certificate(g: Graph, root: int) -> tuple[int, int]:
    """Certificate of ``g`` rooted at ``root``: the root is placed in its own cell first."""
    colors = tuple(0 if v == root - 1 else 1 for v in range(g.n))
    rows, _, _ = _canon_rows(g.rows, colors)
    return (g.n, Graph(g.n, rows).mask())


def rooted_key(h: RootedGraph) -> tuple[int, int]:
    return rooted_certificate(h.graph, h.root)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.num_edges != h.num_edges or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return certificate(g) == certificate(h)


def automorphism_count_bruteforce(g: Graph) -> int:
    """|Aut(g)| by checking every permutation; an oracle for tests."""
    from itertools import permutations

    edges = set(g.edges())
    count = 0
    for perm in permutations(range(1, g.n + 1)):
        if all(tuple(sorted((perm[u - 1], perm[v - 1]))) in edges for u, v in edges):
            count += 1
    return count
