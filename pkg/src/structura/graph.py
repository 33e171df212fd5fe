"""Labeled simple graphs on vertex set {1..n} stored as packed adjacency rows.

Row ``i`` of a :class:`Graph` is an integer bitmask whose bit ``j`` is set when
vertices ``i+1`` and ``j+1`` are adjacent.  Public functions take and return
1-based vertex labels; the bit-level helpers work 0-based.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence


class StructuraError(Exception):
    """Base class for errors raised by this package."""


class SizeCapExceeded(StructuraError):
    pass


class NotAcrossComponents(StructuraError):
    pass


class InvalidGraph(StructuraError):
    pass


def pair_index(i: int, j: int) -> int:
    """Bit index of the 0-based pair {i, j} in the column-major edge mask."""
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.rows) != self.n:
            raise InvalidGraph(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for i, r in enumerate(self.rows):
            if r & ~full or (r >> i) & 1:
                raise InvalidGraph(f"row {i + 1} has out-of-range bits or a self-loop")
            for j in _bits(r):
                if not (self.rows[j] >> i) & 1:
                    raise InvalidGraph(f"asymmetric adjacency between {i + 1} and {j + 1}")

    # constructors -----------------------------------------------------------

    @classmethod
    def null(cls) -> "Graph":
        return cls(0, ())

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise InvalidGraph(f"self-loop at {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise InvalidGraph(f"edge ({u}, {v}) outside 1..{n}")
            rows[u - 1] |= 1 << (v - 1)
            rows[v - 1] |= 1 << (u - 1)
        return cls(n, tuple(rows))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Graph":
        """Inverse of :meth:`mask`; bit ``j(j-1)/2 + i`` encodes pair (i, j)."""
        rows = [0] * n
        b = 0
        for j in range(1, n):
            for i in range(j):
                if (mask >> b) & 1:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
                b += 1
        return cls(n, tuple(rows))

    # queries ------------------------------------------------------------------

    def mask(self) -> int:
        m = 0
        b = 0
        for j in range(1, self.n):
            rj = self.rows[j]
            for i in range(j):
                if (rj >> i) & 1:
                    m |= 1 << b
                b += 1
        return m

    @property
    def num_edges(self) -> int:
        return sum(_popcount(r) for r in self.rows) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u - 1] >> (v - 1)) & 1)

    def degree(self, v: int) -> int:
        return _popcount(self.rows[v - 1])

    def degrees(self) -> list[int]:
        return [_popcount(r) for r in self.rows]

    def neighbors(self, v: int) -> list[int]:
        return [j + 1 for j in _bits(self.rows[v - 1])]

    def edges(self) -> list[tuple[int, int]]:
        return [(i + 1, j + 1) for i in range(self.n) for j in _bits(self.rows[i] >> (i + 1) << (i + 1))]

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def min_degree(self) -> int:
        return min(self.degrees()) if self.n else 0

    def is_connected(self) -> bool:
        return self.n > 0 and len(components(self)) == 1

    def __str__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"

    # derived graphs -------------------------------------------------------------

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph on ``vertices``, relabeled to 1..m preserving order."""
        vs = sorted(set(vertices))
        index = {v - 1: k for k, v in enumerate(vs)}
        rows = []
        for v in vs:
            r = 0
            for j in _bits(self.rows[v - 1]):
                k = index.get(j)
                if k is not None:
                    r |= 1 << k
            rows.append(r)
        return Graph(len(vs), tuple(rows))

    def remove_vertices(self, vertices: Iterable[int]) -> "Graph":
        drop = set(vertices)
        return self.induced(v for v in self.vertices() if v not in drop)

    def add_edge(self, u: int, v: int) -> "Graph":
        if u == v:
            raise InvalidGraph(f"self-loop at {u}")
        rows = list(self.rows)
        rows[u - 1] |= 1 << (v - 1)
        rows[v - 1] |= 1 << (u - 1)
        return Graph(self.n, tuple(rows))

    def remove_edge(self, u: int, v: int) -> "Graph":
        rows = list(self.rows)
        rows[u - 1] &= ~(1 << (v - 1))
        rows[v - 1] &= ~(1 << (u - 1))
        return Graph(self.n, tuple(rows))

    def contract(self, u: int, v: int) -> "Graph":
        """Contract edge uv: v merges into u, parallel edges and loops dropped."""
        if not self.has_edge(u, v):
            raise InvalidGraph(f"({u}, {v}) is not an edge")
        rows = list(self.rows)
        moved = rows[v - 1] & ~(1 << (u - 1))
        rows[u - 1] |= moved
        for j in _bits(moved):
            rows[j] |= 1 << (u - 1)
        return Graph(self.n, tuple(rows)).remove_vertices([v])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v-1]`` (perm is a 1-based permutation)."""
        rows = [0] * self.n
        for i in range(self.n):
            pi = perm[i] - 1
            r = 0
            for j in _bits(self.rows[i]):
                r |= 1 << (perm[j] - 1)
            rows[pi] = r
        return Graph(self.n, tuple(rows))


@dataclass(frozen=True)
class RootedGraph:
    graph: Graph
    root: int

    def __post_init__(self) -> None:
        if not (1 <= self.root <= self.graph.n):
            raise InvalidGraph(f"root {self.root} outside 1..{self.graph.n}")
        if not self.graph.is_connected():
            raise InvalidGraph("rooted graphs must be connected")


# standard graphs ----------------------------------------------------------------

def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(1, n + 1), 2))


def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidGraph("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def star(n: int) -> Graph:
    """Star with centre 1 and ``n - 1`` leaves."""
    return Graph.from_edges(n, [(1, i) for i in range(2, n + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)])


def diamond() -> Graph:
    """K4 minus an edge."""
    return Graph.from_edges(4, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])


def bowtie() -> Graph:
    """Two triangles sharing one vertex."""
    return Graph.from_edges(5, [(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)])


NAMED_GRAPHS = {
    "K1": lambda: complete(1),
    "K2": lambda: complete(2),
    "K3": lambda: complete(3),
    "K4": lambda: complete(4),
    "K5": lambda: complete(5),
    "K33": lambda: complete_bipartite(3, 3),
    "K23": lambda: complete_bipartite(2, 3),
    "C3": lambda: cycle(3),
    "C4": lambda: cycle(4),
    "C5": lambda: cycle(5),
    "P3": lambda: path(3),
    "diamond": diamond,
    "bowtie": bowtie,
}


def named_graph(name: str) -> Graph:
    try:
        return NAMED_GRAPHS[name]()
    except KeyError:
        raise InvalidGraph(f"unknown graph name {name!r}") from None


# components, fragment, core -------------------------------------------------------

def _component_masks(g: Graph) -> list[int]:
    seen = 0
    out = []
    for v in range(g.n):
        if (seen >> v) & 1:
            continue
        comp = 1 << v
        frontier = comp
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= g.rows[u]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append(comp)
    return out


def components(g: Graph) -> list[frozenset[int]]:
    """Connected components ordered by size descending, then lexicographically."""
    comps = [sorted(j + 1 for j in _bits(c)) for c in _component_masks(g)]
    comps.sort(key=lambda c: (-len(c), c))
    return [frozenset(c) for c in comps]


def big_component(g: Graph) -> frozenset[int]:
    comps = components(g)
    return comps[0] if comps else frozenset()


def fragment(g: Graph) -> Graph:
    """The graph left after discarding the largest component (ties: lexicographic)."""
    if g.n == 0:
        return g
    return g.remove_vertices(big_component(g))


def frag_size(g: Graph) -> int:
    return g.n - len(big_component(g))


def core_vertices(g: Graph) -> frozenset[int]:
    alive = (1 << g.n) - 1
    changed = True
    while changed:
        changed = False
        for v in _bits(alive):
            if _popcount(g.rows[v] & alive) < 2:
                alive &= ~(1 << v)
                changed = True
    return frozenset(j + 1 for j in _bits(alive))


def core2(g: Graph) -> Graph:
    """2-core: the maximal subgraph of minimum degree at least 2 (null for forests)."""
    return g.induced(core_vertices(g))


def core_size(g: Graph) -> int:
    return len(core_vertices(g))


def trim_leaves_in_order(g: Graph, rng: random.Random) -> frozenset[int]:
    """Core vertex set found by deleting a uniformly random leaf at each step."""
    alive = set(g.vertices())
    while True:
        leaves = [v for v in alive if sum(1 for u in g.neighbors(v) if u in alive) == 1]
        if not leaves:
            break
        alive.discard(rng.choice(sorted(leaves)))
    return frozenset(v for v in alive if any(u in alive for u in g.neighbors(v)))


def leaves(g: Graph) -> list[int]:
    return [v for v in g.vertices() if g.degree(v) == 1]


def bridges(g: Graph) -> list[tuple[int, int]]:
    """Edges whose removal increases the number of components (Tarjan low-link)."""
    disc = [-1] * g.n
    low = [0] * g.n
    out: list[tuple[int, int]] = []
    timer = 0
    for s in range(g.n):
        if disc[s] != -1:
            continue
        disc[s] = low[s] = timer
        timer += 1
        stack = [(s, -1, iter(list(_bits(g.rows[s]))))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for u in it:
                if u == parent:
                    continue
                if disc[u] == -1:
                    disc[u] = low[u] = timer
                    timer += 1
                    stack.append((u, v, iter(list(_bits(g.rows[u])))))
                    advanced = True
                    break
                low[v] = min(low[v], disc[u])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[v])
                if low[v] > disc[parent]:
                    out.append((min(parent, v) + 1, max(parent, v) + 1))
    return sorted(out)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """``g`` on 1..n followed by ``h`` relabeled onto n+1..n+m."""
    shifted = tuple(r << g.n for r in h.rows)
    return Graph(g.n + h.n, g.rows + shifted)


def add_bridge(g: Graph, u: int, v: int) -> Graph:
    for comp in components(g):
        if u in comp:
            if v in comp:
                raise NotAcrossComponents(f"{u} and {v} are already connected")
            break
    return g.add_edge(u, v)


def attach(g: Graph, h: RootedGraph, u: int) -> Graph:
    """``g`` plus a disjoint copy of ``h`` with a bridge from ``u`` to the root."""
    return disjoint_union(g, h.graph).add_edge(u, g.n + h.root)


def all_graphs(n: int) -> Iterator[Graph]:
    for m in range(1 << num_pairs(n)):
        yield Graph.from_mask(n, m)
