"""Inner cores: trimming pendant cycle gadgets and leaves down to a fixed point."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .canon import certificate, rooted_certificate
from .classes import GraphClass, min_degree2_of
from .graph import Graph, RootedGraph, SizeCapExceeded, components, cycle, disjoint_union
from .minors import pendant_appearances

SAFE_SET_CAP = 8


@dataclass(frozen=True)
class InnerCoreGadgets:
    """H0 = C_k rooted at r0; H1 adds a pendant root r1; H3 joins three H0 copies to a root r3."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 3:
            raise ValueError("cycle length k must be at least 3")

    @property
    def h0(self) -> RootedGraph:
        return RootedGraph(cycle(self.k), 1)

    @property
    def h1(self) -> RootedGraph:
        return RootedGraph(_pendant(cycle(self.k)), self.k + 1)

    @property
    def h3(self) -> RootedGraph:
        k = self.k
        g = disjoint_union(disjoint_union(cycle(k), cycle(k)), cycle(k))
        g = _pendant(g, [1, k + 1, 2 * k + 1])
        return RootedGraph(g, 3 * k + 1)


def _pendant(g: Graph, attach_to=(1,)) -> Graph:
    rows = list(g.rows)
    new = 0
    for v in attach_to:
        rows[v - 1] |= 1 << g.n
        new |= 1 << (v - 1)
    rows.append(new)
    return Graph(g.n + 1, tuple(rows))


def reduced_class(c: GraphClass, gadgets: InnerCoreGadgets) -> GraphClass:
    """D: members of c with min degree >= 2, no pendant H1 and no component C_k."""
    base = min_degree2_of(c)
    ck = certificate(cycle(gadgets.k))
    h1 = gadgets.h1

    def pred(g: Graph) -> bool:
        if not base.member(g):
            return False
        if any(len(comp) == gadgets.k and certificate(g.induced(comp)) == ck for comp in components(g)):
            return False
        return not pendant_appearances(g, h1)

    return GraphClass(f"D[{c.name};k={gadgets.k}]", pred, connected_only=c.connected_only, parent=base)


def _moves(g: Graph, alive: frozenset[int], h1: RootedGraph) -> list[frozenset[int]]:
    """Vertex sets removable in one step from g[alive]."""
    order = sorted(alive)
    sub = g.induced(order)
    out = []
    for v in sub.vertices():
        if sub.degree(v) == 1:
            out.append(frozenset([order[v - 1]]))
    if len(order) > h1.graph.n:
        for _, side in pendant_appearances(sub, h1):
            out.append(frozenset(order[v - 1] for v in side))
    return out


def trim(g: Graph, gadgets: InnerCoreGadgets, rng: Optional[random.Random] = None, alive: Optional[frozenset[int]] = None) -> frozenset[int]:
    """Run the trimming process on connected ``g``; returns the surviving vertex set.

    Without ``rng`` the first available move is always taken.
    """
    alive = frozenset(g.vertices()) if alive is None else alive
    h1 = gadgets.h1
    while True:
        moves = _moves(g, alive, h1)
        if not moves:
            return alive
        pick = moves[0] if rng is None else rng.choice(moves)
        alive = alive - pick


def classify(g: Graph, terminal: frozenset[int], k: int) -> str:
    if len(terminal) == 1:
        return "a"
    sub = g.induced(sorted(terminal))
    if sub.n == k and certificate(sub) == certificate(cycle(k)):
        return "b"
    return "c"


@dataclass(frozen=True)
class ComponentCore:
    component: frozenset[int]
    terminal: frozenset[int]
    case: str


@dataclass(frozen=True)
class InnerCoreResult:
    graph: Graph
    vertices: frozenset[int]
    parts: tuple[ComponentCore, ...]

    @property
    def cases(self) -> list[str]:
        return [p.case for p in self.parts]


def inner_core(g: Graph, c: GraphClass, gadgets: InnerCoreGadgets, rng: Optional[random.Random] = None) -> InnerCoreResult:
    """iCore(g): the union over components of their case-(c) trimming terminals."""
    parts = []
    keep: set[int] = set()
    for comp in components(g):
        terminal = trim(g, gadgets, rng, frozenset(comp))
        case = classify(g, terminal, gadgets.k)
        parts.append(ComponentCore(comp, terminal, case))
        if case == "c":
            keep |= terminal
    verts = frozenset(keep)
    return InnerCoreResult(g.induced(sorted(verts)), verts, tuple(parts))


def safe_sets(g: Graph, c: GraphClass, gadgets: InnerCoreGadgets, cap: int = SAFE_SET_CAP) -> list[frozenset[int]]:
    """All non-empty W with g[W] in D, by subset search."""
    if g.n > cap:
        raise SizeCapExceeded(f"safe-set search is capped at {cap} vertices, got {g.n}")
    d = reduced_class(c, gadgets)
    out = []
    for size in range(3, g.n + 1):
        for w in combinations(range(1, g.n + 1), size):
            sub = g.induced(w)
            if sub.min_degree() >= 2 and d.member(sub):
                out.append(frozenset(w))
    return out


def maximal_safe_set(g: Graph, c: GraphClass, gadgets: InnerCoreGadgets, cap: int = SAFE_SET_CAP) -> frozenset[int]:
    """Union of all safe sets (empty when there are none)."""
    out: frozenset[int] = frozenset()
    for w in safe_sets(g, c, gadgets, cap):
        out |= w
    return out


def in_e_bullet(h: RootedGraph, c: GraphClass, gadgets: InnerCoreGadgets) -> bool:
    """Whether some trimming order of ``h`` ends at its root alone.

    Also requires h ∈ c and every non-root vertex to have degree at least 2.
    This searches all trimming orders, so it is exponential; keep h small.
    """
    g, root = h.graph, h.root
    if not c.member(g) or any(g.degree(v) < 2 for v in g.vertices() if v != root):
        return False
    h1 = gadgets.h1
    seen: set[frozenset[int]] = set()
    stack = [frozenset(g.vertices())]
    while stack:
        alive = stack.pop()
        if alive == frozenset([root]):
            return True
        if root not in alive or alive in seen:
            continue
        seen.add(alive)
        for mv in _moves(g, alive, h1):
            stack.append(alive - mv)
    return False


def e_bullet_key(h: RootedGraph) -> tuple[int, int]:
    return rooted_certificate(h.graph, h.root)
