"""Graph classes: built-ins, JSON definitions and bounded property checks."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from math import exp
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from . import labeled
from .canon import certificate
from .graph import (
    Graph,
    RootedGraph,
    StructuraError,
    attach,
    components,
    core2,
    disjoint_union,
    leaves,
    named_graph,
    num_pairs,
)
from .inventory import all_unlabeled, class_unlabeled
from .minors import contains_minor


class UnknownClass(StructuraError):
    pass


@dataclass(frozen=True)
class ClassFlags:
    decomposable: bool = False
    bridge_addable: bool = False
    trimmable: bool = False
    subgraph_closed: bool = False
    minor_closed: bool = False

    def declared(self) -> list[str]:
        return [k for k, v in self.__dict__.items() if v]


ChunkFn = Callable[[int, dict, int, int], np.ndarray]


@dataclass(frozen=True, eq=False)
class GraphClass:
    """A set of graphs closed under isomorphism.

    ``chunk`` optionally evaluates membership for a slice of labeled masks on
    [n] from precomputed features; without it, labeled tables fall back to
    calling ``predicate`` on each mask.
    """

    name: str
    predicate: Callable[[Graph], bool]
    flags: ClassFlags = ClassFlags()
    known_rho: Optional[float] = None
    connected_only: bool = False
    hereditary: bool = False
    parent: Optional["GraphClass"] = None
    chunk: Optional[ChunkFn] = None
    excluded: tuple[Graph, ...] = ()

    def member(self, g: Graph) -> bool:
        return bool(self.predicate(g))

    __contains__ = member

    def labeled_chunk(self, n: int, feats: dict, start: int, stop: int) -> np.ndarray:
        if self.chunk is not None:
            return self.chunk(n, feats, start, stop)
        return np.fromiter((self.predicate(Graph.from_mask(n, m)) for m in range(start, stop)), dtype=bool, count=stop - start)

    def labeled_bitmap(self, n: int) -> np.ndarray:
        """Membership of every labeled graph on [n], indexed by edge mask."""
        return self.labeled_chunk(n, labeled.features(n), 0, 1 << num_pairs(n))

    def __repr__(self) -> str:
        return f"GraphClass({self.name})"


# built-in classes ------------------------------------------------------------------

ALL_FLAGS = ClassFlags(True, True, True, True, True)


def _ones(n, f, a, b):
    return np.ones(b - a, dtype=bool)


def all_graphs_class() -> GraphClass:
    return GraphClass("all", lambda g: True, ALL_FLAGS, hereditary=True, chunk=_ones)


def edgeless() -> GraphClass:
    return GraphClass(
        "edgeless",
        lambda g: g.num_edges == 0,
        ClassFlags(decomposable=True, subgraph_closed=True, minor_closed=True),
        hereditary=True,
        chunk=lambda n, f, a, b: f["edges"] == 0,
    )


def at_most_edges(k: int) -> GraphClass:
    if k < 0:
        raise UnknownClass("atMostEdges needs k >= 0")
    return GraphClass(
        f"atMostEdges({k})",
        lambda g: g.num_edges <= k,
        ClassFlags(decomposable=k == 0, subgraph_closed=True, minor_closed=True),
        hereditary=True,
        chunk=lambda n, f, a, b: f["edges"] <= k,
    )


def forests() -> GraphClass:
    return GraphClass(
        "forests",
        lambda g: g.num_edges + len(components(g)) == g.n,
        ALL_FLAGS,
        known_rho=exp(-1.0),
        hereditary=True,
        chunk=lambda n, f, a, b: f["edges"].astype(np.int64) + f["ncomp"] == n,
    )


def _minor_chunk(hs: tuple[Graph, ...]) -> ChunkFn:
    def run(n, f, a, b):
        out = np.ones(b - a, dtype=bool)
        for h in hs:
            out &= ~labeled.minor_bitmap(h, n)[a:b]
        return out

    return run


def excluded_minors(hs: Iterable[Graph], name: str | None = None) -> GraphClass:
    """Graphs with no member of ``hs`` as a minor."""
    hs = tuple(hs)
    if not hs:
        return all_graphs_class()
    connected = all(h.is_connected() for h in hs)
    two_connected = all(h.n >= 3 and h.is_connected() and all(h.remove_vertices([v]).is_connected() for v in h.vertices()) for h in hs)
    mindeg2 = all(h.n > 0 and h.min_degree() >= 2 for h in hs)
    if name is None:
        labels = []
        for h in hs:
            label = next((k for k in ("K1", "K2", "K3", "K4", "K5", "K33", "K23", "C4", "C5", "P3", "diamond", "bowtie") if certificate(named_graph(k)) == certificate(h)), None)
            labels.append(label or f"g{h.n}_{h.mask()}")
        name = f"excludedMinors({','.join(sorted(labels))})"
    return GraphClass(
        name,
        lambda g: not any(contains_minor(g, h) for h in hs),
        ClassFlags(
            decomposable=connected,
            bridge_addable=two_connected,
            trimmable=mindeg2,
            subgraph_closed=True,
            minor_closed=True,
        ),
        hereditary=True,
        chunk=_minor_chunk(hs),
        excluded=hs,
    )


def planar() -> GraphClass:
    return excluded_minors([named_graph("K5"), named_graph("K33")], name="planar")


def outerplanar() -> GraphClass:
    return excluded_minors([named_graph("K4"), named_graph("K23")], name="outerplanar")


def diamond_free() -> GraphClass:
    return excluded_minors([named_graph("diamond")], name="diamondFree")


def min_degree2_of(c: GraphClass) -> GraphClass:
    """c^{δ≥2}: members with minimum degree at least 2 (the null graph included)."""
    def pred(g: Graph) -> bool:
        return (g.n == 0 or g.min_degree() >= 2) and c.member(g)

    def chunk(n, f, a, b):
        base = c.labeled_chunk(n, f, a, b)
        if n == 0:
            return base
        return base & (f["mindeg"] >= 2)

    return GraphClass(
        f"minDegree2Of({c.name})",
        pred,
        ClassFlags(decomposable=c.flags.decomposable, bridge_addable=c.flags.bridge_addable),
        connected_only=c.connected_only,
        parent=c,
        chunk=chunk,
    )


def connected_of(c: GraphClass, name: str | None = None) -> GraphClass:
    def pred(g: Graph) -> bool:
        return g.n > 0 and g.is_connected() and c.member(g)

    def chunk(n, f, a, b):
        if n == 0:
            return np.zeros(b - a, dtype=bool)
        return c.labeled_chunk(n, f, a, b) & (f["ncomp"] == 1)

    return GraphClass(
        name or f"connectedOf({c.name})",
        pred,
        ClassFlags(bridge_addable=True, trimmable=c.flags.trimmable),
        connected_only=True,
        parent=c,
        chunk=chunk,
    )


def trees() -> GraphClass:
    return connected_of(forests(), name="trees")


def connected() -> GraphClass:
    return connected_of(all_graphs_class(), name="connected")


def connected_planar() -> GraphClass:
    return connected_of(planar(), name="connectedPlanar")


_SIMPLE = {
    "all": all_graphs_class,
    "edgeless": edgeless,
    "forests": forests,
    "trees": trees,
    "connected": connected,
    "planar": planar,
    "connectedPlanar": connected_planar,
    "outerplanar": outerplanar,
    "diamondFree": diamond_free,
}

_cache: dict[str, GraphClass] = {}


def _split_args(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def _parse_graph(token: str) -> Graph:
    from .graph6 import decode

    try:
        return named_graph(token)
    except StructuraError:
        try:
            return decode(token)
        except Exception:
            raise UnknownClass(f"cannot read graph {token!r}") from None


def builtin_class(name: str) -> GraphClass:
    """Look up a class by name, e.g. ``planar`` or ``minDegree2Of(excludedMinors(K4))``."""
    name = name.strip()
    hit = _cache.get(name)
    if hit is not None:
        return hit
    m = re.fullmatch(r"(\w+)\((.*)\)", name)
    if name in _SIMPLE:
        c = _SIMPLE[name]()
    elif m is None:
        raise UnknownClass(f"unknown class {name!r}")
    else:
        head, args = m.group(1), _split_args(m.group(2))
        if head == "excludedMinors":
            c = excluded_minors([_parse_graph(a) for a in args])
        elif head == "atMostEdges" and len(args) == 1 and args[0].isdigit():
            c = at_most_edges(int(args[0]))
        elif head == "minDegree2Of" and len(args) == 1:
            c = min_degree2_of(builtin_class(args[0]))
        elif head == "connectedOf" and len(args) == 1:
            c = connected_of(builtin_class(args[0]))
        else:
            raise UnknownClass(f"unknown class {name!r}")
    _cache[name] = c
    return c


def class_from_config(cfg: dict) -> GraphClass:
    """Build a class from ``{name, kind: builtin|excludedMinors|derived, parameters}``."""
    try:
        kind = cfg["kind"]
        name = cfg.get("name")
        params = cfg.get("parameters", {}) or {}
    except (KeyError, TypeError, AttributeError):
        raise UnknownClass(f"malformed class config {cfg!r}") from None
    if kind == "builtin":
        c = builtin_class(params.get("class", name))
    elif kind == "excludedMinors":
        c = excluded_minors([_parse_graph(t) for t in params.get("minors", [])])
    elif kind == "derived":
        base = params.get("of")
        base_c = class_from_config(base) if isinstance(base, dict) else builtin_class(str(base))
        op = params.get("op")
        if op == "minDegree2":
            c = min_degree2_of(base_c)
        elif op == "connected":
            c = connected_of(base_c)
        else:
            raise UnknownClass(f"unknown derivation {op!r}")
    else:
        raise UnknownClass(f"unknown class kind {kind!r}")
    if name and name != c.name:
        c = replace(c, name=name)
    return c


def load_class(path: str | Path) -> GraphClass:
    return class_from_config(json.loads(Path(path).read_text()))


# bounded property checks --------------------------------------------------------


@dataclass
class CheckReport:
    """Outcome of a bounded check; truthy iff no violation up to ``n_max``."""

    prop: str
    cls: str
    n_max: int
    holds: bool
    witness: Optional[Graph] = None
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    def __str__(self) -> str:
        if self.holds:
            return f"{self.prop}({self.cls}) holds up to n={self.n_max}"
        return f"{self.prop}({self.cls}) fails: {self.detail}"


def _graphs_up_to(n_max: int, start: int = 0) -> Iterator[Graph]:
    for n in range(start, n_max + 1):
        for u in all_unlabeled(n):
            yield u.canon


def _members_up_to(c: GraphClass, n_max: int) -> Iterator[Graph]:
    for n in range(n_max + 1):
        for u in class_unlabeled(c, n):
            yield u.canon


def is_bridge_addable_up_to(c: GraphClass, n_max: int) -> CheckReport:
    for g in _members_up_to(c, n_max):
        comps = components(g)
        for i, ci in enumerate(comps):
            for cj in comps[i + 1 :]:
                for u in sorted(ci):
                    for v in sorted(cj):
                        if not c.member(g.add_edge(u, v)):
                            return CheckReport(
                                "bridgeAddable", c.name, n_max, False, g,
                                f"adding edge {u}-{v} to {g} leaves the class", {"edge": (u, v)},
                            )
    return CheckReport("bridgeAddable", c.name, n_max, True)


def is_trimmable_up_to(c: GraphClass, n_max: int) -> CheckReport:
    for g in _graphs_up_to(n_max):
        inside = c.member(g)
        for v in leaves(g):
            if c.member(g.remove_vertices([v])) != inside:
                return CheckReport(
                    "trimmable", c.name, n_max, False, g,
                    f"membership of {g} differs from that of it minus leaf {v}", {"leaf": v},
                )
    return CheckReport("trimmable", c.name, n_max, True)


def is_decomposable_up_to(c: GraphClass, n_max: int) -> CheckReport:
    # the null graph goes last so a violation reports a nontrivial witness when one exists
    for g in list(_graphs_up_to(n_max, start=1)) + [Graph.null()]:
        parts = all(c.member(g.induced(comp)) for comp in components(g))
        if c.member(g) != parts:
            return CheckReport(
                "decomposable", c.name, n_max, False, g,
                f"{g} is {'in' if c.member(g) else 'not in'} the class but its components "
                f"{'all are' if parts else 'are not all'}",
            )
    return CheckReport("decomposable", c.name, n_max, True)


def free_violation(c: GraphClass, g: Graph, h: Graph) -> str | None:
    """Which of the statements g ∈ c, g ∪ h ∈ c, g ∪ h + bridge ∈ c disagrees, if any."""
    a = c.member(g)
    union = disjoint_union(g, h)
    if c.member(union) != a:
        return "union"
    for u in g.vertices():
        for w in h.vertices():
            if c.member(union.add_edge(u, g.n + w)) != a:
                return f"bridge {u}-{g.n + w}"
    return None


def is_free_up_to(c: GraphClass, h: Graph, n_max: int) -> CheckReport:
    """Bounded check that every component of ``h`` is free: over all g on <= n_max vertices."""
    for comp in components(h):
        hi = h.induced(comp)
        for g in _graphs_up_to(n_max):
            bad = free_violation(c, g, hi)
            if bad is not None:
                return CheckReport(
                    "free", c.name, n_max, False, g,
                    f"g={g}, component {hi}: {bad} disagrees with g's membership", {"component": hi},
                )
    return CheckReport("free", c.name, n_max, True)


def is_attachable_up_to(c: GraphClass, h: RootedGraph, n_max: int) -> CheckReport:
    for g in _members_up_to(c, n_max):
        for u in g.vertices():
            if not c.member(attach(g, h, u)):
                return CheckReport(
                    "attachable", c.name, n_max, False, g,
                    f"attaching at vertex {u} of {g} leaves the class", {"vertex": u},
                )
    return CheckReport("attachable", c.name, n_max, True)


_CHECKS = {
    "decomposable": is_decomposable_up_to,
    "bridge_addable": is_bridge_addable_up_to,
    "trimmable": is_trimmable_up_to,
}


def verify_flags(c: GraphClass, n_max: int) -> list[CheckReport]:
    """Bounded checks of every declared decomposable/bridge-addable/trimmable flag."""
    return [_CHECKS[f](c, n_max) for f in c.flags.declared() if f in _CHECKS]


def addable_removable(c: GraphClass, n_h: int, n_g: int) -> set[tuple[int, int]]:
    """Certificates of H (1 <= v(H) <= n_h) with g ∪ H ∈ c ⇔ g ∈ c for all g on <= n_g vertices."""
    gs = list(_graphs_up_to(n_g))
    out = set()
    for h in _graphs_up_to(n_h, start=1):
        if all(c.member(disjoint_union(g, h)) == c.member(g) for g in gs):
            out.add(certificate(h))
    return out


def check_free_min_degree(c: GraphClass, n_h: int, n_g: int) -> CheckReport:
    """B = A^{δ≥2}, where A and B are the addable-removable graphs of c and c^{δ≥2}."""
    a = addable_removable(c, n_h, n_g)
    b = addable_removable(min_degree2_of(c), n_h, n_g)
    a2 = {k for k in a if Graph.from_mask(*k).min_degree() >= 2}
    holds = a2 == b
    witness = None
    if not holds:
        witness = Graph.from_mask(*sorted(a2 ^ b)[0])
    return CheckReport(
        "B=A^{δ≥2}", c.name, n_h, holds, witness,
        "" if holds else f"{witness} is in exactly one of the two sets",
        {"A": len(a), "A2": len(a2), "B": len(b)},
    )


def core_membership_agrees(c: GraphClass, n_max: int) -> CheckReport:
    """g ∈ c ⇔ core2(g) ∈ c for every g on <= n_max vertices."""
    for g in _graphs_up_to(n_max):
        if c.member(g) != c.member(core2(g)):
            return CheckReport("coreMembership", c.name, n_max, False, g, f"{g} and its core disagree")
    return CheckReport("coreMembership", c.name, n_max, True)
