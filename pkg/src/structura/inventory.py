"""Unlabeled inventories: one canonical representative per isomorphism type.

Graphs on n vertices are generated from those on n - 1 by adding a vertex
with every possible neighbourhood.  For a class closed under vertex deletion
this reaches every member, so a hereditary class is grown from its own
members; any other class filters the inventory of its nearest hereditary
ancestor.
"""
from __future__ import annotations

import threading
from typing import TYPE_CHECKING

from .canon import CANON_CAP, UnlabeledGraph, canonicalize
from .graph import Graph, SizeCapExceeded

if TYPE_CHECKING:
    from .classes import GraphClass

INVENTORY_CAP = 8

_lock = threading.Lock()
_all: dict[int, list[UnlabeledGraph]] = {}
_by_class: dict[tuple[str, int], list[UnlabeledGraph]] = {}


def _extend(g: Graph) -> list[Graph]:
    n = g.n
    out = []
    for nbrs in range(1 << n):
        rows = list(g.rows)
        for v in range(n):
            if (nbrs >> v) & 1:
                rows[v] |= 1 << n
        rows.append(nbrs)
        out.append(Graph(n + 1, tuple(rows)))
    return out


def _augment(parents: list[UnlabeledGraph], keep) -> list[UnlabeledGraph]:
    seen: dict[tuple[int, int], UnlabeledGraph] = {}
    for p in parents:
        for g in _extend(p.canon):
            u = canonicalize(g)
            if u.key in seen:
                continue
            if keep(u.canon):
                seen[u.key] = u
    return sorted(seen.values())


def _check(n: int, cap: int) -> None:
    if n > min(cap, CANON_CAP):
        raise SizeCapExceeded(f"unlabeled inventory is capped at {cap} vertices, got {n}")


def all_unlabeled(n: int, cap: int = INVENTORY_CAP) -> list[UnlabeledGraph]:
    """Every graph on n vertices up to isomorphism."""
    _check(n, cap)
    with _lock:
        hit = _all.get(n)
    if hit is not None:
        return hit
    if n == 0:
        out = [canonicalize(Graph.null())]
    else:
        out = _augment(all_unlabeled(n - 1, cap), lambda g: True)
    with _lock:
        _all[n] = out
    return out


def class_unlabeled(c: "GraphClass", n: int, cap: int = INVENTORY_CAP) -> list[UnlabeledGraph]:
    """Members of ``c`` on n vertices up to isomorphism."""
    _check(n, cap)
    key = (c.name, n)
    with _lock:
        hit = _by_class.get(key)
    if hit is not None:
        return hit
    if c.hereditary:
        if n == 0:
            out = [u for u in all_unlabeled(0) if c.member(u.canon)]
        else:
            out = _augment(class_unlabeled(c, n - 1, cap), c.member)
    else:
        base = c.parent if c.parent is not None else None
        pool = class_unlabeled(base, n, cap) if base is not None else all_unlabeled(n, cap)
        out = [u for u in pool if c.member(u.canon)]
    with _lock:
        _by_class[key] = out
    return out


def clear_inventory_cache() -> None:
    with _lock:
        _all.clear()
        _by_class.clear()
