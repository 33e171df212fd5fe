"""Exact labeled and unlabeled enumeration of graph classes."""
from __future__ import annotations

import json
import os
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from pathlib import Path
from typing import Optional

import numpy as np

from . import kernels, labeled
from .canon import UnlabeledGraph, canonicalize
from .classes import GraphClass
from .graph import Graph, SizeCapExceeded, StructuraError
from .graph6 import decode, encode
from .inventory import INVENTORY_CAP, class_unlabeled

LABELED_CAP = 7
LABELED_CAP_OPT_IN = 8


class InvalidRho(StructuraError):
    pass


class InvalidArgs(StructuraError):
    pass


def _check_labeled(n: int, allow_large: bool) -> None:
    cap = LABELED_CAP_OPT_IN if allow_large else LABELED_CAP
    if n < 0 or n > cap:
        raise SizeCapExceeded(f"labeled enumeration is capped at {cap} vertices, got {n}")


@dataclass(frozen=True)
class LabeledStats:
    """Counts of the labeled members of a class on [n], split by core and fragment order."""

    n: int
    total: int
    by_core: tuple[int, ...]
    by_frag: tuple[int, ...]
    connected: int


_stats_lock = threading.Lock()
_stats: dict[tuple[str, int], LabeledStats] = {}


def _chunk_stats(c: GraphClass, n: int, start: int, stop: int, feats: dict) -> tuple[np.ndarray, np.ndarray, int]:
    inside = c.labeled_chunk(n, feats, start, stop)
    core = labeled.popcount(feats["core"][inside])
    frag = n - labeled.popcount(feats["big"][inside])
    conn = int(np.count_nonzero(feats["ncomp"][inside] == 1)) if n else 0
    return np.bincount(core, minlength=n + 1), np.bincount(frag, minlength=n + 1), conn


def labeled_stats(c: GraphClass, n: int, allow_large: bool = False, workers: int = 1) -> LabeledStats:
    """Exact per-n statistics by scanning every edge mask on [n] (memoized)."""
    _check_labeled(n, allow_large)
    key = (c.name, n)
    with _stats_lock:
        hit = _stats.get(key)
    if hit is not None:
        return hit
    chunks = list(_chunk_ranges(n))

    def work(rng):
        a, b = rng
        feats = labeled.features(n) if (a, b) == (0, 1 << (n * (n - 1) // 2)) else kernels.mask_features(n, a, b)
        return _chunk_stats(c, n, a, b, feats)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(work, chunks))
    else:
        parts = [work(r) for r in chunks]
    by_core = np.zeros(n + 1, dtype=np.int64)
    by_frag = np.zeros(n + 1, dtype=np.int64)
    conn = 0
    for a, b, k in parts:
        by_core += a
        by_frag += b
        conn += k
    st = LabeledStats(n, int(by_core.sum()), tuple(int(x) for x in by_core), tuple(int(x) for x in by_frag), conn)
    with _stats_lock:
        _stats[key] = st
    return st


def _chunk_ranges(n: int):
    total = 1 << (n * (n - 1) // 2)
    step = min(total, labeled.CHUNK)
    for a in range(0, total, step):
        yield a, min(total, a + step)


def count_labeled(c: GraphClass, n: int, allow_large: bool = False) -> int:
    """|G_n|: the number of members of ``c`` on vertex set [n]."""
    return labeled_stats(c, n, allow_large).total


def count_by_core_size(c: GraphClass, n: int, k: int, allow_large: bool = False) -> int:
    """Members on [n] whose 2-core has exactly k vertices."""
    if not 0 <= k <= n:
        return 0
    return labeled_stats(c, n, allow_large).by_core[k]


def count_by_frag_size(c: GraphClass, n: int, f: int, allow_large: bool = False) -> int:
    if not 0 <= f <= n:
        return 0
    return labeled_stats(c, n, allow_large).by_frag[f]


def count_connected(c: GraphClass, n: int, allow_large: bool = False) -> int:
    return labeled_stats(c, n, allow_large).connected


def unlabeled_inventory(c: GraphClass, n_max: int, cap: int = INVENTORY_CAP) -> dict[int, list[UnlabeledGraph]]:
    """One canonical representative (with |Aut|) per isomorphism type of member, per n."""
    if n_max > cap:
        raise SizeCapExceeded(f"unlabeled inventory is capped at {cap} vertices, got {n_max}")
    return {n: class_unlabeled(c, n, cap) for n in range(n_max + 1)}


def labeled_from_unlabeled(graphs: list[UnlabeledGraph]) -> int:
    return sum(factorial(u.n) // u.aut_size for u in graphs)


# census and diagnostics ----------------------------------------------------------


@dataclass
class Census:
    cls: GraphClass
    labeled_counts: dict[int, int] = field(default_factory=dict)
    unlabeled: dict[int, list[UnlabeledGraph]] = field(default_factory=dict)
    n_max_labeled: int = 0
    n_max_unlabeled: int = 0

    def inconsistencies(self) -> list[int]:
        """n at which the labeled count differs from the orbit sum over the inventory."""
        return [
            n
            for n in sorted(set(self.labeled_counts) & set(self.unlabeled))
            if self.labeled_counts[n] != labeled_from_unlabeled(self.unlabeled[n])
        ]


def cache_dir(explicit: Optional[str | Path] = None) -> Optional[Path]:
    env = os.environ.get("STRUCTURA_CACHE_DIR")
    if env:
        return Path(env)
    return Path(explicit) if explicit else None


def _cache_path(root: Path, name: str, n: int) -> Path:
    safe = re.sub(r"[^A-Za-z0-9_.-]+", "_", name)
    return root / f"{safe}__n{n}.json"


def save_level(root: Path, c: GraphClass, n: int, count: Optional[int], graphs: Optional[list[UnlabeledGraph]]) -> Path:
    root.mkdir(parents=True, exist_ok=True)
    doc = {
        "class": c.name,
        "n": n,
        "labeledCount": None if count is None else str(count),
        "unlabeled": None if graphs is None else [{"graph6": encode(u.canon), "aut": u.aut_size} for u in graphs],
    }
    path = _cache_path(root, c.name, n)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(doc))
    tmp.replace(path)
    return path


def load_level(root: Path, c: GraphClass, n: int) -> Optional[dict]:
    path = _cache_path(root, c.name, n)
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if doc.get("class") != c.name or doc.get("n") != n:
        return None
    out: dict = {}
    if doc.get("labeledCount") is not None:
        out["count"] = int(doc["labeledCount"])
    if doc.get("unlabeled") is not None:
        out["graphs"] = [UnlabeledGraph(decode(e["graph6"]), int(e["aut"])) for e in doc["unlabeled"]]
    return out


def build_census(
    c: GraphClass,
    n_max_labeled: int,
    n_max_unlabeled: Optional[int] = None,
    cache: Optional[str | Path] = None,
    allow_large: bool = False,
) -> Census:
    """Labeled counts for n <= n_max_labeled and inventories for n <= n_max_unlabeled."""
    if n_max_unlabeled is None:
        n_max_unlabeled = min(n_max_labeled, INVENTORY_CAP)
    _check_labeled(n_max_labeled, allow_large)
    if n_max_unlabeled > INVENTORY_CAP:
        raise SizeCapExceeded(f"unlabeled inventory is capped at {INVENTORY_CAP} vertices, got {n_max_unlabeled}")
    root = cache_dir(cache)
    cen = Census(c, n_max_labeled=n_max_labeled, n_max_unlabeled=n_max_unlabeled)
    for n in range(max(n_max_labeled, n_max_unlabeled) + 1):
        stored = load_level(root, c, n) if root else None
        stored = stored or {}
        want_count = n <= n_max_labeled
        want_graphs = n <= n_max_unlabeled
        count = stored.get("count")
        graphs = stored.get("graphs")
        dirty = False
        if want_count and count is None:
            count = count_labeled(c, n, allow_large)
            dirty = True
        if want_graphs and graphs is None:
            graphs = class_unlabeled(c, n)
            dirty = True
        if want_count:
            cen.labeled_counts[n] = count
        if want_graphs:
            cen.unlabeled[n] = graphs
        if root and dirty:
            save_level(root, c, n, count, graphs)
    return cen


@dataclass
class RatioSequence:
    values: dict[int, Fraction]
    growth_estimates: dict[int, float]
    undefined: list[int]


def ratio_sequence(cen: Census) -> RatioSequence:
    """r_n = n |G_{n-1}| / |G_n| exactly, plus (|G_n|/n!)^{1/n}.

    r_n is left undefined when either count is zero.
    """
    counts = cen.labeled_counts
    values: dict[int, Fraction] = {}
    growth: dict[int, float] = {}
    undefined = []
    for n in sorted(counts):
        if n >= 1 and counts[n] > 0:
            growth[n] = (counts[n] / factorial(n)) ** (1.0 / n)
        if n - 1 not in counts or n == 0:
            continue
        if counts[n] == 0 or counts[n - 1] == 0:
            undefined.append(n)
            continue
        values[n] = Fraction(n * counts[n - 1], counts[n])
    return RatioSequence(values, growth, undefined)


def richness_diagnostic(cen: Census, eta: float, rho: Optional[float]) -> dict[int, bool]:
    """Whether (|G_n|/n!)^{1/n} >= (1 - eta)/rho, for each counted n >= 1."""
    if rho is None or not np.isfinite(rho) or rho <= 0:
        raise InvalidRho(f"a finite positive reference radius is required, got {rho}")
    if not 0 <= eta <= 1:
        raise InvalidArgs("eta must lie in [0, 1]")
    out = {}
    for n, cnt in sorted(cen.labeled_counts.items()):
        if n == 0:
            continue
        if cnt == 0:
            out[n] = False
            continue
        out[n] = (cnt / factorial(n)) ** (1.0 / n) >= (1 - eta) / rho
    return out


def rooted_forest_count(n: int, k: int) -> int:
    """Forests on [n] made of k rooted trees with a fixed root set: k n^{n-1-k}."""
    if not 1 <= k <= n:
        raise InvalidArgs(f"need 1 <= k <= n, got n={n}, k={k}")
    if k == n:
        return 1
    return k * n ** (n - 1 - k)


def stratified_closed_form(n: int, k: int, core_count: int) -> int:
    """C(n,k) |D_k| k n^{n-1-k}: connected graphs on [n] whose core is one of |D_k| graphs on k vertices."""
    return comb(n, k) * core_count * rooted_forest_count(n, k)


def r_nk(c: GraphClass, n: int, k: int) -> Optional[Fraction]:
    """n |G_{n-1,k}| / |G_{n,k}|, or None when either stratum is empty."""
    a = count_by_core_size(c, n - 1, k)
    b = count_by_core_size(c, n, k)
    if a == 0 or b == 0:
        return None
    return Fraction(n * a, b)


def r_nk_formula(n: int, k: int) -> Fraction:
    """((n-k)/n) (1 - 1/n)^{n-k-2} for the class of connected graphs."""
    e = n - k - 2
    base = Fraction(n - 1, n)
    return Fraction(n - k, n) * (base ** e if e >= 0 else 1 / base ** (-e))


def graphs_with_core(h: Graph, n_max: int, c: Optional[GraphClass] = None) -> dict[int, list[UnlabeledGraph]]:
    """Connected graphs (optionally in ``c``) on <= n_max vertices whose core is isomorphic to ``h``.

    Every such graph is ``h`` with trees hanging off, so they are grown by
    repeatedly adding a leaf.
    """
    if h.n > n_max:
        return {}
    level = {canonicalize(h).key: canonicalize(h)}
    out = {h.n: sorted(level.values())}
    for n in range(h.n + 1, n_max + 1):
        nxt: dict = {}
        for u in level.values():
            g = u.canon
            for v in g.vertices():
                rows = list(g.rows)
                rows[v - 1] |= 1 << g.n
                rows.append(1 << (v - 1))
                w = canonicalize(Graph(g.n + 1, tuple(rows)))
                nxt.setdefault(w.key, w)
        level = nxt
        out[n] = sorted(level.values())
    if c is not None:
        out = {n: [u for u in gs if c.member(u.canon)] for n, gs in out.items()}
    return out
