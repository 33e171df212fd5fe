"""Boltzmann Poisson random graphs and exact uniform sampling of small members."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from . import kernels, labeled
from .canon import UnlabeledGraph, canonicalize
from .census import count_labeled
from .classes import GraphClass, connected_of
from .graph import Graph, SizeCapExceeded, StructuraError, components, core2, disjoint_union
from .graph6 import encode
from .inventory import INVENTORY_CAP, class_unlabeled


class NotDecomposable(StructuraError):
    pass


class EmptyClassAtN(StructuraError):
    pass


@dataclass(frozen=True)
class TailNote:
    total_mu: float
    last_size_mu: float


@dataclass(frozen=True, eq=False)
class BPModel:
    """BP(c, rho) restricted to connected components on at most ``cutoff`` vertices."""

    cls: GraphClass
    rho: float
    cutoff: int
    shapes: tuple[UnlabeledGraph, ...]
    mu_exact: tuple[Fraction, ...]
    mu: np.ndarray = field(repr=False)
    tail: TailNote

    @property
    def weights(self) -> list[tuple[UnlabeledGraph, float]]:
        return list(zip(self.shapes, self.mu.tolist()))

    @property
    def c_rho(self) -> float:
        """Truncated C(rho) = sum of mu over included shapes."""
        return float(self.mu.sum())

    @property
    def g_rho(self) -> float:
        return math.exp(self.c_rho)

    @property
    def p_empty(self) -> float:
        return math.exp(-self.c_rho)

    def index(self, u: UnlabeledGraph) -> int:
        return self._index()[u.key]

    def _index(self) -> dict:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {s.key: i for i, s in enumerate(self.shapes)}
            object.__setattr__(self, "_idx", idx)
        return idx


def _exact_rho(rho: float) -> Fraction:
    return Fraction(rho).limit_denominator(10 ** 15) if rho != 0 else Fraction(0)


def build_bp_model(c: GraphClass, rho: float, cutoff: int, require_decomposable: bool = True) -> BPModel:
    """Enumerate connected members up to ``cutoff`` vertices with mu(H) = rho^v(H)/aut(H)."""
    if require_decomposable and not c.flags.decomposable:
        raise NotDecomposable(f"{c.name} is not declared decomposable")
    if cutoff > INVENTORY_CAP:
        raise SizeCapExceeded(f"components are enumerated up to {INVENTORY_CAP} vertices, got {cutoff}")
    if not rho >= 0:
        raise ValueError("rho must be nonnegative")
    conn = connected_of(c)
    shapes = []
    for n in range(1, cutoff + 1):
        shapes.extend(class_unlabeled(conn, n))
    r = _exact_rho(rho)
    mu_exact = tuple(r ** s.n / s.aut_size for s in shapes)
    mu = np.array([float(m) for m in mu_exact], dtype=np.float64)
    last = float(sum(m for s, m in zip(shapes, mu_exact) if s.n == cutoff))
    return BPModel(c, float(rho), cutoff, tuple(shapes), mu_exact, mu, TailNote(float(mu.sum()), last))


def sample_counts(model: BPModel, size: int, rng: np.random.Generator, batch: int = 20000) -> np.ndarray:
    """A (size, shapes) matrix of independent Poisson(mu) counts drawn by inversion."""
    out = np.zeros((size, len(model.shapes)), dtype=np.int64)
    for a in range(0, size, batch):
        b = min(size, a + batch)
        u = rng.random((b - a, len(model.shapes)))
        out[a:b] = kernels.poisson_inversion(model.mu, u)
    return out


def sample_components(model: BPModel, size: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Sparse draw of ``size`` samples as parallel (sample index, shape index) arrays.

    Same law as sample_counts: the number of components is Poisson(C(rho))
    and each component is a shape chosen with probability mu/C(rho).
    """
    total = model.c_rho
    if total == 0 or size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    k = kernels.poisson_inversion(np.array([total]), rng.random((size, 1)))[:, 0]
    rows = np.repeat(np.arange(size, dtype=np.int64), k)
    cdf = np.cumsum(model.mu) / total
    shapes = np.minimum(np.searchsorted(cdf, rng.random(rows.size), side="right"), len(model.shapes) - 1)
    return rows, shapes.astype(np.int64)


def sample_counts_split(model: BPModel, size: int, seed: int, replicas: int = 1) -> np.ndarray:
    """Like sample_counts, with independent streams spawned from ``seed`` per replica."""
    streams = np.random.SeedSequence(seed).spawn(replicas)
    share = [size // replicas + (i < size % replicas) for i in range(replicas)]
    parts = [sample_counts(model, k, np.random.Generator(np.random.PCG64(s))) for k, s in zip(share, streams)]
    return np.concatenate(parts, axis=0) if parts else np.zeros((0, len(model.shapes)), dtype=np.int64)


@dataclass(frozen=True)
class ComponentMultiset:
    """Component counts kappa(R, H); the empty multiset is the null graph."""

    counts: tuple[tuple[UnlabeledGraph, int], ...]

    @classmethod
    def from_map(cls, m: dict[UnlabeledGraph, int]) -> "ComponentMultiset":
        items = sorted(((u, k) for u, k in m.items() if k > 0), key=lambda t: t[0].key)
        return cls(tuple(items))

    def as_dict(self) -> dict[UnlabeledGraph, int]:
        return dict(self.counts)

    def kappa(self, h: UnlabeledGraph) -> int:
        return next((k for u, k in self.counts if u.key == h.key), 0)

    @property
    def is_empty(self) -> bool:
        return not self.counts

    @property
    def key(self) -> tuple:
        return tuple((u.key, k) for u, k in self.counts)

    def graph(self) -> Graph:
        g = Graph.null()
        for u, k in self.counts:
            for _ in range(k):
                g = disjoint_union(g, u.canon)
        return g


def row_multiset(model: BPModel, row: np.ndarray) -> ComponentMultiset:
    return ComponentMultiset.from_map({model.shapes[i]: int(row[i]) for i in np.flatnonzero(row)})


def sample_bp(model: BPModel, rng: np.random.Generator) -> ComponentMultiset:
    return row_multiset(model, sample_counts(model, 1, rng)[0])


def core_of_bp(s: ComponentMultiset) -> ComponentMultiset:
    """Apply the 2-core to every component, dropping those that vanish."""
    out: dict = {}
    keyed: dict = {}
    for u, k in s.counts:
        c = core2(u.canon)
        if c.n == 0:
            continue
        for comp in _split(c):
            keyed.setdefault(comp.key, comp)
            out[comp.key] = out.get(comp.key, 0) + k
    return ComponentMultiset.from_map({keyed[key]: v for key, v in out.items()})


def _split(g: Graph) -> list[UnlabeledGraph]:
    return [canonicalize(g.induced(sorted(c))) for c in components(g)]


def core_keys(model: BPModel) -> list[tuple]:
    """For each shape, the key of the multiset of its core's components."""
    return [core_of_bp(ComponentMultiset(((s, 1),))).key for s in model.shapes]


def multiset_keys(model: BPModel, counts: np.ndarray, core: bool = False) -> list[tuple]:
    """Hashable per-sample keys of the (optionally cored) component multisets."""
    per_shape = core_keys(model) if core else [((s.key, 1),) for s in model.shapes]
    out = []
    for row in counts:
        acc: Counter = Counter()
        for i in np.flatnonzero(row):
            for key, k in per_shape[i]:
                acc[key] += k * int(row[i])
        out.append(tuple(sorted(acc.items())))
    return out


def sparse_multiset_keys(
    model: BPModel, rows: np.ndarray, shapes: np.ndarray, size: int, core: bool = False, max_part: Optional[int] = None
) -> list[tuple]:
    """multiset_keys for sample_components output; parts above ``max_part`` vertices are dropped."""
    per_shape = core_keys(model) if core else [((s.key, 1),) for s in model.shapes]
    acc: list[Counter] = [Counter() for _ in range(size)]
    for r, i in zip(rows.tolist(), shapes.tolist()):
        for key, k in per_shape[i]:
            if max_part is None or key[0] <= max_part:
                acc[r][key] += k
    return [tuple(sorted(a.items())) for a in acc]


def total_variation(a: Iterable, b: Iterable) -> float:
    ca, cb = Counter(a), Counter(b)
    na, nb = sum(ca.values()), sum(cb.values())
    return 0.5 * sum(abs(ca[k] / na - cb[k] / nb) for k in set(ca) | set(cb))


# uniform sampling ------------------------------------------------------------------

def member_masks(c: GraphClass, n: int) -> np.ndarray:
    """Sorted edge masks of the labeled members on [n] (n <= 7)."""
    if n > 7:
        raise SizeCapExceeded("member lists are kept for n <= 7; use sample_uniform for n = 8")
    return np.flatnonzero(c.labeled_bitmap(n))


def sample_uniform_masks(c: GraphClass, n: int, size: int, rng: np.random.Generator, allow_large: bool = False) -> np.ndarray:
    """Masks of ``size`` independent uniform members on [n]."""
    if n <= 7:
        pool = member_masks(c, n)
        if pool.size == 0:
            raise EmptyClassAtN(f"{c.name} has no members on {n} vertices")
        return pool[rng.integers(0, pool.size, size=size)]
    total = count_labeled(c, n, allow_large)
    if total == 0:
        raise EmptyClassAtN(f"{c.name} has no members on {n} vertices")
    ranks = np.sort(rng.integers(0, total, size=size))
    order = np.argsort(rng.random(size))
    out = np.zeros(size, dtype=np.int64)
    seen = 0
    j = 0
    for start, stop, feats in labeled.feature_chunks(n):
        hits = np.flatnonzero(c.labeled_chunk(n, feats, start, stop)) + start
        while j < size and ranks[j] < seen + hits.size:
            out[j] = hits[ranks[j] - seen]
            j += 1
        seen += hits.size
    return out[order]


def sample_uniform(c: GraphClass, n: int, rng: np.random.Generator, allow_large: bool = False) -> Graph:
    """An exactly uniform member of ``c`` on [n]."""
    if n == 0:
        if not c.member(Graph.null()):
            raise EmptyClassAtN(f"{c.name} does not contain the null graph")
        return Graph.null()
    m = int(sample_uniform_masks(c, n, 1, rng, allow_large)[0])
    return Graph.from_mask(n, m)


# logs -----------------------------------------------------------------------------

def sample_record(seed: int, model: BPModel, s: ComponentMultiset) -> dict:
    return {
        "seed": seed,
        "model": {"class": model.cls.name, "rho": model.rho, "cutoff": model.cutoff},
        "sample": [{"graph6": encode(u.canon), "count": k} for u, k in s.counts],
    }


def write_sample_log(path: str | Path, seed: int, model: BPModel, samples: Iterable[ComponentMultiset]) -> int:
    n = 0
    with open(path, "w") as fh:
        for s in samples:
            fh.write(json.dumps(sample_record(seed, model, s)) + "\n")
            n += 1
    return n


def read_sample_log(path: str | Path) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]
