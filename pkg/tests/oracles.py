"""Independent reference implementations used only by the tests.

Each oracle avoids the package's own machinery: networkx for structure,
explicit branch-set search for minors, sympy Bell polynomials for series.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

import networkx as nx

from structura.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(1, g.n + 1))
    h.add_edges_from(g.edges())
    return h


def core_by_subsets(g: Graph) -> frozenset:
    """Largest vertex set W with min degree >= 2 in g[W] (unions of such sets keep the property)."""
    best = frozenset()
    for size in range(g.n, 2, -1):
        for w in combinations(range(1, g.n + 1), size):
            ws = set(w)
            if all(sum(1 for u in g.neighbors(v) if u in ws) >= 2 for v in w):
                return frozenset(w)
    return best


def _restricted_growth(n: int, k: int):
    """Maps vertex -> block in {-1 (unused), 0..k-1}, blocks labeled by first use, all k used."""
    lab = [0] * n

    def rec(i: int, used: int):
        if i == n:
            if used == k:
                yield list(lab)
            return
        if (n - i) < (k - used):
            return
        lab[i] = -1
        yield from rec(i + 1, used)
        for b in range(min(used + 1, k)):
            lab[i] = b
            yield from rec(i + 1, max(used, b + 1))

    yield from rec(0, 0)


def minor_quotients(g: Graph, k: int) -> set[frozenset]:
    """Edge sets of every graph obtained from g by choosing k connected branch sets."""
    out = set()
    ng = to_nx(g)
    for lab in _restricted_growth(g.n, k):
        blocks = [[v + 1 for v in range(g.n) if lab[v] == b] for b in range(k)]
        if not all(nx.is_connected(ng.subgraph(bl)) for bl in blocks):
            continue
        edges = set()
        for a, b in g.edges():
            x, y = lab[a - 1], lab[b - 1]
            if x >= 0 and y >= 0 and x != y:
                edges.add((min(x, y), max(x, y)))
        out.add(frozenset(edges))
    return out


def is_minor_bruteforce(g: Graph, h: Graph) -> bool:
    if h.n == 0:
        return True
    if h.n > g.n:
        return False
    hedges = [(a - 1, b - 1) for a, b in h.edges()]
    for q in minor_quotients(g, h.n):
        for perm in permutations(range(h.n)):
            if all((min(perm[a], perm[b]), max(perm[a], perm[b])) in q for a, b in hedges):
                return True
    return False


def count_automorphisms(g: Graph) -> int:
    ng = to_nx(g)
    return sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(ng, ng).isomorphisms_iter())


def labeled_count(pred, n: int) -> int:
    """Members on [n] by testing every edge subset with an external predicate on networkx graphs."""
    pairs = list(combinations(range(1, n + 1), 2))
    total = 0
    for m in range(1 << len(pairs)):
        h = nx.Graph()
        h.add_nodes_from(range(1, n + 1))
        h.add_edges_from(p for i, p in enumerate(pairs) if (m >> i) & 1)
        total += bool(pred(h))
    return total


def nx_planar(h: nx.Graph) -> bool:
    return nx.check_planarity(h)[0]


def rooted_trees_bruteforce(n: int) -> int:
    """Rooted labeled trees on [n]: trees times choice of root."""
    return labeled_count(lambda h: h.number_of_nodes() > 0 and nx.is_tree(h), n) * n if n else 0


def rooted_forests_bruteforce(n: int, k: int) -> int:
    """Forests on [n] in which each tree contains exactly one of the roots 1..k."""
    def ok(h):
        if not nx.is_forest(h):
            return False
        for comp in nx.connected_components(h):
            if sum(1 for v in comp if v <= k) != 1:
                return False
        return True

    return labeled_count(ok, n)


# series via Bell polynomials ----------------------------------------------------

def _bell_terms(coeffs, n_max):
    import sympy

    xs = [sympy.Rational(c.numerator, c.denominator) * factorial(j) for j, c in enumerate(coeffs)]
    return xs, sympy


def _frac(r) -> Fraction:
    return Fraction(int(r.p), int(r.q))


def bell_exp(coeffs: list[Fraction]) -> list[Fraction]:
    n_max = len(coeffs) - 1
    xs, sympy = _bell_terms(coeffs, n_max)
    out = [Fraction(1)]
    for n in range(1, n_max + 1):
        s = sum(sympy.bell(n, k, xs[1 : n - k + 2]) for k in range(1, n + 1))
        out.append(_frac(sympy.Rational(s)) / factorial(n))
    return out


def bell_log(coeffs: list[Fraction]) -> list[Fraction]:
    n_max = len(coeffs) - 1
    xs, sympy = _bell_terms(coeffs, n_max)
    out = [Fraction(0)]
    for n in range(1, n_max + 1):
        s = sum((-1) ** (k - 1) * factorial(k - 1) * sympy.bell(n, k, xs[1 : n - k + 2]) for k in range(1, n + 1))
        out.append(_frac(sympy.Rational(s)) / factorial(n))
    return out


def bell_compose(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    n_max = len(f) - 1
    xs, sympy = _bell_terms(g, n_max)
    out = [f[0]]
    for n in range(1, n_max + 1):
        s = sum(
            sympy.Rational(f[k].numerator, f[k].denominator) * factorial(k) * sympy.bell(n, k, xs[1 : n - k + 2])
            for k in range(1, n + 1)
        )
        out.append(_frac(sympy.Rational(s)) / factorial(n))
    return out
