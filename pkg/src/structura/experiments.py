"""Experiment plans, reports and the suites behind the command-line tool."""
from __future__ import annotations

import csv
import io
import json
import math
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .boltzmann import build_bp_model, sample_components, sparse_multiset_keys, total_variation
from .canon import certificate
from .census import (
    build_census,
    count_by_core_size,
    count_connected,
    count_labeled,
    labeled_stats,
    r_nk,
    r_nk_formula,
    ratio_sequence,
    stratified_closed_form,
)
from .classes import (
    GraphClass,
    builtin_class,
    connected_of,
    is_bridge_addable_up_to,
    is_free_up_to,
    load_class,
    min_degree2_of,
)
from .graph import Graph, StructuraError, components, core2, cycle, fragment
from .innercore import InnerCoreGadgets, inner_core, safe_sets
from .inventory import class_unlabeled
from .minors import max_disjoint_copies
from .series import (
    OutOfRange,
    Series,
    rooted_tree_series,
    series_compose,
    series_exp,
    solve_rho2,
    tree_series,
)

SCHEMA_VERSION = 1


class BridgeAddableCheckFailed(StructuraError):
    pass


class FreenessCheckFailed(StructuraError):
    pass


@dataclass
class ExperimentPlan:
    class_name: str
    n_max: int = 6
    n_min: int = 1
    params: dict = field(default_factory=dict)
    samples: int = 10000
    rho: Optional[float] = None
    seed: int = 0
    out: Optional[str] = None
    cache_dir: Optional[str] = None

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.n_min < 0 or self.n_max < self.n_min:
            raise ValueError("need 0 <= n_min <= n_max")

    def graph_class(self) -> GraphClass:
        if self.class_name.endswith(".json"):
            return load_class(self.class_name)
        return builtin_class(self.class_name)


@dataclass
class Check:
    name: str
    status: str  # pass, fail or skip
    value: Any = None
    tolerance: Any = None
    detail: str = ""


@dataclass
class Table:
    header: list[str]
    rows: list[list[Any]]


@dataclass
class ExperimentReport:
    experiment: str
    plan: dict
    seed: int
    checks: list[Check] = field(default_factory=list)
    tables: dict[str, Table] = field(default_factory=dict)
    runtime: float = 0.0

    def add(self, name: str, ok: Optional[bool], value=None, tolerance=None, detail: str = "") -> Check:
        if any(c.name == name for c in self.checks):
            raise ValueError(f"duplicate check {name}")
        status = "skip" if ok is None else ("pass" if ok else "fail")
        c = Check(name, status, _plain(value), _plain(tolerance), detail)
        self.checks.append(c)
        return c

    def skip(self, name: str, reason: str) -> Check:
        return self.add(name, None, detail=f"skipped: {reason}")

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self, include_runtime: bool = True) -> dict:
        d = {
            "schemaVersion": SCHEMA_VERSION,
            "experiment": self.experiment,
            "plan": self.plan,
            "seed": self.seed,
            "checks": [asdict(c) for c in self.checks],
            "tables": {k: {"header": t.header, "rows": [[_plain(x) for x in r] for r in t.rows]} for k, t in self.tables.items()},
        }
        if include_runtime:
            d["runtime"] = self.runtime
        return d

    def to_json(self, include_runtime: bool = True) -> str:
        return json.dumps(self.to_dict(include_runtime), indent=2, sort_keys=True)

    def checks_table(self) -> Table:
        return Table(
            ["check", "status", "value", "tolerance", "detail"],
            [[c.name, c.status, _cell(c.value), _cell(c.tolerance), c.detail] for c in self.checks],
        )


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _cell(v) -> str:
    if v is None:
        return ""
    return str(_plain(v))


def emit_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(table.header)
    for row in table.rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def parse_csv(text: str) -> Table:
    rows = list(csv.reader(io.StringIO(text, newline="")))
    return Table(rows[0], rows[1:])


def write_outputs(report: ExperimentReport, out: str | Path, primary: Optional[str] = None) -> list[Path]:
    """JSON for a .json path; otherwise the primary table as CSV plus one CSV per extra table."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if out.suffix == ".json":
        out.write_text(report.to_json())
        return [out]
    main = report.tables[primary] if primary else report.checks_table()
    out.write_text(emit_csv(main), newline="")
    written = [out]
    for name, t in report.tables.items():
        if name == primary:
            continue
        p = out.with_name(f"{out.stem}.{name}{out.suffix or '.csv'}")
        p.write_text(emit_csv(t), newline="")
        written.append(p)
    return written


def _new_report(name: str, plan: ExperimentPlan) -> ExperimentReport:
    return ExperimentReport(name, asdict(plan), plan.seed)


def _finish(rep: ExperimentReport, t0: float) -> ExperimentReport:
    rep.runtime = round(time.perf_counter() - t0, 6)
    return rep


def _egf(c: GraphClass, n_max: int) -> Series:
    return Series.from_counts([count_labeled(c, n) for n in range(n_max + 1)], n_max)


# identities ------------------------------------------------------------------------


def run_identity_suite(plan: ExperimentPlan) -> ExperimentReport:
    t0 = time.perf_counter()
    c = plan.graph_class()
    n = plan.n_max
    rep = _new_report("identities", plan)
    cen = build_census(c, n, min(n, 6), cache=plan.cache_dir)
    rep.tables["counts"] = Table(["n", "count"], [[k, v] for k, v in sorted(cen.labeled_counts.items())])
    bad = cen.inconsistencies()
    rep.add("labeled_unlabeled_consistency", not bad, value=bad or "none", tolerance="exact")

    strat = [m for m in range(n + 1) if sum(labeled_stats(c, m).by_core) != count_labeled(c, m)]
    rep.add("core_stratification_complete", not strat, value=strat or "none", tolerance="exact")

    conn = connected_of(c)
    if c.flags.decomposable:
        lhs = series_exp(_egf(conn, n))
        rhs = _egf(c, n)
        rep.add("exponential_formula", lhs == rhs, value=_first_diff(lhs, rhs), tolerance="exact")
    else:
        rep.skip("exponential_formula", "not decomposable")

    if c.flags.trimmable:
        tb = rooted_tree_series(n)
        forests = Series.from_counts([count_labeled(builtin_class("forests"), m) for m in range(n + 1)], n)
        if c.connected_only:
            rep.skip("composition_G", "class of connected graphs has no forests factor")
        else:
            lhs = series_compose(_egf(min_degree2_of(c), n), tb) * forests
            rhs = _egf(c, n)
            rep.add("composition_G", lhs == rhs, value=_first_diff(lhs, rhs), tolerance="exact")
        lhs = series_compose(_egf(min_degree2_of(conn), n), tb) + tree_series(n)
        rhs = _egf(conn, n)
        rep.add("composition_C", lhs == rhs, value=_first_diff(lhs, rhs), tolerance="exact")
        d = min_degree2_of(conn)
        misses = []
        ratio_misses = []
        rows = []
        for m in range(4, n + 1):
            for k in range(3, m):
                got = count_by_core_size(conn, m, k)
                want = stratified_closed_form(m, k, count_labeled(d, k))
                rows.append([m, k, got, want])
                if got != want:
                    misses.append((m, k))
                r = r_nk(conn, m, k)
                if r is not None and r != r_nk_formula(m, k):
                    ratio_misses.append((m, k))
        rep.tables["stratified"] = Table(["n", "k", "count", "closed_form"], rows)
        rep.add("stratified_closed_form", not misses, value=misses or "none", tolerance="exact")
        rep.add("r_nk_identity", not ratio_misses, value=ratio_misses or "none", tolerance="exact")
    else:
        for name in ("composition_G", "composition_C", "stratified_closed_form", "r_nk_identity"):
            rep.skip(name, "not trimmable")
    return _finish(rep, t0)


def _first_diff(a: Series, b: Series):
    for i, (x, y) in enumerate(zip(a.coeffs, b.coeffs)):
        if x != y:
            return f"first difference at n={i}"
    return "equal"


# connectivity ---------------------------------------------------------------------


def run_connectivity(plan: ExperimentPlan) -> ExperimentReport:
    t0 = time.perf_counter()
    c = plan.graph_class()
    rep = _new_report("connectivity", plan)
    bound = min(plan.n_max, 6)
    check = is_bridge_addable_up_to(c, bound)
    if not check:
        raise BridgeAddableCheckFailed(str(check))
    rows = []
    inv_e = Fraction(math.exp(-1.0))
    for n in range(max(1, plan.n_min), plan.n_max + 1):
        total = count_labeled(c, n)
        if total == 0:
            continue
        p = Fraction(count_connected(c, n), total)
        rows.append([n, count_connected(c, n), total, p, float(p)])
        rep.add(f"p_connected_n{n}", p >= inv_e, value=p, tolerance=">= 1/e")
    rep.tables["connectivity"] = Table(["n", "connected", "total", "p_exact", "p_float"], rows)
    if plan.rho is not None:
        model = build_bp_model(c, plan.rho, plan.params.get("cutoff", min(plan.n_max, 7)))
        rep.tables["limit"] = Table(["rho", "cutoff", "exp_minus_C"], [[plan.rho, model.cutoff, model.p_empty]])
    return _finish(rep, t0)


# fragments ----------------------------------------------------------------------


def frag_distribution(c: GraphClass, n: int) -> dict[tuple[int, int], Fraction]:
    """Exact law of the unlabeled fragment of a uniform member on [n].

    Ties between largest components are broken by the least vertex, which
    over uniformly random labelings picks each tied component equally often.
    """
    total = count_labeled(c, n)
    out: dict[tuple[int, int], Fraction] = {}
    for u in class_unlabeled(c, n):
        g = u.canon
        comps = components(g)
        top = max((len(x) for x in comps), default=0)
        tied = [x for x in comps if len(x) == top]
        w = Fraction(factorial(n), u.aut_size * len(tied))
        for x in tied:
            rest = sorted(set(g.vertices()) - x)
            key = certificate(g.induced(rest))
            out[key] = out.get(key, Fraction(0)) + w
    return {k: v / total for k, v in out.items()}


def bp_law(a: Optional[GraphClass], rho: float, n_max: int) -> dict[tuple[int, int], float]:
    """P(R = H) = mu(H)/G(rho) for members H of ``a`` on <= n_max vertices (a=None: only the null graph)."""
    if a is None:
        return {(0, 0): 1.0}
    model = build_bp_model(a, rho, max(1, n_max))
    g_rho = model.g_rho
    law = {}
    for m in range(n_max + 1):
        for u in class_unlabeled(a, m):
            law[u.key] = rho ** m / u.aut_size / g_rho
    return law


def tv_distance(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    mass_q = sum(q.values())
    return 0.5 * (sum(abs(float(p.get(k, 0)) - q.get(k, 0.0)) for k in keys) + max(0.0, 1.0 - mass_q))


def estimate_rho(c: GraphClass, n_max: int) -> tuple[float, str]:
    if c.known_rho is not None:
        return c.known_rho, "known"
    rs = ratio_sequence(build_census(c, n_max, 0))
    return float(rs.values[n_max]), "estimate"


def limited_bound_check(c: GraphClass, h: Graph, n: int) -> tuple[Fraction, Fraction, int]:
    """(P(R_n in B), 3 k_n / (2 v(H) n), k_n) where B = {Frag has a component H and frag <= n/3}."""
    hkey = certificate(h)
    k_n = 0
    hit = Fraction(0)
    for u in class_unlabeled(c, n):
        g = u.canon
        k_n = max(k_n, max_disjoint_copies(g, h))
        comps = components(g)
        top = max((len(x) for x in comps), default=0)
        tied = [x for x in comps if len(x) == top]
        for x in tied:
            rest = set(g.vertices()) - x
            if 3 * len(rest) > n:
                continue
            fr = g.induced(sorted(rest))
            if any(len(y) == h.n and certificate(fr.induced(sorted(y))) == hkey for y in components(fr)):
                hit += Fraction(factorial(n), u.aut_size * len(tied))
    total = count_labeled(c, n)
    return hit / total, Fraction(3 * k_n, 2 * h.n * n), k_n


def run_frag_experiment(plan: ExperimentPlan) -> ExperimentReport:
    t0 = time.perf_counter()
    c = plan.graph_class()
    rep = _new_report("frag", plan)
    rows = []
    for n in range(max(1, plan.n_min), plan.n_max + 1):
        st = labeled_stats(c, n)
        if st.total == 0:
            continue
        e = Fraction(sum(f * k for f, k in enumerate(st.by_frag)), st.total)
        rows.append([n, e, float(e)])
        rep.add(f"expected_frag_n{n}", e < 2, value=e, tolerance="< 2")
    rep.tables["expected_frag"] = Table(["n", "E_frag_exact", "E_frag"], rows)

    rho = plan.rho
    how = "given"
    if rho is None:
        rho, how = estimate_rho(c, plan.n_max)
    if c.connected_only:
        a = None
    elif c.flags.decomposable and c.flags.bridge_addable:
        a = c
    else:
        a = "skip"
    if a == "skip":
        rep.skip("frag_tv_trend", "class is not addable")
    else:
        tv_rows = []
        n_lo = max(plan.n_min, plan.params.get("tv_from", max(1, plan.n_max - 2)))
        for n in range(n_lo, plan.n_max + 1):
            if count_labeled(c, n) == 0:
                continue
            law = bp_law(a, rho, n)
            tv_rows.append([n, tv_distance(frag_distribution(c, n), law)])
        rep.tables["frag_tv"] = Table(["n", "tv"], tv_rows)
        tvs = [r[1] for r in tv_rows]
        trend = all(x >= y - 1e-12 for x, y in zip(tvs, tvs[1:]))
        rep.add("frag_tv_trend", trend, value=tvs, tolerance=f"nonincreasing (rho {how} {rho:.6g})")

    h_name = plan.params.get("H")
    if h_name:
        from .graph import named_graph

        h = named_graph(h_name)
        brows = []
        ok = True
        for n in range(max(1, plan.n_min), plan.n_max + 1):
            if count_labeled(c, n) == 0:
                continue
            p, bound, k_n = limited_bound_check(c, h, n)
            brows.append([n, k_n, p, bound])
            ok &= p <= bound
        rep.tables["limited_bound"] = Table(["n", "k_n", "p_B", "bound"], brows)
        rep.add("limited_bound", ok, value=h_name, tolerance="P(B) <= 3k_n/(2v(H)n)")
    return _finish(rep, t0)


# cores -----------------------------------------------------------------------------


def core_frag_violations(c: GraphClass, n_max: int) -> list[Graph]:
    """Members with core > 2 frag where Frag(Core g) and Core(Frag g) are not isomorphic."""
    bad = []
    for n in range(n_max + 1):
        for u in class_unlabeled(c, n):
            g = u.canon
            cg = core2(g)
            fg = fragment(g)
            if cg.n > 2 * fg.n and certificate(fragment(cg)) != certificate(core2(fg)):
                bad.append(g)
    return bad


def run_core_experiment(plan: ExperimentPlan) -> ExperimentReport:
    t0 = time.perf_counter()
    c = plan.graph_class()
    rep = _new_report("core", plan)
    eps = float(plan.params.get("eps", 0.15))
    rho0 = plan.rho
    how = "given"
    if rho0 is None:
        rho0, how = estimate_rho(c, plan.n_max)
    try:
        rho2 = solve_rho2(rho0).rho2
    except OutOfRange:
        rho2 = 1.0 if rho0 > 0 else float("nan")
        how += ", clipped to 1/e"
    centre = 1.0 - rho2
    rows = []
    for n in range(max(1, plan.n_min), plan.n_max + 1):
        st = labeled_stats(c, n)
        if st.total == 0:
            continue
        outside = sum(cnt for k, cnt in enumerate(st.by_core) if abs(k / n - centre) > eps)
        rows.append([n, Fraction(outside, st.total), float(Fraction(outside, st.total))] + [Fraction(x, st.total) for x in st.by_core])
    width = max((len(r) for r in rows), default=3)
    rep.tables["core_profile"] = Table(
        ["n", "outside_exact", "outside"] + [f"p_core_{k}" for k in range(width - 3)],
        [r + [""] * (width - len(r)) for r in rows],
    )
    rep.add("predicted_core_fraction", None if math.isnan(centre) else True, value=centre, tolerance=f"eps={eps}, rho0 {how} {rho0:.6g}")

    bad = core_frag_violations(c, min(plan.n_max, 7))
    rep.add("core_frag_commutation", not bad, value=len(bad), tolerance="0 violations")

    cutoff = int(plan.params.get("cutoff", 6))
    core_cutoff = int(plan.params.get("core_cutoff", max(3, cutoff - 3)))
    if c.flags.decomposable and c.flags.trimmable and rho0 <= math.exp(-1.0):
        # components of R may be larger than their cores, so cores are compared only up to core_cutoff
        rng = np.random.Generator(np.random.PCG64(plan.seed))
        m1 = build_bp_model(c, rho0, cutoff)
        m2 = build_bp_model(min_degree2_of(c), rho2, core_cutoff)
        a = sparse_multiset_keys(m1, *sample_components(m1, plan.samples, rng), plan.samples, core=True, max_part=core_cutoff)
        b = sparse_multiset_keys(m2, *sample_components(m2, plan.samples, rng), plan.samples)
        tv = total_variation(a, b)
        tol = float(plan.params.get("tv_tol", 0.02))
        nonempty = 1.0 - m2.p_empty
        rep.add(
            "core_of_bp_tv", tv <= tol, value=tv, tolerance=tol,
            detail=f"cutoff {cutoff}, core cutoff {core_cutoff}, P(core nonempty) {nonempty:.4g}",
        )
    else:
        rep.skip("core_of_bp_tv", "needs a decomposable trimmable class and rho0 <= 1/e")
    return _finish(rep, t0)


# inner cores -------------------------------------------------------------------------


def two_cycles_joined(k: int, j: int) -> Graph:
    """Two k-cycles joined by a path with j edges (j = 0 identifies a vertex)."""
    edges = [(i, i % k + 1) for i in range(1, k + 1)]
    prev = 1
    nxt = k + 1
    for _ in range(j):
        edges.append((prev, nxt))
        prev = nxt
        nxt += 1
    start = prev
    ring = [start] + list(range(nxt, nxt + k - 1))
    for a, b in zip(ring, ring[1:] + ring[:1]):
        edges.append((a, b))
    return Graph.from_edges(nxt + k - 2, edges)


def run_inner_core_suite(plan: ExperimentPlan) -> ExperimentReport:
    t0 = time.perf_counter()
    c = plan.graph_class()
    k = int(plan.params.get("k", 3))
    gadgets = InnerCoreGadgets(k)
    rep = _new_report("inner-core", plan)
    free = is_free_up_to(c, cycle(k), int(plan.params.get("free_bound", 4)))
    if not free:
        raise FreenessCheckFailed(str(free))
    orders = int(plan.params.get("orders", 20))
    conn = connected_of(c)
    confl = union = equal = 0
    total = 0
    for n in range(1, plan.n_max + 1):
        for u in class_unlabeled(conn, n):
            g = u.canon
            total += 1
            runs = [inner_core(g, c, gadgets, random.Random(plan.seed * 1000003 + s)) for s in range(orders)]
            verts = {r.vertices for r in runs}
            if len(verts) != 1:
                confl += 1
            sets = safe_sets(g, c, gadgets)
            star = frozenset().union(*sets) if sets else frozenset()
            if sets and star not in sets:
                union += 1
            if runs[0].vertices != star:
                equal += 1
    rep.add("confluence", confl == 0, value=confl, tolerance=f"0 of {total} graphs, {orders} orders")
    rep.add("safe_union_closed", union == 0, value=union, tolerance=f"0 of {total}")
    rep.add("icore_equals_safe_union", equal == 0, value=equal, tolerance=f"0 of {total}")
    ex = []
    for j in range(0, 6):
        g = two_cycles_joined(k, j)
        if not c.member(g) or g.n > 10:
            continue
        cases = {tuple(inner_core(g, c, gadgets, random.Random(s)).cases) for s in range(orders)}
        cores = {inner_core(g, c, gadgets, random.Random(s)).vertices for s in range(orders)}
        expect_c = j <= 1
        ok = (cases == {("c",)} and cores == {frozenset(g.vertices())}) if expect_c else (cores == {frozenset()} and all(x[0] in "ab" for x in cases))
        ex.append([j, g.n, "/".join(sorted(x[0] for x in cases)), ok])
        rep.add(f"two_cycles_path_j{j}", ok, value="/".join(sorted(x[0] for x in cases)), tolerance="c" if expect_c else "a or b")
    rep.tables["worked_example"] = Table(["j", "n", "cases", "ok"], ex)
    return _finish(rep, t0)


# everything -----------------------------------------------------------------------


def run_verify_all(plan: ExperimentPlan) -> list[ExperimentReport]:
    from .classes import verify_flags

    c = plan.graph_class()
    out = []
    t0 = time.perf_counter()
    flags = _new_report("flags", plan)
    for r in verify_flags(c, min(plan.n_max, 6)):
        flags.add(f"flag_{r.prop}", bool(r), value=str(r), tolerance=f"n <= {r.n_max}")
    out.append(_finish(flags, t0))
    out.append(run_identity_suite(plan))
    if c.flags.bridge_addable:
        out.append(run_connectivity(plan))
        out.append(run_frag_experiment(plan))
    if c.flags.trimmable and not c.connected_only:
        out.append(run_core_experiment(plan))
        if is_free_up_to(c, cycle(int(plan.params.get("k", 3))), 4):
            out.append(run_inner_core_suite(plan))
    return out
