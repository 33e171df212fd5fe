"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are repeated
in the terminal summary under "acceptance criteria".
"""
import math
import random
from fractions import Fraction
from itertools import combinations

import numpy as np

from structura.boltzmann import build_bp_model, sample_counts
from structura.canon import canonicalize
from structura.census import (
    build_census,
    count_by_core_size,
    count_connected,
    count_labeled,
    graphs_with_core,
    labeled_stats,
    r_nk,
    r_nk_formula,
    ratio_sequence,
    stratified_closed_form,
)
from structura.classes import _SIMPLE, builtin_class, connected, connected_of, excluded_minors, min_degree2_of
from structura.experiments import (
    ExperimentPlan,
    core_frag_violations,
    limited_bound_check,
    run_core_experiment,
    run_inner_core_suite,
)
from structura.graph import complete, components, cycle, diamond
from structura.inventory import class_unlabeled
from structura.series import (
    counts_series,
    eval_series,
    first_difference,
    monomial,
    rooted_tree_series,
    series_compose,
    series_exp,
    solve_rho2,
    tree_series,
)

N = 7


def egf(c, order=N):
    return counts_series(count_labeled(c, n) for n in range(order + 1))


def test_01_exponential_formula(criterion):
    bad = []
    for name in ("forests", "planar"):
        c = builtin_class(name)
        d = first_difference(series_exp(egf(connected_of(c))), egf(c))
        if d is not None:
            bad.append(f"{name}@{d}")
    criterion(1, "exponential formula G = exp(C), forests and planar, n <= 7", not bad, ", ".join(bad) or "exact")


def test_02_composition_identities(criterion):
    t = rooted_tree_series(N)
    forests = egf(builtin_class("forests"))
    bad = []
    for c in (builtin_class("planar"), excluded_minors([diamond()])):
        g_side = series_compose(egf(min_degree2_of(c)), t) * forests
        if first_difference(g_side, egf(c)) is not None:
            bad.append(f"{c.name}: G")
        conn = connected_of(c)
        c_side = series_compose(egf(min_degree2_of(conn)), t) + tree_series(N)
        if first_difference(c_side, egf(conn)) is not None:
            bad.append(f"{c.name}: C")
    criterion(2, "composition identities for G and C, planar and diamond-free, n <= 7", not bad, ", ".join(bad) or "exact")


def test_03_stratified_closed_form(criterion):
    c = connected()
    d = min_degree2_of(c)
    checked, bad = 0, []
    for n in range(4, N + 1):
        for k in range(3, n):
            checked += 1
            if count_by_core_size(c, n, k) != stratified_closed_form(n, k, count_labeled(d, k)):
                bad.append((n, k))
    example = count_by_core_size(c, 4, 3)
    ok = not bad and example == 12
    criterion(3, "count by core size = C(n,k)|D_k| k n^(n-1-k), n <= 7", ok, f"{checked} cases, (4,3) -> {example}")


def test_04_ratio_identity(criterion):
    c = connected()
    checked, bad = 0, []
    for n in range(4, N + 1):
        for k in range(3, n):
            r = r_nk(c, n, k)
            if r is None:
                continue
            checked += 1
            if r != r_nk_formula(n, k):
                bad.append((n, k))
    criterion(4, "r_nk = ((n-k)/n)(1-1/n)^(n-k-2) wherever defined, n <= 7", not bad and checked > 0, f"{checked} cases")


def test_05_connectivity_bound(criterion):
    worst = {}
    ok = True
    for name in ("forests", "planar"):
        c = builtin_class(name)
        ps = [Fraction(count_connected(c, n), count_labeled(c, n)) for n in range(1, N + 1)]
        worst[name] = min(ps)
        ok &= all(p >= math.exp(-1) for p in ps)
    f3 = Fraction(count_connected(builtin_class("forests"), 3), count_labeled(builtin_class("forests"), 3))
    ok &= f3 == Fraction(3, 7)
    detail = ", ".join(f"min {k} {float(v):.4f}" for k, v in worst.items()) + f", forests n=3 {f3}"
    criterion(5, "P(connected) >= 1/e for forests and planar, n <= 7", ok, detail)


def test_06_expected_fragment(criterion):
    names = [n for n in _SIMPLE if builtin_class(n).flags.bridge_addable] + ["excludedMinors(K4)"]
    worst = Fraction(0)
    ok = True
    for name in names:
        c = builtin_class(name)
        for n in range(1, N + 1):
            st = labeled_stats(c, n)
            if st.total == 0:
                continue
            e = Fraction(sum(f * k for f, k in enumerate(st.by_frag)), st.total)
            worst = max(worst, e)
            ok &= e < 2
    st = labeled_stats(builtin_class("forests"), 3)
    f3 = Fraction(sum(f * k for f, k in enumerate(st.by_frag)), st.total)
    ok &= f3 == Fraction(5, 7)
    criterion(6, "E[frag] < 2 for every bridge-addable class, n <= 7", ok, f"{len(names)} classes, max {float(worst):.4f}, forests n=3 {f3}")


def test_07_boltzmann_poisson_law(criterion):
    rho, size = 0.1, 10 ** 6
    forests = builtin_class("forests")
    model = build_bp_model(forests, rho, 6)
    counts = sample_counts(model, size, np.random.Generator(np.random.PCG64(20240607)))
    g_rho = model.g_rho
    problems = []

    def within(freq, p, label):
        sd = math.sqrt(p * (1 - p) / size)
        if abs(freq - p) > 4 * sd:
            problems.append(f"{label}: {freq:.6g} vs {p:.6g}")

    empty = float((counts.sum(axis=1) == 0).mean())
    within(empty, math.exp(-model.c_rho), "empty")

    # every forest on <= 4 vertices, with aut computed on the whole graph
    rows, freq = np.unique(counts, axis=0, return_counts=True)
    table = {r.tobytes(): f / size for r, f in zip(rows, freq)}
    checked = 0
    for m in range(0, 5):
        for u in class_unlabeled(forests, m):
            vec = np.zeros(len(model.shapes), dtype=np.int64)
            for comp in components(u.canon):
                vec[model.index(canonicalize(u.canon.induced(sorted(comp))))] += 1
            p = rho ** m / u.aut_size / g_rho
            within(table.get(vec.tobytes(), 0.0), p, f"H={u.canon.edges()} on {m}")
            checked += 1

    small = [i for i, s in enumerate(model.shapes) if s.n <= 4]
    for i, j in combinations(small, 2):
        a, b = counts[:, i].astype(float), counts[:, j].astype(float)
        ma, mb = model.mu[i], model.mu[j]
        sd = math.sqrt(((ma + ma * ma) * (mb + mb * mb) - ma * ma * mb * mb) / size)
        cov = float(np.mean(a * b) - a.mean() * b.mean())
        if abs(cov) > 4 * sd:
            problems.append(f"cov({i},{j}) = {cov:.3g}")
    detail = f"P(empty) {empty:.5f} vs {math.exp(-model.c_rho):.5f}, {checked} structures, {len(small) * (len(small) - 1) // 2} pairs"
    criterion(7, "BP law for forests, rho 0.1, cutoff 6, 10^6 samples, 4 sigma", not problems, "; ".join(problems) or detail)


def test_08_core_of_bp(criterion):
    planar = builtin_class("planar")
    cutoff = 8
    worst = 0.0
    for rho0 in (0.2, 0.28):
        for h in (cycle(3), cycle(4), diamond(), complete(4)):
            u = canonicalize(h)
            series = series_compose(monomial(h.n, Fraction(1, u.aut_size), cutoff), rooted_tree_series(cutoff))
            side_series = eval_series(series, rho0).value
            side_enum = sum(rho0 ** n / g.aut_size for n, gs in graphs_with_core(h, cutoff, planar).items() for g in gs)
            worst = max(worst, abs(side_series - side_enum) / side_enum)
    series_ok = worst <= 1e-6

    rep = run_core_experiment(
        ExperimentPlan("planar", n_max=4, rho=0.28, samples=10 ** 5, seed=8, params={"cutoff": 8, "core_cutoff": 4, "tv_tol": 0.02})
    )
    tv = next(c for c in rep.checks if c.name == "core_of_bp_tv")
    detail = f"series rel err {worst:.2e}; TV {tv.value:.4f} ({tv.detail})"
    criterion(8, "core of BP: series sum vs enumeration at cutoff 8, and sample TV <= 0.02", series_ok and tv.status == "pass", detail)


def test_09_rho2_solver(criterion):
    rng = random.Random(99)
    worst_res = 0.0
    for _ in range(100):
        rho0 = rng.uniform(1e-6, math.exp(-1) * (1 - 1e-9))
        s = solve_rho2(rho0)
        worst_res = max(worst_res, s.residual)
        assert 0 < s.rho2 < 1
    worst_rt = max(abs(solve_rho2(x * math.exp(-x)).rho2 - x) for x in [i / 10 for i in range(1, 10)])
    ok = worst_res <= 1e-12 and worst_rt <= 1e-12
    criterion(9, "rho2 solver residual and round trip", ok, f"max residual {worst_res:.1e}, max round-trip error {worst_rt:.1e}")


def test_10_core_fragment_commutation(criterion):
    bad = core_frag_violations(builtin_class("planar"), 6)
    n_graphs = sum(len(class_unlabeled(builtin_class("planar"), n)) for n in range(7))
    criterion(10, "Frag(Core g) = Core(Frag g) when core > 2 frag, planar n <= 6", not bad, f"{len(bad)} violations over {n_graphs} graphs")


def test_11_inner_core_suite(criterion):
    rep = run_inner_core_suite(ExperimentPlan("planar", n_max=7, params={"k": 3, "orders": 20}))
    failed = [c.name for c in rep.checks if c.status != "pass"]
    worked = "/".join(c.value for c in rep.checks if c.name.startswith("two_cycles_path"))
    conf = next(c for c in rep.checks if c.name == "confluence")
    criterion(11, "inner core: confluence, safe-set union, iCore = union, planar n <= 7", not failed,
              ", ".join(failed) or f"{conf.tolerance}; worked example j=0..5: {worked}")


def test_12_limited_bound(criterion):
    planar = builtin_class("planar")
    rows = []
    ok = True
    for n in range(1, N + 1):
        p, bound, k_n = limited_bound_check(planar, complete(4), n)
        rows.append(f"n{n}:{float(p):.3g}<={float(bound):.3g}")
        ok &= p <= bound
    criterion(12, "P(R_n in B) <= 3k_n/(2 v(H) n), planar, H = K4, n <= 7", ok, " ".join(rows))


def test_13_smoothness_trend(criterion):
    rs = ratio_sequence(build_census(builtin_class("forests"), N, 0))
    gaps = [abs(float(rs.values[n]) - math.exp(-1)) for n in range(4, N + 1)]
    ok = all(a >= b for a, b in zip(gaps, gaps[1:])) and gaps[-1] <= 0.15
    criterion(13, "forests |r_n - 1/e| nonincreasing on 4..7, r_7 within 0.15", ok, " ".join(f"{g:.4f}" for g in gaps))


def test_14_labeled_unlabeled_consistency(criterion):
    names = list(_SIMPLE) + ["excludedMinors(K4)", "minDegree2Of(planar)", "connectedOf(outerplanar)", "atMostEdges(3)"]
    bad = []
    for name in names:
        cen = build_census(builtin_class(name), 6, 6)
        bad += [f"{name}@{n}" for n in cen.inconsistencies()]
    criterion(14, "|G_n| = sum n!/aut(H) for every class, n <= 6", not bad, ", ".join(bad) or f"{len(names)} classes")

