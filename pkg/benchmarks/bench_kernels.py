"""Time the numba kernels against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--n 7] [--repeat 3]

Each kernel is run once per back-end to warm up (numba compiles on first
call), then timed as the best of ``--repeat`` runs. Outputs are compared so a
speed-up never hides a disagreement.
"""
import argparse
import time

import numpy as np

from structura import kernels
from structura.graph import complete
from structura.inventory import all_unlabeled
from structura.labeled import minor_bitmap

BACKENDS = {"numpy": kernels.numpy_backend, "numba": kernels.numba_backend}


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def canon_inputs(n):
    """Record the arguments canonicalization passes to canon_search on every graph with n vertices."""
    calls = []
    real = kernels.canon_search

    def spy(rows, cells, classes):
        calls.append((rows.copy(), [list(c) for c in cells], [list(c) for c in classes]))
        return real(rows, cells, classes)

    from structura import canon

    canon._canon_rows.cache_clear()
    kernels.canon_search = spy
    try:
        for u in all_unlabeled(n):
            canon.canonicalize(u.canon)
    finally:
        kernels.canon_search = real
    return calls


def cases(n):
    m = n * (n - 1) // 2
    k4 = complete(4)
    prev = minor_bitmap(k4, n - 1)
    rng = np.random.default_rng(0)
    mu = rng.random(50) * 0.05
    u = rng.random((200_000, 50))
    calls = canon_inputs(n)
    return {
        f"mask_features n={n}": (lambda b: b.mask_features(n, 0, 1 << m), lambda a, b: all(np.array_equal(a[k], b[k]) for k in a)),
        f"minor_level K4 n={n}": (lambda b: b.minor_level(n, prev, np.zeros(0, dtype=np.int64)), np.array_equal),
        "poisson_inversion 200000x50": (lambda b: b.poisson_inversion(mu, u), np.array_equal),
        f"canon_search {len(calls)} calls": (
            lambda b: [b.canon_search(r, c, k) for r, c, k in calls],
            lambda a, b: all(list(x[0]) == list(y[0]) and x[1] == y[1] for x, y in zip(a, b)),
        ),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=7, help="vertex count for the mask and canon kernels")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.numba_backend is None:
        raise SystemExit("numba is not importable; nothing to compare")
    print(f"{'kernel':34s} {'numpy s':>10s} {'numba s':>10s} {'speed-up':>9s}  agree")
    for name, (run, same) in cases(args.n).items():
        t = {k: best_of(lambda b=b: run(b), args.repeat) for k, b in BACKENDS.items()}
        agree = same(run(BACKENDS["numpy"]), run(BACKENDS["numba"]))
        print(f"{name:34s} {t['numpy']:10.4f} {t['numba']:10.4f} {t['numpy'] / t['numba']:8.1f}x  {agree}")


if __name__ == "__main__":
    main()
