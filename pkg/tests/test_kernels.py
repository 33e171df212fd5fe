"""The numba and numpy back-ends must agree exactly."""
import numpy as np
import pytest

from structura import kernels
from structura.labeled import labeled_copies
from structura.graph import complete, cycle, named_graph

nb = kernels.numba_backend
npb = kernels.numpy_backend

pytestmark = pytest.mark.skipif(nb is None, reason="numba unavailable")


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_mask_features(n):
    m = n * (n - 1) // 2
    a = nb.mask_features(n, 0, 1 << m)
    b = npb.mask_features(n, 0, 1 << m)
    assert a.keys() == b.keys()
    for k in a:
        np.testing.assert_array_equal(a[k], b[k])


def test_mask_features_window():
    a = nb.mask_features(7, 1000, 5000)
    b = npb.mask_features(7, 1000, 5000)
    for k in a:
        np.testing.assert_array_equal(a[k], b[k])


def test_induced_submasks():
    rng = np.random.default_rng(0)
    masks = rng.integers(0, 1 << 21, size=2000)
    vmasks = rng.integers(0, 1 << 7, size=2000)
    np.testing.assert_array_equal(nb.induced_submasks(7, masks, vmasks), npb.induced_submasks(7, masks, vmasks))


@pytest.mark.parametrize("h", [complete(3), cycle(4), complete(4), named_graph("K23")])
def test_minor_level(h):
    prev_a = prev_b = None
    for n in range(h.n, 7):
        base = labeled_copies(h) if n == h.n else np.zeros(0, dtype=np.int64)
        prev_a = nb.minor_level(n, prev_a, base)
        prev_b = npb.minor_level(n, prev_b, base)
        np.testing.assert_array_equal(prev_a, prev_b)


def test_upward_closure():
    rng = np.random.default_rng(1)
    x = rng.random(1 << 10) < 0.01
    y = x.copy()
    nb.upward_closure(x, 10)
    npb.upward_closure(y, 10)
    np.testing.assert_array_equal(x, y)
    idx = np.arange(1 << 10)
    for s in np.flatnonzero(y[:64]):
        assert y[idx[(idx & s) == s]].all()


def test_canon_search():
    from structura.canon import _refine

    rng = np.random.default_rng(2)
    for _ in range(100):
        n = int(rng.integers(2, 8))
        mask = int(rng.integers(0, 1 << (n * (n - 1) // 2)))
        from structura.graph import Graph

        g = Graph.from_mask(n, mask)
        cells = _refine(g.rows, (0,) * n)
        classes = [[v] for c in cells for v in c]
        ids = {v: i for i, v in enumerate(v for c in cells for v in c)}
        cell_classes = [[ids[v] for v in c] for c in cells]
        rows = np.array(g.rows, dtype=np.int64)
        la, ca = nb.canon_search(rows, cell_classes, classes)
        lb, cb = npb.canon_search(rows, cell_classes, classes)
        assert list(map(int, la)) == list(map(int, lb)) and int(ca) == int(cb)


def test_poisson_inversion():
    rng = np.random.default_rng(3)
    mu = np.array([0.0, 0.01, 0.5, 3.0, 12.0])
    u = rng.random((5000, mu.size))
    a = nb.poisson_inversion(mu, u)
    b = npb.poisson_inversion(mu, u)
    np.testing.assert_array_equal(a, b)
    assert (a[:, 0] == 0).all()
    assert abs(a[:, 3].mean() - 3.0) < 0.15


def test_backend_flag_is_reported():
    assert kernels.BACKEND_NAME in ("numba", "numpy")


@pytest.mark.parametrize("flag, want", [("1", "numpy"), ("", "numba")])
def test_env_flag_selects_backend(flag, want):
    import os
    import subprocess
    import sys

    env = dict(os.environ, STRUCTURA_DISABLE_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from structura import kernels; print(kernels.BACKEND_NAME)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == want
