import numpy as np
import pytest
from hypothesis import given, strategies as st

from autolearn import _kernels

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@st.composite
def tables(draw):
    n = draw(st.integers(1, 12))
    k = draw(st.integers(1, 3))
    delta = np.array(draw(st.lists(st.lists(st.integers(0, n - 1), min_size=k, max_size=k), min_size=n, max_size=n)))
    accepting = np.array(draw(st.lists(st.booleans(), min_size=n, max_size=n)))
    return delta.astype(np.int64), accepting


@given(tables(), st.integers(0, 2**32 - 1))
def test_run_batch_parity(table, seed):
    delta, _ = table
    rng = np.random.default_rng(seed)
    lengths = rng.integers(0, 7, size=20)
    words = np.full((20, 7), -1, dtype=np.int64)
    for i, k in enumerate(lengths):
        words[i, :k] = rng.integers(0, delta.shape[1], size=k)
    expected = _kernels.run_batch_numpy(delta, 0, words, lengths)
    assert np.array_equal(_kernels.run_batch_numba(delta, 0, words, lengths), expected)


@given(tables())
def test_bfs_tree_parity(table):
    delta, _ = table
    a = _kernels.bfs_tree_numpy(delta, 0)
    b = _kernels.bfs_tree_numba(delta, 0)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


@given(tables())
def test_moore_classes_parity(table):
    delta, accepting = table
    assert np.array_equal(_kernels.moore_classes_numba(delta, accepting), _kernels.moore_classes_numpy(delta, accepting))


def test_backend_flag_selects_numpy(monkeypatch):
    import importlib

    monkeypatch.setenv("AUTOLEARN_PURE_NUMPY", "1")
    reloaded = importlib.reload(_kernels)
    try:
        assert reloaded.backend() == "numpy"
        assert reloaded.run_batch is reloaded.run_batch_numpy
    finally:
        monkeypatch.delenv("AUTOLEARN_PURE_NUMPY")
        importlib.reload(_kernels)
