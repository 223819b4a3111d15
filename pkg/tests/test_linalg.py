import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from abgc.linalg import haar_orthogonal, randomized_truncated_svd, row_l2_normalize, spmm


def test_spmm_examples():
    d = np.arange(6.0).reshape(3, 2)
    assert np.array_equal(spmm(sp.identity(3, format="csr"), d), d)
    assert np.array_equal(spmm(sp.csr_matrix((3, 3)), d), np.zeros((3, 2)))
    s = sp.csr_matrix([[0.0, 1.0], [2.0, 0.0]])
    assert spmm(s, np.ones((2, 1))).tolist() == [[1.0], [2.0]]
    assert spmm(s, np.ones((2, 1)), transpose_sparse=True).tolist() == [[2.0], [1.0]]


def test_spmm_dimension_mismatch():
    with pytest.raises(ValueError):
        spmm(sp.identity(3, format="csr"), np.ones((2, 2)))
    with pytest.raises(ValueError):
        spmm(sp.csr_matrix((3, 2)), np.ones((2, 2)), transpose_sparse=True)


def test_spmm_triple_product_matches_dense(rng):
    for _ in range(10):
        s = sp.random(20, 30, density=0.2, random_state=rng, format="csr")
        d = rng.standard_normal((20, 4))
        got = spmm(s, spmm(s, d, transpose_sparse=True))
        dense = s.toarray()
        want = dense @ (dense.T @ d)
        assert np.linalg.norm(got - want) <= 1e-9 * np.linalg.norm(want)


def test_haar_small_and_orthogonal():
    q = haar_orthogonal(1, 3)
    assert q.shape == (1, 1) and abs(q[0, 0]) == 1.0
    for dim in (2, 7, 64):
        for seed in range(5):
            q = haar_orthogonal(dim, seed)
            assert np.linalg.norm(q.T @ q - np.eye(dim)) < 1e-10


def test_haar_deterministic():
    assert np.array_equal(haar_orthogonal(16, 9), haar_orthogonal(16, 9))
    assert not np.array_equal(haar_orthogonal(16, 9), haar_orthogonal(16, 10))


@pytest.mark.slow
def test_haar_entry_mean_is_zero():
    vals = np.array([haar_orthogonal(64, s)[0, 0] for s in range(10_000)])
    assert abs(vals.mean()) < 0.05


def test_rsvd_examples():
    _, s, _ = randomized_truncated_svd(np.eye(5), 5)
    assert np.allclose(s, 1.0)
    _, s, _ = randomized_truncated_svd(np.diag([3.0, 2.0, 1.0]), 2)
    assert np.allclose(s, [3.0, 2.0], atol=1e-8)
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal(8), rng.standard_normal(6)
    m = np.outer(a, b)
    u, s, v = randomized_truncated_svd(m, 1)
    assert np.linalg.norm(m - (u * s) @ v.T) < 1e-8


def test_rsvd_contract(rng):
    for _ in range(10):
        m = rng.standard_normal((40, 25)) @ np.diag(0.8 ** np.arange(25))
        k = 5
        u, s, v = randomized_truncated_svd(m, k, seed=3)
        assert u.shape == (40, k) and v.shape == (25, k)
        assert np.allclose(u.T @ u, np.eye(k), atol=1e-8)
        assert np.allclose(v.T @ v, np.eye(k), atol=1e-8)
        assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
        sigma = np.linalg.svd(m, compute_uv=False)
        assert np.linalg.norm(m - (u * s) @ v.T, 2) <= 1.5 * sigma[k]


def test_rsvd_reproducible_and_range_checked(rng):
    m = rng.standard_normal((12, 9))
    a = randomized_truncated_svd(m, 3, seed=5)
    b = randomized_truncated_svd(m, 3, seed=5)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    with pytest.raises(ValueError):
        randomized_truncated_svd(m, 10)
    with pytest.raises(ValueError):
        randomized_truncated_svd(m, 0)


def test_row_normalize_examples():
    assert np.allclose(row_l2_normalize(np.array([[3.0, 4.0]])), [[0.6, 0.8]])
    assert row_l2_normalize(np.zeros((1, 2))).tolist() == [[0.0, 0.0]]
    unit = np.array([[1.0, 0.0], [0.6, 0.8]])
    assert np.array_equal(row_l2_normalize(unit), unit)


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 5)),
              elements=st.floats(-1e150, 1e150, allow_nan=False)))
def test_row_normalize_properties(m):
    once = row_l2_normalize(m)
    assert np.array_equal(row_l2_normalize(once), once)
    norms = np.linalg.norm(once, axis=1)
    zero = ~m.any(axis=1)
    assert np.all(once[zero] == 0)
    assert np.allclose(norms[~zero], 1.0, atol=1e-12)
