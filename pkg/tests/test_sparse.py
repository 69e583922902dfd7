import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pslr.errors import DimensionError, InvalidInput
from pslr.sparse import (
    CsrMatrix,
    add,
    bandwidth,
    diagonal_matrix,
    from_coo,
    from_dense,
    identity,
    is_symmetric,
    permute_columns,
    permute_symmetric,
    spmv,
    transpose,
)


def sparse_dense(shape):
    vals = st.sampled_from([0.0, 0.0, 0.0, 1.0, -2.5, 3.25, 1e-3])
    return arrays(np.float64, shape, elements=vals)


dense_mats = st.tuples(st.integers(1, 8), st.integers(1, 8)).flatmap(sparse_dense)


@given(dense_mats)
def test_dense_roundtrip(a):
    m = from_dense(a)
    assert np.array_equal(m.to_dense(), a)
    assert m.nnz == np.count_nonzero(a)


@given(dense_mats, st.integers(0, 2**31))
def test_spmv_matches_dense(a, seed):
    x = np.random.default_rng(seed).standard_normal(a.shape[1])
    np.testing.assert_allclose(spmv(from_dense(a), x), a @ x, atol=1e-12)


@given(dense_mats)
def test_transpose(a):
    t = transpose(from_dense(a))
    assert t.shape == a.T.shape
    assert np.array_equal(t.to_dense(), a.T)


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(sparse_dense((n, n)), sparse_dense((n, n)))))
def test_add(pair):
    a, b = pair
    np.testing.assert_allclose(add(from_dense(a), from_dense(b), 2.0, -0.5).to_dense(), 2 * a - 0.5 * b)


def test_from_coo_sums_duplicates_and_sorts():
    m = from_coo(2, 3, [1, 0, 1, 1], [2, 1, 0, 2], [1.0, 2.0, 3.0, 4.0])
    assert np.array_equal(m.to_dense(), [[0, 2, 0], [3, 0, 5]])
    assert list(m.col_idx) == [1, 0, 2]


def test_from_coo_out_of_range():
    with pytest.raises((DimensionError, InvalidInput)):
        from_coo(2, 2, [0, 2], [0, 0], [1.0, 1.0])


def test_arrays_are_read_only():
    m = identity(3)
    with pytest.raises(ValueError):
        m.values[0] = 5.0


def test_spmv_dimension_mismatch():
    with pytest.raises(DimensionError):
        spmv(identity(3), np.ones(4))


def test_diagonal_helpers():
    d = diagonal_matrix([1.0, 2.0, 3.0])
    assert np.array_equal(d.diagonal(), [1, 2, 3])
    assert d.has_full_diagonal()
    assert not from_dense(np.array([[0.0, 1.0], [1.0, 0.0]])).has_full_diagonal()


@pytest.mark.parametrize("seed", range(5))
def test_permute_symmetric(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((6, 6)) * (rng.random((6, 6)) < 0.4)
    perm = rng.permutation(6)
    got = permute_symmetric(from_dense(a), perm).to_dense()
    assert np.array_equal(got, a[np.ix_(perm, perm)])
    assert np.array_equal(permute_columns(from_dense(a), perm).to_dense(), a[:, perm])


@pytest.mark.parametrize(
    "a, expected",
    [(np.eye(4), 0), (np.diag(np.ones(3), 1) + np.eye(4), 1), (np.eye(4)[::-1], 3)],
)
def test_bandwidth(a, expected):
    assert bandwidth(from_dense(a)) == expected


def test_is_symmetric():
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert is_symmetric(from_dense(a))
    a[0, 1] = 1.5
    assert not is_symmetric(from_dense(a))
    assert not is_symmetric(from_dense(np.ones((2, 3))))


def test_scipy_view_agrees():
    a = np.array([[1.0, 0.0, 2.0], [0.0, 0.0, 3.0]])
    assert np.array_equal(from_dense(a).to_scipy().toarray(), a)


def test_matmul_operator():
    m = from_dense(np.array([[1.0, 2.0], [3.0, 4.0]]))
    np.testing.assert_array_equal(m @ np.array([1.0, 1.0]), [3.0, 7.0])
    assert isinstance(m, CsrMatrix)
