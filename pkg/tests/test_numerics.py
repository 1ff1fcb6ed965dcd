import numpy as np
import pytest

from rbgames import DEFAULT_TOLS, SparseMatrix, Tolerances, approx_eq, seeded_rng, spmv


def test_default_tolerances():
    assert DEFAULT_TOLS.feasibility == 1e-7
    assert DEFAULT_TOLS.complementarity == 1e-7
    assert DEFAULT_TOLS.deviation == 3e-4
    assert DEFAULT_TOLS.zero == 1e-9


def test_tolerances_require_positive_values():
    with pytest.raises(ValueError):
        Tolerances(feasibility=0.0)
    with pytest.raises(ValueError):
        Tolerances(deviation=-1e-4)


def test_approx_eq():
    assert approx_eq(1.0, 1.0 + 5e-8)
    assert not approx_eq(1.0, 1.001)
    assert approx_eq(5.0, 5.4, eps=0.5)


def test_seeded_rng_is_reproducible():
    a = seeded_rng(123).integers(0, 1000, size=20)
    b = seeded_rng(123).integers(0, 1000, size=20)
    c = seeded_rng(124).integers(0, 1000, size=20)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sparse_matrix_basics():
    m = SparseMatrix(2, 3, [(1, 2, 5.0), (0, 0, 1.0), (0, 2, -2.0)])
    assert m.shape == (2, 3)
    assert m.nnz == 3
    # entries come back row-major regardless of construction order
    assert m.entries() == [(0, 0, 1.0), (0, 2, -2.0), (1, 2, 5.0)]
    dense = m.to_dense()
    assert np.array_equal(dense, np.array([[1.0, 0.0, -2.0], [0.0, 0.0, 5.0]]))


def test_sparse_matrix_drops_explicit_zeros():
    m = SparseMatrix(2, 2, [(0, 0, 0.0), (1, 1, 3.0)])
    assert m.nnz == 1


def test_sparse_matrix_rejects_bad_entries():
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [(0, 0, 1.0), (0, 0, 2.0)])  # duplicate
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [(2, 0, 1.0)])  # row out of range
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [(0, -1, 1.0)])  # col out of range
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [(0, 0, np.inf)])  # non-finite


def test_sparse_matrix_is_immutable():
    m = SparseMatrix(1, 1, [(0, 0, 2.0)])
    with pytest.raises(AttributeError):
        m.nrows = 5


def test_sparse_matvec_matches_dense():
    rng = seeded_rng(7)
    for _ in range(25):
        nr = int(rng.integers(1, 6))
        nc = int(rng.integers(1, 6))
        dense = np.round(rng.normal(size=(nr, nc)) * 3)
        m = SparseMatrix.from_dense(dense)
        x = rng.normal(size=nc)
        y = rng.normal(size=nr)
        assert np.allclose(m.matvec(x), dense @ x)
        assert np.allclose(spmv(m, x), dense @ x)
        assert np.allclose(m.rmatvec(y), dense.T @ y)
        assert m == SparseMatrix.from_dense(dense)


def test_sparse_from_dense_round_trip():
    dense = np.array([[0.0, 2.0], [-1.0, 0.0]])
    m = SparseMatrix.from_dense(dense)
    assert m.nnz == 2
    assert np.array_equal(m.to_dense(), dense)
