import numpy as np
import pytest

from eigensolver.core.errors import DegeneratePencilError, IllConditionedBasisError
from eigensolver.core.linalg import (
    back_substitute,
    gep_left,
    group_close,
    left_eig_clustered,
    mutual_projection_residual,
    numerical_rank,
    qr_col_pivot,
    random_complex,
    svd_left_nullspace,
)


def test_numerical_rank_relative_threshold():
    assert numerical_rank(np.array([10.0, 1.0, 1e-9]), 1e-8) == 2
    assert numerical_rank(np.array([10.0, 1.0, 1e-6]), 1e-8) == 3
    assert numerical_rank(np.array([]), 1e-8) == 0
    assert numerical_rank(np.zeros(3), 1e-8) == 0


def test_left_nullspace_is_orthonormal_and_annihilates(rng):
    X = random_complex((6, 3), rng)
    M = X @ random_complex((3, 5), rng)
    L = svd_left_nullspace(M, 1e-10)
    assert L.shape == (3, 6)
    assert np.allclose(L @ M, 0, atol=1e-10)
    assert np.allclose(L @ L.conj().T, np.eye(3), atol=1e-12)


def test_left_nullspace_of_empty_matrix_is_identity():
    assert np.array_equal(svd_left_nullspace(np.zeros((3, 0)), 1e-8), np.eye(3))


def test_qr_col_pivot_reconstructs(rng):
    N = random_complex((3, 6), rng)
    Q, R, p = qr_col_pivot(N)
    assert np.allclose(Q @ R, N[:, p])
    diag = np.abs(np.diag(R))
    assert np.all(diag[:-1] >= diag[1:] - 1e-12)


def test_qr_col_pivot_needs_wide_matrix(rng):
    with pytest.raises(ValueError):
        qr_col_pivot(random_complex((4, 3), rng))


def test_group_close_is_single_linkage():
    values = np.array([0.0, 0.05, 0.1, 1.0, 5.0])
    assert group_close(values, 0.06) == [[0, 1, 2], [3], [4]]


def test_left_eig_clustered_simple_spectrum(rng):
    V = random_complex((3, 3), rng)
    M = np.linalg.solve(V, np.diag([1.0, 2.0, -3.0])) @ V
    clusters = left_eig_clustered(M, 1e-6)
    assert len(clusters) == 3
    assert np.allclose(sorted(clusters.eigenvalues.real), [-3, 1, 2])
    for c in clusters:
        assert c.multiplicity == 1
        assert np.allclose(c.left_basis @ M, c.eigenvalue * c.left_basis, atol=1e-10)


def test_left_eig_clustered_repeated_eigenvalue(rng):
    V = random_complex((4, 4), rng)
    M = np.linalg.solve(V, np.diag([2.0, 2.0, 2.0, 7.0])) @ V
    clusters = left_eig_clustered(M, 1e-6)
    by_size = sorted(clusters, key=lambda c: c.multiplicity)
    assert [c.multiplicity for c in by_size] == [1, 3]
    triple = by_size[1]
    assert triple.eigenvalue == pytest.approx(2.0, abs=1e-8)
    assert np.allclose(triple.left_basis @ M, 2.0 * triple.left_basis, atol=1e-8)


def test_left_eig_clustered_jordan_block_keeps_one_vector():
    M = np.array([[3.0, 1.0], [0.0, 3.0]])
    clusters = left_eig_clustered(M, 1e-6)
    assert len(clusters) == 1
    assert clusters.clusters[0].multiplicity == 1


def test_gep_left_finite_and_infinite():
    B1 = np.diag([2.0, 3.0])
    B2 = np.diag([1.0, 0.0])
    pairs = gep_left(B1, B2)
    finite = [p for p in pairs if not p.infinite]
    assert len(finite) == 1 and finite[0].value == pytest.approx(2.0)
    assert sum(p.infinite for p in pairs) == 1
    c = finite[0].vector
    assert np.allclose(c @ B1, finite[0].value * (c @ B2))


def test_gep_left_rejects_degenerate_pencil():
    with pytest.raises(DegeneratePencilError):
        gep_left(np.zeros((2, 2)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        gep_left(np.eye(2), np.eye(3))


def test_back_substitute_solves_lower_system(rng):
    L = np.tril(random_complex((4, 4), rng)) + 3 * np.eye(4)
    rhs = random_complex((4, 2), rng)
    assert np.allclose(L @ back_substitute(L, rhs), rhs)


def test_back_substitute_flags_small_diagonal():
    L = np.array([[1.0, 0.0], [1.0, 1e-16]])
    with pytest.raises(IllConditionedBasisError, match="re-draw f0"):
        back_substitute(L, np.ones(2))


def test_mutual_projection_residual(rng):
    A = random_complex((2, 5), rng)
    T = random_complex((2, 2), rng)
    assert mutual_projection_residual(A, T @ A) < 1e-12
    assert mutual_projection_residual(A, random_complex((2, 5), rng)) > 1e-3
    assert mutual_projection_residual(A, A[:1]) == float("inf")
