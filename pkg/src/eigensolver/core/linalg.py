"""Dense numerical kernels: nullspaces, pivoted QR, clustered left eigenspaces and pencils."""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from .errors import DegeneratePencilError, IllConditionedBasisError
from ..utils.logger import get_logger

logger = get_logger()


def numerical_rank(singular_values: np.ndarray, rtol: float) -> int:
    """Count of singular values above rtol·σ_max."""
    if len(singular_values) == 0 or singular_values[0] == 0:
        return 0
    return int(np.sum(singular_values > rtol * singular_values[0]))


def svd_left_nullspace(M: np.ndarray, rtol: float) -> np.ndarray:
    """
    Orthonormal rows spanning {v : v·M ≈ 0}.

    Args:
        M: Matrix of shape (r, c)
        rtol: Singular values ≤ rtol·σ_max count as zero

    Returns:
        Matrix of shape (r − rank, r)
    """
    M = np.asarray(M)
    rows, cols = M.shape
    if cols == 0 or rows == 0:
        return np.eye(rows, dtype=complex)
    U, S, _ = scipy.linalg.svd(M, full_matrices=True)
    rank = numerical_rank(S, rtol)
    return U[:, rank:].conj().T


def qr_col_pivot(N: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    QR factorization with column pivoting, N[:, p] = Q·R.

    Raises:
        ValueError: fewer columns than rows
    """
    N = np.asarray(N)
    rows, cols = N.shape
    if cols < rows:
        raise ValueError(f"need at least {rows} columns for pivoted QR, got {cols}")
    Q, R, p = scipy.linalg.qr(N, mode="full", pivoting=True)
    return Q, R, p


@dataclass(frozen=True)
class EigenCluster:
    eigenvalue: complex
    left_basis: np.ndarray  # m × γ, rows are left eigenvectors

    @property
    def multiplicity(self) -> int:
        return self.left_basis.shape[0]


@dataclass(frozen=True)
class EigenClusters:
    clusters: List[EigenCluster] = field(default_factory=list)
    cluster_tol: float = 1e-6

    def __len__(self) -> int:
        return len(self.clusters)

    def __iter__(self):
        return iter(self.clusters)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([c.eigenvalue for c in self.clusters], dtype=complex)


def group_close(values: np.ndarray, threshold: float) -> List[List[int]]:
    # single-linkage grouping of complex numbers
    groups: List[List[int]] = []
    unassigned = list(range(len(values)))
    while unassigned:
        group = [unassigned.pop(0)]
        grew = True
        while grew:
            grew = False
            for k in list(unassigned):
                if np.min(np.abs(values[group] - values[k])) <= threshold:
                    group.append(k)
                    unassigned.remove(k)
                    grew = True
        groups.append(sorted(group))
    return groups


def left_eig_clustered(M: np.ndarray, cluster_tol: float) -> EigenClusters:
    """
    Eigenvalues of M grouped within cluster_tol·‖M‖, each with a left-eigenspace basis.

    Singleton clusters use the LAPACK left eigenvector. Merged clusters take the
    left singular vectors of M − μI whose singular values fall below the same
    threshold (at least one, at most the cluster size).
    """
    M = np.asarray(M, dtype=complex)
    gamma = M.shape[0]
    if gamma == 0:
        return EigenClusters([], cluster_tol)
    try:
        w, vl = scipy.linalg.eig(M, left=True, right=False)
    except (np.linalg.LinAlgError, ValueError) as e:
        logger.error(f"❌ Eigendecomposition failed: {e}")
        raise

    norm = max(np.linalg.norm(M, 2), np.finfo(float).tiny)
    threshold = cluster_tol * norm
    clusters = []
    for group in group_close(w, threshold):
        if len(group) == 1:
            k = group[0]
            v = vl[:, k].conj()
            clusters.append(EigenCluster(complex(w[k]), (v / np.linalg.norm(v))[None, :]))
            continue
        mu = complex(np.mean(w[group]))
        U, S, _ = scipy.linalg.svd(M - mu * np.eye(gamma))
        small = int(np.sum(S[-len(group):] <= threshold))
        size = min(len(group), max(1, small))
        basis = U[:, gamma - size:].conj().T
        clusters.append(EigenCluster(mu, basis))
    return EigenClusters(clusters, cluster_tol)


@dataclass(frozen=True)
class GeneralizedEigenpair:
    value: complex  # nan when infinite
    vector: np.ndarray
    infinite: bool = False


def gep_left(B1: np.ndarray, B2: np.ndarray, inf_tol: float = 1e-12) -> List[GeneralizedEigenpair]:
    """
    Left eigenpairs of the pencil (B1, B2): c·B1 = μ·c·B2.

    Raises:
        DegeneratePencilError: both matrices numerically zero
    """
    B1 = np.asarray(B1, dtype=complex)
    B2 = np.asarray(B2, dtype=complex)
    if B1.shape != B2.shape or B1.shape[0] != B1.shape[1]:
        raise ValueError(f"pencil needs square matrices of equal size, got {B1.shape} and {B2.shape}")
    n1, n2 = np.linalg.norm(B1), np.linalg.norm(B2)
    scale = max(n1, n2)
    if scale == 0 or scale < np.finfo(float).tiny:
        raise DegeneratePencilError("degenerate pencil")

    ab, vl = scipy.linalg.eig(B1, B2, left=True, right=False, homogeneous_eigvals=True)
    alpha, beta = ab
    pairs = []
    for k in range(len(alpha)):
        c = vl[:, k].conj()
        c = c / np.linalg.norm(c)
        if abs(beta[k]) <= inf_tol * max(abs(alpha[k]), np.finfo(float).tiny) or beta[k] == 0:
            pairs.append(GeneralizedEigenpair(complex(np.nan, np.nan), c, infinite=True))
        else:
            pairs.append(GeneralizedEigenpair(complex(alpha[k] / beta[k]), c))
    return pairs


def back_substitute(lower: np.ndarray, rhs: np.ndarray, diag_tol: float = 1e-14) -> np.ndarray:
    """
    Solve lower·X = rhs for a lower-triangular factor.

    Raises:
        IllConditionedBasisError: a diagonal entry is below diag_tol·max|diag|
    """
    lower = np.asarray(lower)
    diag = np.abs(np.diag(lower))
    if len(diag) and (diag.max() == 0 or diag.min() <= diag_tol * diag.max()):
        raise IllConditionedBasisError("basis ill-conditioned; re-draw f0")
    return scipy.linalg.solve_triangular(lower, rhs, lower=True)


def mutual_projection_residual(A: np.ndarray, B: np.ndarray) -> float:
    """Largest residual of projecting each row space onto the other (0 for equal row spaces)."""
    def residual(X, Y):
        if X.shape[0] == 0:
            return 0.0
        Qy = scipy.linalg.orth(Y.T)
        proj = (X @ Qy.conj()) @ Qy.T
        return float(np.linalg.norm(X - proj) / max(np.linalg.norm(X), np.finfo(float).tiny))

    if A.shape[0] != B.shape[0]:
        return float("inf")
    return max(residual(A, B), residual(B, A))


def random_complex(shape, rng: np.random.Generator, scale: Optional[float] = None) -> np.ndarray:
    """Circular complex Gaussian matrix."""
    scale = 1 / np.sqrt(2) if scale is None else scale
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
