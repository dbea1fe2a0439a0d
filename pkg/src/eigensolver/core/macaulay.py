"""Macaulay matrices, coranks, cokernels and degree-by-degree cokernel updates."""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.io
import scipy.linalg
import scipy.sparse

from .errors import CompatibilityError
from .linalg import numerical_rank, random_complex, svd_left_nullspace
from .poly import Exponent, Polynomial, Support
from ..utils.logger import get_logger

logger = get_logger()

DEFAULT_RTOL = 1e-8
DEFAULT_COMPRESSION_FACTOR = 1.5


@dataclass(frozen=True)
class MacaulayMatrix:
    """Matrix of (g_1, …, g_s) ↦ Σ g_i f_i with rows indexed by D and columns by (i, β ∈ E_i)."""

    data: np.ndarray
    row_index: Support
    col_index: Tuple[Tuple[int, Exponent], ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape


@dataclass(frozen=True)
class CokernelBasis:
    """Rows spanning the left nullspace of a Macaulay matrix, columns indexed by D."""

    data: np.ndarray
    col_index: Support
    rank_tol: float = DEFAULT_RTOL

    @property
    def gamma(self) -> int:
        return self.data.shape[0]

    @property
    def d_size(self) -> int:
        return len(self.col_index)


def build_macaulay(polys: Sequence[Polynomial], E: Sequence[Support], D: Support) -> MacaulayMatrix:
    """
    Assemble M(F, E; D) with entry c_{i,α−β} at row α and column (i, β).

    Raises:
        CompatibilityError: some β + α with α ∈ A_i, β ∈ E_i is not in D
    """
    polys = list(polys)
    if len(E) != len(polys):
        raise ValueError(f"expected {len(polys)} shift sets, got {len(E)}")
    for i, (f, Ei) in enumerate(zip(polys, E)):
        if f.dim != D.dim or Ei.dim != D.dim:
            raise ValueError(f"dimension mismatch in polynomial {i}")

    n_cols = sum(len(Ei) for Ei in E)
    data = np.zeros((len(D), n_cols), dtype=complex)
    col_index: List[Tuple[int, Exponent]] = []
    offset = 0
    for i, (f, Ei) in enumerate(zip(polys, E)):
        col_index.extend((i, beta) for beta in Ei)
        if len(Ei) == 0 or f.is_zero:
            offset += len(Ei)
            continue
        exps = f.support.array
        shifted = Ei.array[:, None, :] + exps[None, :, :]
        rows = D.locate(shifted.reshape(-1, D.dim)).reshape(len(Ei), len(exps))
        missing = np.argwhere(rows < 0)
        if len(missing):
            b, a = missing[0]
            raise CompatibilityError(i, Ei[int(b)], f.support[int(a)])
        cols = offset + np.repeat(np.arange(len(Ei)), len(exps))
        data[rows.reshape(-1), cols] = np.tile(f.coefficients, len(Ei))
        offset += len(Ei)
    return MacaulayMatrix(data, D, tuple(col_index))


def _singular_values(M: np.ndarray) -> np.ndarray:
    if M.size == 0:
        return np.zeros(0)
    return scipy.linalg.svd(M, compute_uv=False)


def corank(M: Union[MacaulayMatrix, np.ndarray], rtol: float = DEFAULT_RTOL) -> int:
    """#rows − numerical rank, counting singular values above rtol·σ_max."""
    data = M.data if isinstance(M, MacaulayMatrix) else np.asarray(M)
    return data.shape[0] - numerical_rank(_singular_values(data), rtol)


def _compressed(data: np.ndarray, rng: np.random.Generator, factor: float) -> np.ndarray:
    rows, cols = data.shape
    if cols <= factor * rows:
        return data
    logger.debug(f"🗜️  Compressing {rows}x{cols} Macaulay matrix to {rows}x{rows}")
    return data @ random_complex((cols, rows), rng)


def cokernel(
    polys: Sequence[Polynomial],
    E: Sequence[Support],
    D: Support,
    rtol: float = DEFAULT_RTOL,
    rng: Optional[np.random.Generator] = None,
    compression_factor: float = DEFAULT_COMPRESSION_FACTOR,
) -> CokernelBasis:
    """
    Left nullspace of M(F, E; D) through the SVD.

    Wide matrices are first multiplied by a random complex Gaussian matrix,
    which leaves the left nullspace unchanged with probability one.
    """
    rng = rng if rng is not None else np.random.default_rng()
    M = build_macaulay(polys, E, D)
    data = M.data
    if data.shape[1] == 0 or not np.any(data):
        logger.warning(f"⚠️  Macaulay matrix is zero; cokernel is the identity on {len(D)} monomials")
        return CokernelBasis(np.eye(len(D), dtype=complex), D, rtol)
    basis = svd_left_nullspace(_compressed(data, rng, compression_factor), rtol)
    logger.debug(f"Cokernel: #D={len(D)}, columns={data.shape[1]}, gamma={basis.shape[0]}")
    return CokernelBasis(basis, D, rtol)


def n_matrix(C: CokernelBasis, f0: Polynomial, E0: Support) -> np.ndarray:
    """N_f0 = Coker · M(f0, E0; D), columns indexed by E0."""
    return C.data @ build_macaulay([f0], [E0], C.col_index).data


def rank_condition(C: CokernelBasis, f0: Polynomial, E0: Support, rtol: float = DEFAULT_RTOL) -> bool:
    """True iff N_f0 has numerical rank γ."""
    if C.gamma == 0:
        return True
    N = n_matrix(C, f0, E0)
    return numerical_rank(_singular_values(N), rtol) == C.gamma


def extend_cokernel(
    C: CokernelBasis,
    polys: Sequence[Polynomial],
    E_new: Sequence[Support],
    D_next: Support,
    rtol: float = DEFAULT_RTOL,
    rng: Optional[np.random.Generator] = None,
    compression_factor: float = DEFAULT_COMPRESSION_FACTOR,
) -> CokernelBasis:
    """
    Cokernel at the next degree from the cokernel at the current one.

    The columns of the current cokernel are padded with an identity block on
    the new monomials D_next \\ D; only the new Macaulay columns have to be
    multiplied and factored.
    """
    D_prev = C.col_index
    if not D_prev.issubset(D_next):
        raise ValueError("current row index is not contained in the next one")
    new_rows = D_next.difference(D_prev)
    if len(new_rows) == 0 and all(len(Ei) == 0 for Ei in E_new):
        return C

    # block order: D_prev first, then the new monomials
    ordered = np.vstack([D_prev.array, new_rows.array]) if len(new_rows) else D_prev.array
    perm = D_next.locate(ordered)
    if np.any(perm < 0) or len(np.unique(perm)) != len(D_next):
        raise ValueError("row ordering of the extended Macaulay matrix does not match the block columns")

    gamma, k = C.gamma, len(new_rows)
    block = np.zeros((gamma + k, len(D_next)), dtype=complex)
    block[:gamma, :len(D_prev)] = C.data
    block[gamma:, len(D_prev):] = np.eye(k)

    M_new = build_macaulay(polys, E_new, D_next).data[perm, :]
    product = block @ M_new
    if product.shape[1] == 0 or not np.any(product):
        L = np.eye(gamma + k, dtype=complex)
    else:
        rng = rng if rng is not None else np.random.default_rng()
        L = svd_left_nullspace(_compressed(product, rng, compression_factor), rtol)
    ordered_basis = L @ block

    data = np.empty_like(ordered_basis)
    data[:, perm] = ordered_basis
    logger.debug(f"Extended cokernel: #D {len(D_prev)} -> {len(D_next)}, gamma {gamma} -> {data.shape[0]}")
    return CokernelBasis(data, D_next, rtol)


def dump_matrix_market(M: Union[MacaulayMatrix, np.ndarray], path: Union[str, Path]) -> Path:
    """Write a matrix in MatrixMarket coordinate format for inspection."""
    data = M.data if isinstance(M, MacaulayMatrix) else np.asarray(M)
    path = Path(path)
    with open(path, "wb") as fh:
        scipy.io.mmwrite(fh, scipy.sparse.coo_matrix(data))
    logger.info(f"💾 Wrote {data.shape[0]}x{data.shape[1]} matrix to {path}")
    return path
