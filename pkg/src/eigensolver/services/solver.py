"""
Eigenvalue solver: multiplication-like matrices M_g, common eigenspaces and root recovery.

Pipeline: cokernel of the Macaulay matrix, a random f0 with the rank
condition, the family {M_{x^α} : α ∈ A0}, the left eigenstructure of a random
M_g refined by a second random M_h, and coordinates from eigenvalue ratios.
Candidates are filtered by their backward error.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from pydantic import BaseModel, Field

from ..config.settings import Settings
from ..core.errors import (
    CompatibilityError,
    IllConditionedBasisError,
    LatticeError,
    RankConditionError,
    RootExtractionError,
)
from ..core.lattice import ExponentRecoveryTable, lattice_condition, recover_point
from ..core.linalg import (
    back_substitute,
    gep_left,
    group_close,
    left_eig_clustered,
    numerical_rank,
    qr_col_pivot,
    random_complex,
)
from ..core.macaulay import CokernelBasis, cokernel, n_matrix, rank_condition
from ..core.poly import Exponent, Polynomial, PolySystem, Support, backward_error, random_polynomial
from ..utils.logger import get_logger, timed
from .admissible import AdmissibleTuple

logger = get_logger()


class SolveOptions(BaseModel):
    """Tolerances and randomness of a single solve."""

    rtol: float = Field(default=1e-8, gt=0, description="Relative singular-value tolerance for ranks")
    cluster_tol: float = Field(default=1e-6, gt=0, description="Eigenvalue clustering tolerance relative to ||M_g||")
    eigvec_tol: float = Field(default=1e-6, gt=0, description="Tolerance of the common-eigenvector test")
    bwe_threshold: float = Field(default=1e-6, gt=0, description="Backward-error filter")
    dedup_tol: float = Field(default=1e-6, ge=0, description="Relative distance under which roots are merged")
    compression_factor: float = Field(default=1.5, ge=1, description="Compress when sum #E_i > factor * #D")
    max_f0_redraws: int = Field(default=3, ge=0, description="Redraws of f0 before giving up")
    check_eigenvector: bool = Field(default=False, description="Cross-check roots with the eigenvector criterion")
    seed: Optional[int] = Field(default=None, description="Seed of the random draws")

    @classmethod
    def from_settings(cls, settings: Settings, **overrides: Any) -> "SolveOptions":
        """Defaults from settings, replaced by every override that is not None."""
        values = {
            "rtol": settings.rank_rtol,
            "cluster_tol": settings.cluster_tol,
            "eigvec_tol": settings.eigvec_tol,
            "bwe_threshold": settings.bwe_threshold,
            "dedup_tol": settings.dedup_tol,
            "compression_factor": settings.compression_factor,
            "max_f0_redraws": settings.max_f0_redraws,
            "check_eigenvector": settings.check_eigenvector,
            "seed": settings.seed,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass(frozen=True)
class MgFamily:
    """
    The matrices M_{x^α}, α ∈ A0, in the representative Q0*·M·Q0.

    ``basis`` lists the exponents of B in pivot order; ``canonical`` maps a
    representative back to N_{g,B}·N_{f0,B}⁻¹.
    """

    mx: Tuple[np.ndarray, ...]
    basis: Tuple[Exponent, ...]
    q0: np.ndarray
    r_hat0: np.ndarray
    f0: Polynomial
    a0: Support

    @property
    def gamma(self) -> int:
        return len(self.basis)

    def combine(self, coeffs: Sequence[complex]) -> np.ndarray:
        """Σ_j coeffs_j · M_{x^{α_j}}."""
        coeffs = np.asarray(coeffs, dtype=complex)
        if len(coeffs) != len(self.mx):
            raise ValueError(f"expected {len(self.mx)} coefficients, got {len(coeffs)}")
        return np.tensordot(coeffs, np.stack(self.mx), axes=1)

    def of(self, g: Polynomial) -> np.ndarray:
        """M_g for a polynomial supported in A0."""
        if not g.support.issubset(self.a0):
            raise ValueError("polynomial support is not contained in A0")
        return self.combine([g.coefficient(alpha) for alpha in self.a0])

    def canonical(self, M: np.ndarray) -> np.ndarray:
        return self.q0 @ M @ self.q0.conj().T


@dataclass(frozen=True)
class Precomputed:
    """Offline results that let solve start at the basis selection."""

    cokernel: CokernelBasis
    f0: Optional[Polynomial] = None
    basis: Optional[Sequence[Exponent]] = None


def build_mg_family(
    C: CokernelBasis,
    tup: AdmissibleTuple,
    f0: Polynomial,
    rtol: float = 1e-8,
    basis: Optional[Sequence[Exponent]] = None,
) -> MgFamily:
    """
    Select the basis B and compute M_{x^α} for every α ∈ A0.

    B is formed by the first γ pivots of a column-pivoted QR of N_f0 unless a
    basis is forced. Each matrix solves R̂0*·X = N_{x^α,B}*·Q0 by back
    substitution.

    Raises:
        RankConditionError: N_f0 does not have rank γ
        IllConditionedBasisError: R̂0 is numerically singular
    """
    gamma = C.gamma
    N = n_matrix(C, f0, tup.E0)
    if gamma and numerical_rank(scipy.linalg.svd(N, compute_uv=False), rtol) < gamma:
        raise RankConditionError("rank condition failed for this f0")

    if basis is None:
        Q, R, p = qr_col_pivot(N)
        cols = p[:gamma]
    else:
        cols = tup.E0.locate(np.asarray(basis, dtype=np.int64).reshape(-1, tup.dim))
        if len(cols) != gamma or np.any(cols < 0):
            raise ValueError(f"forced basis must be {gamma} exponents of E0")
        Q, R = scipy.linalg.qr(N[:, cols], mode="full")
    r_hat = R[:gamma, :gamma]
    B = tup.E0.array[cols]
    lower = r_hat.conj().T

    mx = []
    for alpha in tup.A0.array:
        positions = C.col_index.locate(B + alpha)
        if np.any(positions < 0):
            k = int(np.flatnonzero(positions < 0)[0])
            raise CompatibilityError(0, tuple(B[k].tolist()), tuple(alpha.tolist()))
        N_alpha = C.data[:, positions]
        X = back_substitute(lower, N_alpha.conj().T @ Q)
        mx.append(X.conj().T)
    basis_exps = tuple(tuple(int(a) for a in b) for b in B)
    logger.debug(f"Basis B = {basis_exps}")
    return MgFamily(tuple(mx), basis_exps, Q, r_hat, f0, tup.A0)


def _is_common_eigenvector(block: np.ndarray, Mh: np.ndarray, mu: complex, tol: float) -> bool:
    residual = np.linalg.norm(block @ Mh - mu * block)
    scale = max(np.linalg.norm(Mh, 2), 1.0) * max(np.linalg.norm(block), np.finfo(float).tiny)
    return residual <= tol * scale


def get_eigenspace(
    mu: complex,
    V: np.ndarray,
    Mh: np.ndarray,
    rtol: float,
    rng: np.random.Generator,
) -> List[np.ndarray]:
    """
    Blocks of the eigenspace V of M_g that are also left eigenvectors of M_h.

    Args:
        mu: Eigenvalue of M_g, for diagnostics
        V: m × γ matrix whose rows span the left eigenspace
        Mh: γ × γ matrix of a second random polynomial
        rtol: Tolerance of the eigenvector test
        rng: Source of the random projection

    Returns:
        A one-element list with the qualifying block C_i·V, or an empty list
        when no μ_i qualifies or more than one does (h not generic).
    """
    V = np.atleast_2d(V)
    m, gamma = V.shape
    if m == 1:
        stacked = np.vstack([V, V @ Mh])
        s = scipy.linalg.svd(stacked, compute_uv=False)
        return [V] if numerical_rank(s, rtol) == 1 else []

    O = random_complex((gamma, m), rng)
    VO = V @ O
    pairs = [pair for pair in gep_left(V @ Mh @ O, VO) if not pair.infinite]
    if not pairs:
        return []
    values = np.array([pair.value for pair in pairs])
    threshold = rtol * max(1.0, float(np.max(np.abs(values))))

    blocks = []
    for group in group_close(values, threshold):
        mu_i = complex(np.mean(values[group]))
        block = np.vstack([pairs[k].vector for k in group]) @ V
        if _is_common_eigenvector(block, Mh, mu_i, rtol):
            blocks.append(block)
    if len(blocks) > 1:
        logger.warning(f"⚠️  {len(blocks)} common eigenvalues of M_h inside the cluster at μ={mu:.6g}; h not generic, cluster dropped")
        return []
    return blocks


def extract_root(
    V: np.ndarray,
    fam: MgFamily,
    table: ExponentRecoveryTable,
    rng: np.random.Generator,
    zero_tol: float = 1e-12,
) -> np.ndarray:
    """
    Coordinates of the root attached to a common left eigenspace V.

    λ_j is the Rayleigh quotient of M_{x^{α_j}} (m = 1) or the averaged trace of
    its restriction to V (m > 1). The ratios λ_j/λ_0 equal ζ^{α_j}.

    Raises:
        RootExtractionError: the eigenvalue for α = 0 vanishes
    """
    V = np.atleast_2d(V)
    m, gamma = V.shape
    if m == 1:
        v = V[0]
        norm2 = np.vdot(v, v).real
        values = np.array([(v @ M @ v.conj()) / norm2 for M in fam.mx])
    else:
        T = random_complex((gamma, m), rng)
        W = V @ T
        values = np.array([np.trace(np.linalg.solve(W, V @ M @ T)) / m for M in fam.mx])

    base = values[table.base_index]
    if abs(base) <= zero_tol * max(float(np.max(np.abs(values))), np.finfo(float).tiny):
        raise RootExtractionError("eigenvalue not a root candidate")
    index = fam.a0.index
    ratios = [values[index[alpha]] / base for alpha in table.exponents]
    return recover_point(ratios, table)


def eigenvector_point(v: np.ndarray, C: CokernelBasis, fam: MgFamily) -> Optional[np.ndarray]:
    """
    Root read off the evaluation vector ζ^D reconstructed from a simple left eigenvector.

    Returns None when ℤD ≠ ℤⁿ, 0 ∉ D or the constant entry vanishes.
    """
    try:
        table = lattice_condition(C.col_index)
    except LatticeError:
        return None
    # a = v·Q0* is a left eigenvector of N_{g,B}·N_{f0,B}⁻¹ and a·Coker ∝ ζ^D
    a = np.asarray(v).reshape(-1) @ fam.q0.conj().T
    y = a @ C.data
    base = y[table.base_index]
    if abs(base) <= 1e-14 * max(float(np.max(np.abs(y))), np.finfo(float).tiny):
        return None
    index = C.col_index.index
    try:
        return recover_point([y[index[alpha]] / base for alpha in table.exponents], table)
    except LatticeError:
        return None


def commutator_norm(fam: MgFamily, rng: np.random.Generator, pairs: int = 5) -> float:
    """Largest ‖M_{g1}M_{g2} − M_{g2}M_{g1}‖ / (‖M_{g1}‖‖M_{g2}‖) over random pairs."""
    worst = 0.0
    for _ in range(pairs):
        G1 = fam.combine(random_complex(len(fam.mx), rng))
        G2 = fam.combine(random_complex(len(fam.mx), rng))
        scale = max(np.linalg.norm(G1) * np.linalg.norm(G2), np.finfo(float).tiny)
        worst = max(worst, float(np.linalg.norm(G1 @ G2 - G2 @ G1) / scale))
    return worst


@dataclass
class SolveReport:
    """Candidate roots that passed the backward-error filter, with run metadata."""

    solutions: List[np.ndarray]
    bwe: List[float]
    gamma: int
    d_size: int
    candidates_total: int
    timings: Dict[str, float]
    seed: int
    tolerances: Dict[str, float]
    f0_redraws: int = 0
    eigenvalues: List[complex] = field(default_factory=list)
    eigenvector_deviation: List[Optional[float]] = field(default_factory=list)
    f0: Optional[Polynomial] = None
    g: Optional[Polynomial] = None

    @property
    def max_bwe(self) -> float:
        return max(self.bwe) if self.bwe else 0.0

    def to_json_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "solutions": [
                {"re": z.real.tolist(), "im": z.imag.tolist(), "bwe": float(b)}
                for z, b in zip(self.solutions, self.bwe)
            ],
            "gamma": self.gamma,
            "d_size": self.d_size,
            "candidates_total": self.candidates_total,
            "timings": dict(self.timings),
            "seed": self.seed,
            "tolerances": dict(self.tolerances),
            "f0_redraws": self.f0_redraws,
        }
        if any(d is not None for d in self.eigenvector_deviation):
            data["eigenvector_deviation"] = self.eigenvector_deviation
        return data


@dataclass
class _Candidate:
    point: np.ndarray
    bwe: float
    eigenvalue: complex
    deviation: Optional[float] = None


def _deduplicate(candidates: List[_Candidate], tol: float) -> List[_Candidate]:
    kept: List[_Candidate] = []
    for cand in sorted(candidates, key=lambda c: c.bwe):
        scale = max(np.linalg.norm(cand.point), np.finfo(float).tiny)
        if all(np.linalg.norm(cand.point - k.point) / max(scale, np.linalg.norm(k.point)) >= tol for k in kept):
            kept.append(cand)
    return kept


def _select_family(
    C: CokernelBasis,
    tup: AdmissibleTuple,
    options: SolveOptions,
    rng: np.random.Generator,
    f0: Optional[Polynomial],
    basis: Optional[Sequence[Exponent]],
) -> Tuple[MgFamily, int]:
    redraws = 0
    for attempt in range(options.max_f0_redraws + 1):
        if f0 is None or attempt > 0:
            f0 = random_polynomial(tup.A0, rng, "complex")
        if not rank_condition(C, f0, tup.E0, options.rtol):
            logger.warning(f"⚠️  Rank condition failed for f0 (attempt {attempt + 1})")
        else:
            try:
                return build_mg_family(C, tup, f0, options.rtol, basis), redraws
            except IllConditionedBasisError as e:
                logger.warning(f"⚠️  {e} (attempt {attempt + 1})")
        redraws += 1
    raise RankConditionError("rank condition failed: tuple too small or solution set not zero-dimensional")


def solve(
    F: PolySystem,
    tup: AdmissibleTuple,
    options: Optional[SolveOptions] = None,
    precomputed: Optional[Precomputed] = None,
) -> SolveReport:
    """
    Candidate roots of F in the torus from an admissible tuple.

    Args:
        F: The polynomial system f_1, …, f_s
        tup: Admissible tuple compatible with the supports of F
        options: Tolerances and seed
        precomputed: Cokernel (and optionally f0 and basis) from an offline run

    Returns:
        Report whose solutions all have backward error ≤ options.bwe_threshold

    Raises:
        RankConditionError: no f0 satisfies the rank condition after the redraws
    """
    options = options or SolveOptions()
    seed = options.seed if options.seed is not None else int(np.random.SeedSequence().entropy % (2**63))
    rng = np.random.default_rng(seed)
    timings: Dict[str, float] = {}
    tolerances = {
        "rtol": options.rtol,
        "cluster_tol": options.cluster_tol,
        "eigvec_tol": options.eigvec_tol,
        "bwe_threshold": options.bwe_threshold,
        "dedup_tol": options.dedup_tol,
    }

    tup.check_compatibility(F.supports)
    if precomputed is not None:
        C = precomputed.cokernel
        if C.col_index != tup.D:
            raise ValueError("precomputed cokernel is not indexed by the tuple's D")
        f0, basis = precomputed.f0, precomputed.basis
    else:
        with timed(timings, "cokernel"):
            C = cokernel(F, tup.shifts, tup.D, options.rtol, rng, options.compression_factor)
        f0, basis = None, None
    logger.info(f"🔢 γ={C.gamma}, #D={C.d_size}")

    if C.gamma == 0:
        logger.warning("⚠️  Cokernel is trivial; the system has no solutions on this tuple")
        return SolveReport([], [], 0, C.d_size, 0, timings, seed, tolerances)

    with timed(timings, "basis"):
        fam, redraws = _select_family(C, tup, options, rng, f0, basis)

    with timed(timings, "eigen"):
        g_coeffs = random_complex(len(tup.A0), rng)
        h_coeffs = random_complex(len(tup.A0), rng)
        Mg = fam.combine(g_coeffs)
        Mh = fam.combine(h_coeffs)
        clusters = left_eig_clustered(Mg, options.cluster_tol)
    logger.info(f"🔍 {len(clusters)} eigenvalue clusters of M_g")

    candidates: List[_Candidate] = []
    with timed(timings, "extract"):
        for idx, cluster in enumerate(clusters):
            cluster_rng = np.random.default_rng([seed, idx])
            blocks = get_eigenspace(cluster.eigenvalue, cluster.left_basis, Mh, options.eigvec_tol, cluster_rng)
            if not blocks:
                logger.debug(f"Cluster {idx} (μ={cluster.eigenvalue:.6g}) has no common eigenvector")
            for V in blocks:
                try:
                    point = extract_root(V, fam, tup.recovery_table, cluster_rng)
                except (RootExtractionError, LatticeError) as e:
                    logger.debug(f"Cluster {idx}: {e}")
                    continue
                deviation = None
                if options.check_eigenvector and V.shape[0] == 1:
                    other = eigenvector_point(V[0], C, fam)
                    if other is not None:
                        deviation = float(np.linalg.norm(other - point) / max(np.linalg.norm(point), 1e-300))
                candidates.append(_Candidate(point, backward_error(F, point), cluster.eigenvalue, deviation))

    with timed(timings, "filter"):
        passed = [c for c in candidates if c.bwe <= options.bwe_threshold]
        kept = _deduplicate(passed, options.dedup_tol)
    logger.info(
        f"✅ {len(kept)} solutions from {len(candidates)} candidates "
        f"({len(candidates) - len(passed)} above BWE {options.bwe_threshold:g}, {len(passed) - len(kept)} duplicates)"
    )

    g = Polynomial.from_arrays(tup.A0.array, g_coeffs, tup.dim)
    return SolveReport(
        solutions=[c.point for c in kept],
        bwe=[c.bwe for c in kept],
        gamma=C.gamma,
        d_size=C.d_size,
        candidates_total=len(candidates),
        timings=timings,
        seed=seed,
        tolerances=tolerances,
        f0_redraws=redraws,
        eigenvalues=[c.eigenvalue for c in kept],
        eigenvector_deviation=[c.deviation for c in kept],
        f0=fam.f0,
        g=g,
    )
