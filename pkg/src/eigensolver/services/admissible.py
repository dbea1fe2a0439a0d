"""Admissible tuples: explicit family constructions, incremental construction and diagnostics."""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import CompatibilityError, RankConditionError, TupleConstructionError
from ..core.lattice import (
    ExponentRecoveryTable,
    LatticePolytope,
    cartesian_product,
    codegree,
    dilate_lattice_points,
    ehrhart_coeffs,
    hull_lattice_points,
    lattice_condition,
    minkowski_points,
    minkowski_sum,
    simplex,
)
from ..core.macaulay import (
    DEFAULT_COMPRESSION_FACTOR,
    DEFAULT_RTOL,
    CokernelBasis,
    build_macaulay,
    cokernel,
    corank,
    extend_cokernel,
    n_matrix,
    rank_condition,
)
from ..core.poly import Polynomial, PolySystem, Support, random_polynomial
from ..utils.logger import get_logger

logger = get_logger()


class TupleFamily(str, Enum):
    """How an admissible tuple was obtained."""

    DENSE = "dense"
    UNMIXED = "unmixed"
    MULTI_DENSE = "multi_dense"
    MULTI_UNMIXED = "multi_unmixed"
    MIXED = "mixed"
    INCREMENTAL = "incremental"
    CUSTOM = "custom"


@dataclass(frozen=True)
class AdmissibleTuple:
    """
    Exponent sets (A0, E0, E1, …, Es, D) parameterizing the Macaulay construction.

    The lattice condition on A0 is checked at construction. Compatibility
    depends on the supports of the system and is checked by the constructors
    and again at solve time via ``check_compatibility``.
    """

    A0: Support
    E: Tuple[Support, ...]
    D: Support
    family: TupleFamily = TupleFamily.CUSTOM

    def __post_init__(self):
        object.__setattr__(self, "E", tuple(self.E))
        object.__setattr__(self, "family", TupleFamily(self.family))
        if len(self.E) < 1:
            raise TupleConstructionError("a tuple needs at least the shift set E0")
        dims = {self.A0.dim, self.D.dim, *(Ei.dim for Ei in self.E)}
        if len(dims) != 1:
            raise TupleConstructionError(f"exponent sets live in different dimensions {sorted(dims)}")
        _ = self.recovery_table

    @cached_property
    def recovery_table(self) -> ExponentRecoveryTable:
        return lattice_condition(self.A0)

    @property
    def dim(self) -> int:
        return self.D.dim

    @property
    def s(self) -> int:
        return len(self.E) - 1

    @property
    def E0(self) -> Support:
        return self.E[0]

    @property
    def shifts(self) -> Tuple[Support, ...]:
        """E1, …, Es."""
        return self.E[1:]

    def check_compatibility(self, supports: Sequence[Support]) -> None:
        """
        Assert A_i + E_i ⊆ D for A0 and the given A_1..A_s.

        Raises:
            CompatibilityError: naming the first offending (i, β, α)
        """
        supports = list(supports)
        if len(supports) != self.s:
            raise TupleConstructionError(f"tuple has {self.s} shift sets but the system has {len(supports)} polynomials")
        for i, (Ai, Ei) in enumerate(zip([self.A0, *supports], self.E)):
            if len(Ai) == 0 or len(Ei) == 0:
                continue
            sums = (Ei.array[:, None, :] + Ai.array[None, :, :]).reshape(-1, self.dim)
            missing = np.flatnonzero(self.D.locate(sums) < 0)
            if len(missing):
                b, a = divmod(int(missing[0]), len(Ai))
                raise CompatibilityError(i, Ei[b], Ai[a])

    def summary(self) -> Dict[str, object]:
        return {
            "family": self.family.value,
            "n": self.dim,
            "s": self.s,
            "A0": len(self.A0),
            "E": [len(Ei) for Ei in self.E],
            "D": len(self.D),
        }


def _dilation(P: LatticePolytope, factor: int) -> Support:
    if factor < 0:
        raise TupleConstructionError(f"system too small for the degree bound (dilation factor {factor})")
    return dilate_lattice_points(P, factor)


def _block_tuple(
    polytopes: Sequence[LatticePolytope],
    degree_matrix: Sequence[Sequence[int]],
    family: TupleFamily,
) -> Tuple[AdmissibleTuple, List[Support]]:
    # product over blocks of ((Σ_{j≠i} d_{j,k} − codeg(P_k) + 1)·P_k), with d_{0,k} = 1
    degrees = np.asarray(degree_matrix, dtype=np.int64)
    r = len(polytopes)
    if degrees.ndim != 2 or degrees.shape[1] != r:
        raise TupleConstructionError(f"degree matrix must have {r} columns, got shape {degrees.shape}")
    if np.any(degrees < 1):
        raise TupleConstructionError("all degrees must be positive")
    for P in polytopes:
        if not P.contains(np.zeros((1, P.dim), dtype=np.int64))[0]:
            raise TupleConstructionError("polytope must contain the origin")

    full = np.vstack([np.ones((1, r), dtype=np.int64), degrees])
    totals = full.sum(axis=0)
    codegs = [codegree(P) for P in polytopes]
    logger.debug(f"Block codegrees {codegs}, degree totals {totals.tolist()}")

    E = []
    for i in range(len(full)):
        E.append(cartesian_product([
            _dilation(P, int(totals[k] - full[i, k] - codegs[k] + 1)) for k, P in enumerate(polytopes)
        ]))
    D = cartesian_product([_dilation(P, int(totals[k] - codegs[k] + 1)) for k, P in enumerate(polytopes)])
    A0 = cartesian_product([dilate_lattice_points(P, 1) for P in polytopes])
    supports = [
        cartesian_product([dilate_lattice_points(P, int(full[i, k])) for k, P in enumerate(polytopes)])
        for i in range(1, len(full))
    ]
    tup = AdmissibleTuple(A0, tuple(E), D, family)
    tup.check_compatibility(supports)
    logger.info(f"🧩 Built {family.value} tuple: {tup.summary()}")
    return tup, supports


def tuple_dense(n: int, degrees: Sequence[int]) -> AdmissibleTuple:
    """Tuple for dense systems with deg f_i ≤ d_i."""
    return _block_tuple([simplex(n)], [[d] for d in degrees], TupleFamily.DENSE)[0]


def tuple_unmixed(A: Support, degrees: Sequence[int]) -> AdmissibleTuple:
    """Tuple for systems with Conv(A_i) = d_i·P, P = Conv(A)."""
    P = LatticePolytope(A)
    return _block_tuple([P], [[d] for d in degrees], TupleFamily.UNMIXED)[0]


def tuple_multi_dense(block_sizes: Sequence[int], degree_matrix: Sequence[Sequence[int]]) -> AdmissibleTuple:
    """Tuple for multi-graded dense systems; degree_matrix[i][k] bounds the degree of f_i in block k."""
    return _block_tuple([simplex(nk) for nk in block_sizes], degree_matrix, TupleFamily.MULTI_DENSE)[0]


def tuple_multi_unmixed(polytopes: Sequence[LatticePolytope], degree_matrix: Sequence[Sequence[int]]) -> AdmissibleTuple:
    """Tuple for multi-unmixed systems with one polytope per variable block."""
    return _block_tuple(list(polytopes), degree_matrix, TupleFamily.MULTI_UNMIXED)[0]


def tuple_mixed(supports: Sequence[Support]) -> AdmissibleTuple:
    """
    Tuple for arbitrary supports with P_0 = Δ_n.

    E_i is the set of lattice points of Σ_{j≠i} Conv(A_j) and D those of
    the full sum.
    """
    supports = list(supports)
    if not supports:
        raise TupleConstructionError("need at least one support")
    n = supports[0].dim
    generator_sets = [simplex(n).generators, *supports]

    D_points = minkowski_points(generator_sets)
    D_polytope = LatticePolytope(Support.from_array(D_points, n))
    D = dilate_lattice_points(D_polytope, 1)
    E = []
    for i in range(len(generator_sets)):
        others = generator_sets[:i] + generator_sets[i + 1:]
        E.append(hull_lattice_points(minkowski_points(others)) if others else Support.origin(n))
    A0 = dilate_lattice_points(simplex(n), 1)
    tup = AdmissibleTuple(A0, tuple(E), D, TupleFamily.MIXED)
    tup.check_compatibility(supports)
    logger.info(f"🧩 Built mixed tuple: {tup.summary()}")
    return tup


@dataclass(frozen=True)
class IncrementalResult:
    tuple: AdmissibleTuple
    cokernel: CokernelBasis
    n_f0: np.ndarray
    f0: Polynomial
    lam: int


def _unmixed_levels(P: LatticePolytope, degrees: Sequence[int], lam: int) -> Tuple[List[Support], Support]:
    # E_i^λ = ((λ − d_i)·P) ∩ ℕⁿ, empty when λ < d_i; i = 0..s with d_0 = 1
    E = []
    for d in [1, *degrees]:
        E.append(dilate_lattice_points(P, lam - d) if lam >= d else Support((), P.dim))
    return E, dilate_lattice_points(P, lam)


def incremental_unmixed(
    F: PolySystem,
    A: Support,
    degrees: Sequence[int],
    rng: np.random.Generator,
    rtol: float = DEFAULT_RTOL,
    lambda_cap: Optional[int] = None,
    compression_factor: float = DEFAULT_COMPRESSION_FACTOR,
) -> IncrementalResult:
    """
    Smallest degree λ at which the unmixed tuple satisfies the rank condition.

    The cokernel is updated degree by degree with ``extend_cokernel`` while a
    single random f0 is tested at every level.

    Raises:
        RankConditionError: λ passes the degree bound without success
    """
    degrees = [int(d) for d in degrees]
    if len(degrees) != len(F):
        raise TupleConstructionError(f"expected {len(F)} degrees, got {len(degrees)}")
    P = LatticePolytope(A)
    if lambda_cap is None:
        lambda_cap = 1 + sum(degrees) - codegree(P) + 1

    A0 = dilate_lattice_points(P, 1)
    f0 = random_polynomial(A0, rng, "complex")
    lam = max(degrees)
    E, D = _unmixed_levels(P, degrees, lam)
    C = cokernel(F, E[1:], D, rtol, rng, compression_factor)
    logger.info(f"📈 λ={lam}: #D={len(D)}, γ={C.gamma}")

    while not rank_condition(C, f0, E[0], rtol):
        if lam >= lambda_cap:
            raise RankConditionError(f"rank condition never met up to λ={lambda_cap}")
        E_next, D_next = _unmixed_levels(P, degrees, lam + 1)
        E_new = [En.difference(Ec) for En, Ec in zip(E_next[1:], E[1:])]
        C = extend_cokernel(C, F, E_new, D_next, rtol, rng, compression_factor)
        lam, E, D = lam + 1, E_next, D_next
        logger.info(f"📈 λ={lam}: #D={len(D)}, γ={C.gamma}")

    tup = AdmissibleTuple(A0, tuple(E), D, TupleFamily.INCREMENTAL)
    tup.check_compatibility(F.supports)
    logger.success(f"✅ Rank condition met at λ={lam} with γ={C.gamma}, #D={len(D)}")
    return IncrementalResult(tup, C, n_matrix(C, f0, E[0]), f0, lam)


@dataclass(frozen=True)
class HilbertPrediction:
    lambda_min: int
    coeffs: List[int]
    semiregular_assumed: bool


def lambda_min_semiregular(A: Support, degrees: Sequence[int]) -> HilbertPrediction:
    """
    First degree with a non-positive coefficient in ES_P(t)·Π_{i=0..s}(1 − t^{d_i}).

    ``degrees`` lists d_0, d_1, …, d_s. Without such a coefficient up to the
    degree bound, the bound itself is returned and the system is not
    assumed semi-regular.
    """
    P = LatticePolytope(A)
    degrees = [int(d) for d in degrees]
    bound = sum(degrees) - codegree(P) + 1
    counts = np.array(ehrhart_coeffs(P, max(bound, 0)), dtype=np.int64)

    factor = np.zeros(len(counts), dtype=np.int64)
    factor[0] = 1
    for d in degrees:
        shifted = np.zeros_like(factor)
        shifted[d:] = factor[:len(factor) - d] if d < len(factor) else 0
        factor = factor - shifted
    series = np.convolve(counts, factor)[:len(counts)]

    nonpositive = np.flatnonzero(series <= 0)
    if len(nonpositive):
        lam = int(nonpositive[0])
        return HilbertPrediction(lam, series[:lam].tolist(), True)
    logger.warning(f"⚠️  No non-positive coefficient up to the bound {bound}")
    return HilbertPrediction(bound, series.tolist(), False)


def commutativity_defect(F: PolySystem, tup: AdmissibleTuple, f0: Polynomial, rtol: float = DEFAULT_RTOL) -> Tuple[int, int]:
    """
    Corank drop caused by the f0² columns on the tuple enlarged by A0, together with γ.

    Returns:
        (HF(F; E + A0; D + A0) − HF((f0², F); (E0, E + A0); D + A0), γ)
    """
    gamma = corank(build_macaulay(F, tup.shifts, tup.D), rtol)
    shifts = [minkowski_sum(Ei, tup.A0) for Ei in tup.shifts]
    D_big = minkowski_sum(tup.D, tup.A0)
    hf_system = corank(build_macaulay(F, shifts, D_big), rtol)
    hf_with_square = corank(build_macaulay([f0 * f0, *F], [tup.E0, *shifts], D_big), rtol)
    return hf_system - hf_with_square, gamma


def commutativity_check(F: PolySystem, tup: AdmissibleTuple, f0: Polynomial, rtol: float = DEFAULT_RTOL) -> bool:
    """True when the matrices M_g of this tuple pairwise commute."""
    difference, gamma = commutativity_defect(F, tup, f0, rtol)
    logger.debug(f"Commutativity: corank drop {difference}, γ={gamma}")
    return gamma == 0 or difference == gamma


def tuple_size_gap(n: int, degrees: Sequence[int]) -> Dict[str, int]:
    """#D for the semi-regular λ_min, the dense bound and the mixed bound of a dense system."""
    P = simplex(n)
    prediction = lambda_min_semiregular(P.generators, [1, *degrees])
    total = 1 + sum(degrees)
    return {
        "lambda_min": prediction.lambda_min,
        "semiregular": len(P.lattice_points(prediction.lambda_min)),
        "dense": len(P.lattice_points(total - n)),
        "mixed": len(P.lattice_points(total)),
    }
