"""Random and planted-root polynomial systems for every tuple family."""
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg

from ..core.lattice import LatticePolytope, cartesian_product, dilate_lattice_points, simplex
from ..core.linalg import random_complex
from ..core.poly import Polynomial, PolySystem, Support, monomial_vector, random_polynomial
from ..utils.logger import get_logger

logger = get_logger()


@dataclass(frozen=True)
class PlantedSystem:
    """Overdetermined system together with the points it was built to vanish at."""

    system: PolySystem
    roots: np.ndarray  # δ × n
    support: Support


def gen_vandermonde_system(
    A: Support,
    delta: int,
    rng: np.random.Generator,
    points: Optional[np.ndarray] = None,
    noise: float = 0.0,
) -> PlantedSystem:
    """
    System with support A vanishing at δ planted points.

    The coefficient vectors span the right nullspace of the row-normalized
    Vandermonde matrix (ζ_i^A / ‖ζ_i^A‖), so there are s = #A − δ equations.

    Args:
        A: Common support
        delta: Number of planted points
        rng: Random generator
        points: Planted points (δ × n); complex standard normal draws when omitted
        noise: Relative Gaussian perturbation of every coefficient

    Raises:
        ValueError: "not overdetermined" when δ ≥ #A − n, or the planted
            points give a rank-deficient Vandermonde matrix
    """
    n = A.dim
    if delta < 1 or delta >= len(A) - n:
        raise ValueError(f"not overdetermined: δ={delta} needs 1 ≤ δ < #A − n = {len(A) - n}")
    if points is None:
        points = random_complex((delta, n), rng)
    points = np.asarray(points, dtype=complex).reshape(delta, n)

    rows = np.vstack([monomial_vector(z, A) for z in points])
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    kernel = scipy.linalg.null_space(rows, rcond=1e-12)
    s = kernel.shape[1]
    if s != len(A) - delta:
        raise ValueError(f"Vandermonde matrix is rank deficient: {s} equations instead of {len(A) - delta}")

    polys = []
    for j in range(s):
        coeffs = kernel[:, j]
        if noise:
            coeffs = coeffs * (1 + noise * rng.standard_normal(len(coeffs)))
        polys.append(Polynomial.from_arrays(A.array, coeffs, n))
    logger.debug(f"Planted {delta} roots in {s} equations on #A={len(A)}")
    return PlantedSystem(PolySystem(tuple(polys)), points, A)


def _random_system(supports: Sequence[Support], rng: np.random.Generator) -> PolySystem:
    return PolySystem(tuple(random_polynomial(A, rng, "real") for A in supports))


def gen_dense(n: int, degrees: Sequence[int], rng: np.random.Generator) -> PolySystem:
    """Dense polynomials with all monomials of degree ≤ d_i."""
    if any(d < 1 for d in degrees):
        raise ValueError("degrees must be positive")
    P = simplex(n)
    return _random_system([dilate_lattice_points(P, int(d)) for d in degrees], rng)


def gen_unmixed(A: Support, degrees: Sequence[int], rng: np.random.Generator) -> PolySystem:
    """Polynomials supported on all lattice points of d_i·Conv(A)."""
    if any(d < 1 for d in degrees):
        raise ValueError("degrees must be positive")
    P = LatticePolytope(A)
    return _random_system([dilate_lattice_points(P, int(d)) for d in degrees], rng)


def _block_supports(polytopes: Sequence[LatticePolytope], degree_matrix: Sequence[Sequence[int]]) -> List[Support]:
    degrees = np.asarray(degree_matrix, dtype=np.int64)
    if degrees.ndim != 2 or degrees.shape[1] != len(polytopes) or np.any(degrees < 1):
        raise ValueError(f"degree matrix must be positive with {len(polytopes)} columns")
    return [
        cartesian_product([dilate_lattice_points(P, int(d)) for P, d in zip(polytopes, row)])
        for row in degrees
    ]


def gen_multi_dense(block_sizes: Sequence[int], degree_matrix: Sequence[Sequence[int]], rng: np.random.Generator) -> PolySystem:
    """Multi-graded dense system; row i of the degree matrix bounds f_i per block."""
    return _random_system(_block_supports([simplex(nk) for nk in block_sizes], degree_matrix), rng)


def gen_multi_unmixed(
    polytopes: Sequence[LatticePolytope],
    degree_matrix: Sequence[Sequence[int]],
    rng: np.random.Generator,
) -> PolySystem:
    return _random_system(_block_supports(polytopes, degree_matrix), rng)


def gen_mixed(supports: Sequence[Support], rng: np.random.Generator) -> PolySystem:
    """Real random coefficients on the given supports."""
    return _random_system(list(supports), rng)
