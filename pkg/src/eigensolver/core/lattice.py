"""Lattice polytopes: dilations, Minkowski sums, codegree, Ehrhart counts and exponent recovery."""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .errors import LatticeError, TupleConstructionError
from .poly import Exponent, Support, lex_unique
from ..utils.logger import get_logger

logger = get_logger()


def affine_rank(points: np.ndarray) -> int:
    points = np.asarray(points, dtype=float)
    if len(points) <= 1:
        return 0
    return int(np.linalg.matrix_rank(points[1:] - points[0]))


def hull_vertices(points: np.ndarray) -> np.ndarray:
    """Vertices of Conv(points) when full-dimensional, else the points themselves."""
    points = np.asarray(points, dtype=np.int64)
    n = points.shape[1]
    if len(points) <= n + 1 or affine_rank(points) < n:
        return points
    if n == 1:
        return np.array([[points.min()], [points.max()]], dtype=np.int64)
    hull = ConvexHull(points.astype(float))
    return points[np.sort(hull.vertices)]


def _independent_rows(rows: Sequence[Sequence[int]], k: int) -> List[List[int]]:
    """First k rows that are linearly independent over ℚ, by exact elimination."""
    chosen: List[List[int]] = []
    reduced: List[Tuple[int, List[Fraction]]] = []
    for row in rows:
        r = [Fraction(c) for c in row]
        for pivot, basis in reduced:
            if r[pivot]:
                factor = r[pivot] / basis[pivot]
                r = [a - factor * b for a, b in zip(r, basis)]
        pivot = next((j for j, c in enumerate(r) if c), None)
        if pivot is None:
            continue
        chosen.append(list(row))
        reduced.append((pivot, r))
        if len(chosen) == k:
            break
    return chosen


def _int_det(matrix: List[List[int]]) -> int:
    """Determinant of an integer matrix by fraction-free (Bareiss) elimination."""
    M = [list(row) for row in matrix]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def exact_facets(vertices: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Primitive integer facet inequalities ``normals · x ≤ offsets`` of a full-dimensional hull.

    qhull only names the vertices of each facet. The normal is the integer
    cofactor vector of n − 1 independent edge directions, reduced by its gcd
    and oriented by the vertex centroid. Every inequality is then checked
    exactly against all vertices.

    Raises:
        TupleConstructionError: a facet normal could not be recovered exactly
    """
    vertices = np.asarray(vertices, dtype=np.int64)
    m, n = vertices.shape
    V = [[int(c) for c in v] for v in vertices]
    if n == 1:
        return np.array([[1], [-1]], dtype=np.int64), np.array([max(V)[0], -min(V)[0]], dtype=np.int64)

    total = [sum(col) for col in zip(*V)]
    scale = max(1.0, float(np.abs(vertices).max()))
    facets = set()
    for eq in ConvexHull(vertices.astype(float)).equations:
        on = np.flatnonzero(np.abs(vertices @ eq[:-1] + eq[-1]) <= 1e-9 * scale)
        base = V[on[0]]
        edges = _independent_rows([[a - b for a, b in zip(V[i], base)] for i in on[1:]], n - 1)
        if len(edges) < n - 1:
            raise TupleConstructionError(f"facet with {len(on)} vertices does not span a hyperplane")
        normal = [(-1) ** k * _int_det([e[:k] + e[k + 1:] for e in edges]) for k in range(n)]
        g = gcd(*normal)
        normal = [c // g for c in normal]
        offset = sum(a * b for a, b in zip(normal, base))
        # the centroid total/m lies strictly inside
        if sum(a * b for a, b in zip(normal, total)) > m * offset:
            normal, offset = [-c for c in normal], -offset
        facets.add((tuple(normal), offset))

    ordered = sorted(facets)
    A = np.array([list(normal) for normal, _ in ordered], dtype=np.int64)
    b = np.array([offset for _, offset in ordered], dtype=np.int64)
    if np.any(vertices @ A.T > b):
        raise TupleConstructionError("exact facet inequalities cut off a vertex")
    return A, b


@dataclass(frozen=True)
class LatticePolytope:
    """
    Full-dimensional lattice polytope P = Conv(generators).

    Membership in λ·P is decided exactly through the primitive integer facet
    inequalities ``normals · x ≤ λ·offsets``; no floating-point tolerance
    enters lattice-point enumeration or the interior test of ``codegree``.
    """

    generators: Support

    def __post_init__(self):
        if len(self.generators) == 0 or affine_rank(self.generators.array) != self.dim:
            raise TupleConstructionError(
                f"polytope generated by {len(self.generators)} points is not full-dimensional in R^{self.dim}"
            )

    @classmethod
    def of(cls, points: Sequence[Sequence[int]]) -> "LatticePolytope":
        return cls(Support.of(points))

    @property
    def dim(self) -> int:
        return self.generators.dim

    @cached_property
    def vertices(self) -> Support:
        return Support.from_array(hull_vertices(self.generators.array), self.dim)

    @cached_property
    def halfspaces(self) -> Tuple[np.ndarray, np.ndarray]:
        """Integer facet normals and offsets with P = {x : normals·x ≤ offsets}."""
        return exact_facets(self.vertices.array)

    @cached_property
    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        gens = self.generators.array
        return gens.min(axis=0), gens.max(axis=0)

    def slacks(self, points: np.ndarray, scale: int = 1) -> np.ndarray:
        """``normals·x − scale·offsets`` per point and facet; ≤ 0 inside scale·P."""
        normals, offsets = self.halfspaces
        return np.asarray(points, dtype=np.int64) @ normals.T - scale * offsets

    def contains(self, points: np.ndarray, scale: int = 1, strict: bool = False) -> np.ndarray:
        """
        Test membership of points in scale·P.

        Args:
            points: Array of shape ``(m, dim)``
            scale: Dilation factor λ
            strict: Require the points to lie in the interior

        Returns:
            Boolean array of length m
        """
        slack = self.slacks(np.asarray(points).reshape(-1, self.dim), scale)
        if strict:
            return np.all(slack < 0, axis=1)
        return np.all(slack <= 0, axis=1)

    def lattice_points(self, scale: int) -> np.ndarray:
        """Lattice points of scale·P in lexicographic order."""
        if scale < 0:
            raise ValueError(f"dilation factor must be nonnegative, got {scale}")
        if scale == 0:
            return np.zeros((1, self.dim), dtype=np.int64)

        normals, offsets = self.halfspaces
        lo, hi = scale * self.bounds[0], scale * self.bounds[1]
        rhs = scale * offsets

        # coordinate-by-coordinate expansion, pruning prefixes that no completion
        # inside the bounding box can bring back into the polytope
        prefixes = np.zeros((1, 0), dtype=np.int64)
        partial = np.zeros((1, len(offsets)), dtype=np.int64)
        for k in range(self.dim):
            values = np.arange(lo[k], hi[k] + 1, dtype=np.int64)
            rest = normals[:, k + 1:]
            rest_min = np.minimum(rest * lo[k + 1:], rest * hi[k + 1:]).sum(axis=1)
            extended = partial[:, None, :] + values[None, :, None] * normals[:, k][None, None, :]
            ok = np.all(extended + rest_min <= rhs, axis=2)
            rows, cols = np.nonzero(ok)
            prefixes = np.column_stack([prefixes[rows], values[cols]])
            partial = extended[rows, cols]
        return prefixes

def simplex(n: int) -> LatticePolytope:
    """Standard simplex Δ_n = Conv{0, e_1, …, e_n}."""
    return LatticePolytope(Support(((0,) * n,) + tuple(tuple(np.eye(n, dtype=int)[ell]) for ell in range(n)), n))


def dilate_lattice_points(P: LatticePolytope, scale: int) -> Support:
    """All lattice points of scale·P; scale 0 gives the origin."""
    return Support.from_array(P.lattice_points(scale), P.dim)


def minkowski_sum(E1: Support, E2: Support) -> Support:
    """Set of all sums α+β with α ∈ E1, β ∈ E2."""
    if E1.dim != E2.dim:
        raise ValueError(f"dimension mismatch: {E1.dim} vs {E2.dim}")
    sums = (E1.array[:, None, :] + E2.array[None, :, :]).reshape(-1, E1.dim)
    return Support.from_array(sums, E1.dim)


def minkowski_points(generator_sets: Sequence[Support]) -> np.ndarray:
    """Points whose hull is Conv(A_1) + … + Conv(A_r), pruned to vertices along the way."""
    if not generator_sets:
        raise ValueError("need at least one generator set")
    dim = generator_sets[0].dim
    acc = hull_vertices(generator_sets[0].array)
    for gens in generator_sets[1:]:
        if gens.dim != dim:
            raise ValueError(f"dimension mismatch: {dim} vs {gens.dim}")
        summed = (acc[:, None, :] + hull_vertices(gens.array)[None, :, :]).reshape(-1, dim)
        acc = hull_vertices(lex_unique(summed))
    return acc


def minkowski_polytope(generator_sets: Sequence[Support]) -> LatticePolytope:
    """Conv(A_1) + … + Conv(A_r) as a lattice polytope; must be full-dimensional."""
    points = minkowski_points(generator_sets)
    return LatticePolytope(Support.from_array(points, generator_sets[0].dim))


def _in_hull(vertices: np.ndarray, q: np.ndarray) -> bool:
    # q is a convex combination of the vertices
    k = len(vertices)
    A_eq = np.vstack([vertices.T.astype(float), np.ones((1, k))])
    b_eq = np.append(q.astype(float), 1.0)
    result = linprog(np.zeros(k), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * k, method="highs")
    return result.status == 0


def hull_lattice_points(points: np.ndarray) -> Support:
    """Lattice points of Conv(points), also when the hull is lower-dimensional."""
    points = lex_unique(np.asarray(points, dtype=np.int64))
    n = points.shape[1]
    if affine_rank(points) == n:
        return dilate_lattice_points(LatticePolytope(Support.from_array(points, n)), 1)
    lo, hi = points.min(axis=0), points.max(axis=0)
    grid = np.stack(np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(lo, hi)], indexing="ij"), axis=-1)
    grid = grid.reshape(-1, n)
    inside = [q for q in grid if _in_hull(points, q)]
    return Support.from_array(np.array(inside, dtype=np.int64).reshape(-1, n), n)


def cartesian_product(supports: Sequence[Support]) -> Support:
    """Concatenations of one exponent from each support, in block order."""
    if not supports:
        raise ValueError("cartesian product of an empty list")
    acc = supports[0].array
    for S in supports[1:]:
        left = np.repeat(acc, len(S), axis=0)
        right = np.tile(S.array, (len(acc), 1))
        acc = np.hstack([left, right])
    return Support.from_array(acc, sum(S.dim for S in supports))


def codegree(P: LatticePolytope) -> int:
    """Smallest t ≥ 1 such that t·P has a lattice point in its interior."""
    lo, hi = P.bounds
    cap = P.dim + 1 + int((hi - lo).sum())
    for t in range(1, cap + 1):
        points = P.lattice_points(t)
        if np.any(P.contains(points, scale=t, strict=True)):
            return t
    raise TupleConstructionError(f"no interior lattice point up to dilation {cap}; polytope is degenerate")


def ehrhart_coeffs(P: LatticePolytope, lambda_max: int) -> List[int]:
    """Lattice-point counts #(λ·P ∩ ℤⁿ) for λ = 0..lambda_max."""
    if lambda_max < 0:
        raise ValueError(f"lambda_max must be nonnegative, got {lambda_max}")
    return [len(P.lattice_points(lam)) for lam in range(lambda_max + 1)]


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> Tuple[List[List[int]], List[List[int]], List[List[int]]]:
    """
    Smith normal form S = U·A·V over the integers.

    Row and column reductions pivot on the entry of smallest absolute value,
    with the usual divisibility fix-up so that S[i][i] divides S[i+1][i+1].

    Args:
        matrix: Integer matrix A of shape (m, n)

    Returns:
        (S, U, V) with U (m×m) and V (n×n) unimodular
    """
    A = [[int(a) for a in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        candidates = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j] != 0]
        if not candidates:
            break
        _, i, j = min(candidates)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            for i in range(t + 1, m):
                q = A[i][t] // A[t][t]
                if q:
                    add_row(t, i, -q)
            for j in range(t + 1, n):
                q = A[t][j] // A[t][t]
                if q:
                    add_col(t, j, -q)
            leftovers = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            leftovers += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if leftovers:
                _, i, j = min(leftovers)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return A, U, V


@dataclass(frozen=True)
class ExponentRecoveryTable:
    """Integers m_{j,ℓ} with Σ_j m_{j,ℓ}·α_j = e_ℓ over the nonzero exponents α_j of A0."""

    m: np.ndarray
    exponents: Tuple[Exponent, ...]
    base_index: int

    @property
    def nonnegative(self) -> bool:
        return bool(np.all(self.m >= 0))

    @property
    def dim(self) -> int:
        return self.m.shape[1]


def lattice_condition(A0: Support) -> ExponentRecoveryTable:
    """
    Check 0 ∈ A0 and ℤA0 = ℤⁿ, returning the coordinate recovery exponents.

    Raises:
        LatticeError: "missing origin" or "lattice not full"
    """
    n = A0.dim
    origin = (0,) * n
    if origin not in A0:
        raise LatticeError("missing origin")
    base_index = A0.index[origin]
    nonzero = tuple(e for e in A0 if e != origin)
    unit_vectors = [tuple(int(i == ell) for i in range(n)) for ell in range(n)]

    if all(e in nonzero for e in unit_vectors):
        m = np.array([[int(alpha == e) for e in unit_vectors] for alpha in nonzero], dtype=np.int64)
        return ExponentRecoveryTable(m, nonzero, base_index)

    if len(nonzero) < n:
        raise LatticeError("lattice not full")
    columns = [[alpha[ell] for alpha in nonzero] for ell in range(n)]
    S, U, V = smith_normal_form(columns)
    invariants = [S[i][i] for i in range(n)]
    if any(abs(d) != 1 for d in invariants):
        logger.debug(f"Smith invariants {invariants} of A0")
        raise LatticeError("lattice not full")

    V = np.array(V, dtype=object)
    U = np.array(U, dtype=object)
    m = (V[:, :n] @ U).astype(np.int64)
    check = np.array(columns, dtype=np.int64) @ m
    if not np.array_equal(check, np.eye(n, dtype=np.int64)):
        raise LatticeError("lattice not full")
    return ExponentRecoveryTable(m, nonzero, base_index)


def recover_point(ratios: Sequence[complex], table: ExponentRecoveryTable) -> np.ndarray:
    """
    Coordinates ζ_ℓ = Π_j ratios_j^{m_{j,ℓ}}.

    Raises:
        LatticeError: a zero ratio is raised to a negative power
    """
    ratios = [complex(r) for r in ratios]
    if len(ratios) != len(table.exponents):
        raise ValueError(f"expected {len(table.exponents)} ratios, got {len(ratios)}")
    point = np.ones(table.dim, dtype=complex)
    for ell in range(table.dim):
        value = 1 + 0j
        for j, power in enumerate(table.m[:, ell]):
            power = int(power)
            if power == 0:
                continue
            if power < 0 and ratios[j] == 0:
                raise LatticeError("coordinate undefined")
            value *= ratios[j] ** power
        point[ell] = value
    return point
