"""Exponents, supports, sparse complex polynomials and polynomial systems."""
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, Literal, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

Exponent = Tuple[int, ...]
Coefficient = Union[complex, float, int]
Distribution = Literal["real", "complex"]


def lex_unique(points: np.ndarray) -> np.ndarray:
    """Deduplicate the rows of an integer array and sort them lexicographically."""
    points = np.asarray(points, dtype=np.int64)
    if points.ndim != 2:
        raise ValueError(f"expected a 2-D array of exponents, got shape {points.shape}")
    if len(points) == 0:
        return points
    order = np.lexsort(points.T[::-1])
    points = points[order]
    keep = np.ones(len(points), dtype=bool)
    keep[1:] = np.any(points[1:] != points[:-1], axis=1)
    return points[keep]


@dataclass(frozen=True)
class Support:
    """
    Ordered finite set of exponents in ℕⁿ.

    The order is lexicographic on the exponent tuples and is the order used for
    every row and column index derived from the support.
    """

    exponents: Tuple[Exponent, ...]
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        normalized = sorted({tuple(int(a) for a in e) for e in self.exponents})
        for e in normalized:
            if len(e) != self.dim:
                raise ValueError(f"exponent {e} does not have length {self.dim}")
            if any(a < 0 for a in e):
                raise ValueError(f"exponent {e} has a negative entry")
        object.__setattr__(self, "exponents", tuple(normalized))

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], dim: Optional[int] = None) -> "Support":
        """Build a support from any iterable of integer sequences."""
        points = [tuple(int(a) for a in p) for p in points]
        if dim is None:
            if not points:
                raise ValueError("dimension required for an empty support")
            dim = len(points[0])
        return cls(tuple(points), dim)

    @classmethod
    def from_array(cls, points: np.ndarray, dim: Optional[int] = None) -> "Support":
        """Build a support from the rows of an integer array."""
        points = np.asarray(points, dtype=np.int64)
        if dim is None:
            dim = points.shape[1]
        points = points.reshape(-1, dim)
        return cls(tuple(map(tuple, lex_unique(points).tolist())), dim)

    @classmethod
    def origin(cls, dim: int) -> "Support":
        return cls(((0,) * dim,), dim)

    @cached_property
    def array(self) -> np.ndarray:
        """Exponents as a ``(len, dim)`` int64 array in support order."""
        return np.array(self.exponents, dtype=np.int64).reshape(len(self.exponents), self.dim)

    @cached_property
    def index(self) -> Dict[Exponent, int]:
        return {e: k for k, e in enumerate(self.exponents)}

    @cached_property
    def _radix(self) -> Optional[np.ndarray]:
        if not self.exponents:
            return None
        radix = self.array.max(axis=0) + 1
        if float(np.prod(radix.astype(float))) > 2.0**62:
            return None
        return radix

    def _keys(self, points: np.ndarray) -> np.ndarray:
        weights = np.ones(self.dim, dtype=np.int64)
        for ell in range(self.dim - 2, -1, -1):
            weights[ell] = weights[ell + 1] * self._radix[ell + 1]
        return points @ weights

    @cached_property
    def _sorted_keys(self) -> np.ndarray:
        return self._keys(self.array)

    def locate(self, points: np.ndarray) -> np.ndarray:
        """
        Positions of the rows of ``points`` in this support.

        Args:
            points: Integer array of shape ``(m, dim)``

        Returns:
            int64 array of length m, with -1 where a point is not in the support
        """
        points = np.asarray(points, dtype=np.int64).reshape(-1, self.dim)
        result = np.full(len(points), -1, dtype=np.int64)
        if not self.exponents or len(points) == 0:
            return result
        if self._radix is None:
            for k, p in enumerate(map(tuple, points.tolist())):
                result[k] = self.index.get(p, -1)
            return result
        inside = np.all((points >= 0) & (points < self._radix), axis=1)
        keys = self._keys(points[inside])
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, len(self.exponents) - 1)
        found = self._sorted_keys[pos] == keys
        result[np.flatnonzero(inside)[found]] = pos[found]
        return result

    def __len__(self) -> int:
        return len(self.exponents)

    def __iter__(self) -> Iterator[Exponent]:
        return iter(self.exponents)

    def __getitem__(self, k: int) -> Exponent:
        return self.exponents[k]

    def __contains__(self, e: object) -> bool:
        return tuple(e) in self.index

    def _check_dim(self, other: "Support") -> None:
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def union(self, other: "Support") -> "Support":
        self._check_dim(other)
        return Support(self.exponents + other.exponents, self.dim)

    def difference(self, other: "Support") -> "Support":
        self._check_dim(other)
        return Support(tuple(e for e in self.exponents if e not in other.index), self.dim)

    def issubset(self, other: "Support") -> bool:
        self._check_dim(other)
        return bool(np.all(other.locate(self.array) >= 0)) if self.exponents else True

    def shifted(self, beta: Sequence[int]) -> "Support":
        return Support.from_array(self.array + np.asarray(beta, dtype=np.int64), self.dim)

    @property
    def max_degree(self) -> int:
        return int(self.array.sum(axis=1).max()) if self.exponents else 0

    def __repr__(self) -> str:
        return f"Support(dim={self.dim}, size={len(self)})"


def _power_table(z: np.ndarray, max_exp: np.ndarray) -> np.ndarray:
    # table[ell, k] = z_ell ** k by repeated multiplication, 0**0 == 1
    width = int(max_exp.max()) + 1 if len(max_exp) else 1
    table = np.ones((len(z), width), dtype=complex)
    for k in range(1, width):
        table[:, k] = table[:, k - 1] * z
    return table


def _as_point(z: Sequence[complex], dim: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    if len(z) != dim:
        raise ValueError(f"point has length {len(z)}, expected {dim}")
    return z


def monomial_vector(z: Sequence[complex], E: Support) -> np.ndarray:
    """Row vector (z^α : α ∈ E) in the support order of E."""
    z = _as_point(z, E.dim)
    if len(E) == 0:
        return np.zeros(0, dtype=complex)
    exps = E.array
    table = _power_table(z, exps.max(axis=0))
    values = np.ones(len(E), dtype=complex)
    for ell in range(E.dim):
        values *= table[ell, exps[:, ell]]
    return values


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial with complex coefficients; exact zeros are never stored."""

    terms: Mapping[Exponent, complex]
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        terms: Dict[Exponent, complex] = {}
        for e, c in self.terms.items():
            e = tuple(int(a) for a in e)
            if len(e) != self.dim or any(a < 0 for a in e):
                raise ValueError(f"invalid exponent {e} for dimension {self.dim}")
            c = complex(c)
            if c != 0:
                terms[e] = terms.get(e, 0j) + c
        object.__setattr__(self, "terms", {e: c for e, c in terms.items() if c != 0})

    @classmethod
    def from_arrays(cls, exponents: np.ndarray, coefficients: Sequence[Coefficient], dim: Optional[int] = None) -> "Polynomial":
        exponents = np.asarray(exponents, dtype=np.int64)
        if dim is None:
            dim = exponents.shape[1]
        exponents = exponents.reshape(-1, dim)
        terms: Dict[Exponent, complex] = {}
        for e, c in zip(map(tuple, exponents.tolist()), coefficients):
            terms[e] = terms.get(e, 0j) + complex(c)
        return cls(terms, dim)

    @classmethod
    def monomial(cls, alpha: Sequence[int], coefficient: Coefficient = 1.0) -> "Polynomial":
        alpha = tuple(int(a) for a in alpha)
        return cls({alpha: coefficient}, len(alpha))

    @classmethod
    def constant(cls, value: Coefficient, dim: int) -> "Polynomial":
        return cls({(0,) * dim: value}, dim)

    @cached_property
    def support(self) -> Support:
        return Support(tuple(self.terms), self.dim)

    @cached_property
    def coefficients(self) -> np.ndarray:
        """Coefficients aligned with ``support`` order."""
        return np.array([self.terms[e] for e in self.support], dtype=complex)

    def coefficient(self, alpha: Sequence[int]) -> complex:
        return self.terms.get(tuple(alpha), 0j)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return self.support.max_degree

    def _check_dim(self, other: "Polynomial") -> None:
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_dim(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0j) + c
        return Polynomial(terms, self.dim)

    def __neg__(self) -> "Polynomial":
        return self.scale(-1)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, factor: Coefficient) -> "Polynomial":
        return Polynomial({e: c * factor for e, c in self.terms.items()}, self.dim)

    def shift(self, beta: Sequence[int]) -> "Polynomial":
        """Product with the monomial x^beta."""
        beta = tuple(int(b) for b in beta)
        if len(beta) != self.dim:
            raise ValueError(f"shift {beta} does not have length {self.dim}")
        return Polynomial({tuple(a + b for a, b in zip(e, beta)): c for e, c in self.terms.items()}, self.dim)

    def __mul__(self, other: Union["Polynomial", Coefficient]) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check_dim(other)
        terms: Dict[Exponent, complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0j) + c1 * c2
        return Polynomial(terms, self.dim)

    __rmul__ = __mul__

    def __call__(self, z: Sequence[complex]) -> complex:
        return evaluate(self, z)

    def __repr__(self) -> str:
        return f"Polynomial(dim={self.dim}, terms={len(self.terms)})"


@dataclass(frozen=True)
class PolySystem:
    """Tuple of polynomials in the same n variables."""

    polys: Tuple[Polynomial, ...]

    def __post_init__(self):
        polys = tuple(self.polys)
        if not polys:
            raise ValueError("a polynomial system needs at least one polynomial")
        dims = {p.dim for p in polys}
        if len(dims) != 1:
            raise ValueError(f"polynomials have different dimensions {sorted(dims)}")
        object.__setattr__(self, "polys", polys)

    @property
    def dim(self) -> int:
        return self.polys[0].dim

    @property
    def supports(self) -> Tuple[Support, ...]:
        return tuple(p.support for p in self.polys)

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.polys)

    def __getitem__(self, i: int) -> Polynomial:
        return self.polys[i]

    def __repr__(self) -> str:
        return f"PolySystem(n={self.dim}, s={len(self)})"


def evaluate(p: Polynomial, z: Sequence[complex]) -> complex:
    """Value Σ c_α z^α of ``p`` at ``z``."""
    z = _as_point(z, p.dim)
    if p.is_zero:
        return 0j
    return complex(np.dot(p.coefficients, monomial_vector(z, p.support)))


def backward_error(F: Union[PolySystem, Sequence[Polynomial]], z: Sequence[complex]) -> float:
    """
    Averaged relative residual of a candidate root.

    (1/s) Σ_i |f_i(z)| / (Σ_α |c_{i,α} z^α| + 1)
    """
    polys = list(F)
    total = 0.0
    for f in polys:
        terms = f.coefficients * monomial_vector(z, f.support)
        total += abs(terms.sum()) / (np.abs(terms).sum() + 1.0)
    return total / len(polys)


def random_coefficients(size: int, rng: np.random.Generator, dist: Distribution = "real") -> np.ndarray:
    """I.i.d. standard (real or circular complex) normal draws with exact zeros resampled."""
    if dist == "real":
        draw = lambda k: rng.standard_normal(k).astype(complex)  # noqa: E731
    elif dist == "complex":
        draw = lambda k: (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / np.sqrt(2)  # noqa: E731
    else:
        raise ValueError(f"unknown distribution {dist!r}")
    values = draw(size)
    zeros = values == 0
    while np.any(zeros):
        values[zeros] = draw(int(zeros.sum()))
        zeros = values == 0
    return values


def random_polynomial(A: Support, rng: np.random.Generator, dist: Distribution = "real") -> Polynomial:
    """Polynomial with support exactly ``A`` and i.i.d. normal coefficients."""
    if len(A) == 0:
        raise ValueError("cannot draw a polynomial on an empty support")
    return Polynomial.from_arrays(A.array, random_coefficients(len(A), rng, dist), A.dim)
