"""Exceptions raised by the solver pipeline."""


class EigensolverError(Exception):
    """Base class for all solver errors."""


class CompatibilityError(EigensolverError, ValueError):
    """A shifted support falls outside the row index set."""

    def __init__(self, i: int, beta: tuple, alpha: tuple):
        self.i = i
        self.beta = beta
        self.alpha = alpha
        super().__init__(
            f"compatibility violated: polynomial {i}, shift {beta}, exponent {alpha} "
            f"gives {tuple(a + b for a, b in zip(alpha, beta))} outside D"
        )


class LatticeError(EigensolverError, ValueError):
    """Lattice condition failure or undefined coordinate recovery."""


class TupleConstructionError(EigensolverError, ValueError):
    """An admissible tuple cannot be built from the given parameters."""


class RankConditionError(EigensolverError):
    """No f0 satisfying the rank condition was found."""


class IllConditionedBasisError(EigensolverError):
    """The triangular factor of N_f0 restricted to B is numerically singular."""


class RootExtractionError(EigensolverError):
    """An eigenspace does not correspond to a root in the torus."""


class DegeneratePencilError(EigensolverError):
    """Both matrices of a generalized eigenproblem vanish numerically."""
