"""Solver service shared by the CLI and the HTTP API."""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import Settings
from ..core.lattice import LatticePolytope, simplex
from ..core.poly import PolySystem, Support
from ..schemas import FamilyParams
from ..utils.logger import get_logger, timed
from .admissible import (
    AdmissibleTuple,
    TupleFamily,
    incremental_unmixed,
    tuple_dense,
    tuple_mixed,
    tuple_multi_dense,
    tuple_multi_unmixed,
    tuple_unmixed,
)
from .solver import Precomputed, SolveOptions, SolveReport, solve

logger = get_logger()

MAX_INFERRED_DILATION = 10_000


def parse_family(name: str) -> TupleFamily:
    """Family from a CLI/API name; accepts ``multi-dense`` as well as ``multi_dense``."""
    try:
        return TupleFamily(name.strip().lower().replace("-", "_"))
    except ValueError:
        choices = ", ".join(f.value for f in TupleFamily)
        raise ValueError(f"unknown family {name!r}; expected one of {choices}") from None


def smallest_dilation(points: np.ndarray, P: LatticePolytope) -> int:
    """Smallest t ≥ 1 with every point in t·P."""
    for t in range(1, MAX_INFERRED_DILATION + 1):
        if np.all(P.contains(points, scale=t)):
            return t
    raise ValueError("support is not contained in any dilation of the polytope")


def _block_slices(block_sizes: Sequence[int], n: int) -> List[slice]:
    if sum(block_sizes) != n or any(nk < 1 for nk in block_sizes):
        raise ValueError(f"block sizes {list(block_sizes)} do not partition {n} variables")
    offsets = np.concatenate([[0], np.cumsum(block_sizes)])
    return [slice(int(a), int(b)) for a, b in zip(offsets[:-1], offsets[1:])]


@dataclass
class TupleBuild:
    tuple: AdmissibleTuple
    precomputed: Optional[Precomputed] = None
    lam: Optional[int] = None


class SolverService:
    """Builds admissible tuples for a system and runs the eigenvalue solver."""

    def __init__(self, settings: Settings):
        """
        Initialize solver service.

        Args:
            settings: Application settings with tolerance and seed defaults
        """
        self.settings = settings
        logger.info("🧮 Solver service initialized")

    def options(self, **overrides) -> SolveOptions:
        options = SolveOptions.from_settings(self.settings, **overrides)
        if options.seed is None:
            options = options.model_copy(update={"seed": int(np.random.SeedSequence().entropy % (2**63))})
        return options

    def infer_params(self, F: PolySystem, family: TupleFamily, params: FamilyParams) -> FamilyParams:
        """Fill in the degrees a family needs from the supports of F."""
        values = params.model_dump()
        if family == TupleFamily.DENSE and params.degrees is None:
            values["degrees"] = [f.degree for f in F]
        elif family in (TupleFamily.UNMIXED, TupleFamily.INCREMENTAL) and params.degrees is None:
            P = params.polytope_obj() or simplex(F.dim)
            values["degrees"] = [smallest_dilation(A.array, P) for A in F.supports]
        elif family == TupleFamily.MULTI_DENSE and params.degree_matrix is None:
            if params.block_sizes is None:
                raise ValueError("multi_dense needs block_sizes")
            slices = _block_slices(params.block_sizes, F.dim)
            values["degree_matrix"] = [[int(A.array[:, sl].sum(axis=1).max()) for sl in slices] for A in F.supports]
        elif family == TupleFamily.MULTI_UNMIXED and params.degree_matrix is None:
            polytopes = params.polytope_objs()
            if polytopes is None:
                raise ValueError("multi_unmixed needs polytopes")
            slices = _block_slices([P.dim for P in polytopes], F.dim)
            values["degree_matrix"] = [
                [smallest_dilation(A.array[:, sl], P) for sl, P in zip(slices, polytopes)] for A in F.supports
            ]
        return FamilyParams(**values)

    def build_tuple(
        self,
        F: PolySystem,
        family: TupleFamily,
        params: Optional[FamilyParams] = None,
        seed: Optional[int] = None,
    ) -> TupleBuild:
        """
        Construct the admissible tuple of the requested family.

        The incremental family also returns its cokernel and f0 so that the
        solve can skip the Macaulay factorization.
        """
        params = self.infer_params(F, family, params or FamilyParams())
        logger.info(f"🧩 Building {family.value} tuple for n={F.dim}, s={len(F)}")

        if family == TupleFamily.DENSE:
            return TupleBuild(tuple_dense(F.dim, params.degrees))
        if family == TupleFamily.UNMIXED:
            if params.polytope is None:
                raise ValueError("unmixed needs the polytope generators")
            return TupleBuild(tuple_unmixed(Support.of(params.polytope), params.degrees))
        if family == TupleFamily.MULTI_DENSE:
            return TupleBuild(tuple_multi_dense(params.block_sizes, params.degree_matrix))
        if family == TupleFamily.MULTI_UNMIXED:
            return TupleBuild(tuple_multi_unmixed(params.polytope_objs(), params.degree_matrix))
        if family == TupleFamily.MIXED:
            return TupleBuild(tuple_mixed(F.supports))
        if family == TupleFamily.INCREMENTAL:
            A = Support.of(params.polytope) if params.polytope else simplex(F.dim).generators
            rng = np.random.default_rng(seed)
            result = incremental_unmixed(
                F, A, params.degrees, rng,
                rtol=self.settings.rank_rtol,
                compression_factor=self.settings.compression_factor,
            )
            return TupleBuild(result.tuple, Precomputed(result.cokernel, result.f0), result.lam)
        raise ValueError("a custom family needs an explicit tuple")

    def solve(
        self,
        F: PolySystem,
        family: Optional[TupleFamily] = None,
        tup: Optional[AdmissibleTuple] = None,
        params: Optional[FamilyParams] = None,
        **overrides,
    ) -> Tuple[SolveReport, AdmissibleTuple]:
        """
        Solve F, building the tuple for ``family`` unless one is given.

        Args:
            F: Polynomial system
            family: Tuple family to construct (ignored when ``tup`` is given)
            tup: Previously computed admissible tuple (online path)
            params: Family parameters
            **overrides: SolveOptions fields replacing the settings defaults

        Returns:
            The report and the tuple it was computed on
        """
        options = self.options(**overrides)
        timings = {}
        precomputed = None
        if tup is None:
            if family is None:
                raise ValueError("either a family or a tuple is required")
            with timed(timings, "tuple"):
                build = self.build_tuple(F, family, params, options.seed)
            tup, precomputed = build.tuple, build.precomputed
        else:
            logger.info(f"♻️  Reusing {tup.family.value} tuple with #D={len(tup.D)}")

        try:
            report = solve(F, tup, options, precomputed)
        except Exception as e:
            logger.error(f"❌ Solve failed: {e}")
            raise
        report.timings = {**timings, **report.timings}
        return report, tup
