"""Service status and numeric backend."""
import numpy as np
import scipy
from fastapi import APIRouter, Depends

from ..dependencies import get_solver_service
from ..models import HealthResponse
from ...services.admissible import TupleFamily
from ...services.solver_service import SolverService

router = APIRouter(tags=["health"])


@router.get("/", response_model=HealthResponse)
@router.get("/health", response_model=HealthResponse)
async def health_check(solver_service: SolverService = Depends(get_solver_service)):
    """Report the version, the tuple families on offer and the default tolerances."""
    settings = solver_service.settings
    return HealthResponse(
        status="healthy",
        version=settings.app_version,
        backend={"numpy": np.__version__, "scipy": scipy.__version__},
        families=[f.value.replace("_", "-") for f in TupleFamily if f != TupleFamily.CUSTOM],
        tolerances={
            "rank_rtol": settings.rank_rtol,
            "cluster_tol": settings.cluster_tol,
            "eigvec_tol": settings.eigvec_tol,
            "bwe_threshold": settings.bwe_threshold,
            "dedup_tol": settings.dedup_tol,
        },
    )
