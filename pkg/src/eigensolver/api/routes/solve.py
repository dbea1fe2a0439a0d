"""Tuple construction and solve endpoints."""
from fastapi import APIRouter, Depends, HTTPException

from ...core.errors import RankConditionError
from ...core.poly import PolySystem
from ...schemas import ReportModel, TupleModel
from ...services.solver_service import SolverService, parse_family
from ...utils.logger import get_logger
from ..dependencies import get_solver_service
from ..models import SolveRequest, SolveResponse, TupleRequest, TupleResponse

logger = get_logger()
router = APIRouter(tags=["solver"])


def _system(polynomials) -> PolySystem:
    try:
        return PolySystem(tuple(p.to_polynomial() for p in polynomials))
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))


@router.post("/tuples", response_model=TupleResponse)
def build_tuple(
    request: TupleRequest,
    solver_service: SolverService = Depends(get_solver_service),
):
    """
    Build an admissible tuple for a system and family.

    The tuple can be sent back to /solve to skip the construction.
    """
    F = _system(request.polynomials)
    logger.info(f"🧩 Tuple request: family={request.family}, n={F.dim}, s={len(F)}")
    try:
        family = parse_family(request.family)
        build = solver_service.build_tuple(F, family, request.params)
    except RankConditionError as e:
        logger.error(f"❌ Tuple construction failed: {e}")
        raise HTTPException(status_code=409, detail=str(e))
    except ValueError as e:
        logger.error(f"❌ Invalid tuple request: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    return TupleResponse(tuple=TupleModel.from_tuple(build.tuple), summary=build.tuple.summary())


@router.post("/solve", response_model=SolveResponse)
def solve_system(
    request: SolveRequest,
    solver_service: SolverService = Depends(get_solver_service),
):
    """
    Solve a polynomial system.

    Either ``family`` or ``tuple`` must be given. Rank-condition failures
    return 409, invalid input 422.
    """
    F = _system(request.polynomials)
    logger.info(f"💬 Solve request: n={F.dim}, s={len(F)}, family={request.family}")
    try:
        tup = request.tuple.to_tuple() if request.tuple is not None else None
        family = parse_family(request.family) if request.family is not None else None
        report, tup = solver_service.solve(
            F, family=family, tup=tup, params=request.params, **request.options.model_dump()
        )
    except RankConditionError as e:
        logger.error(f"❌ Rank condition failed: {e}")
        raise HTTPException(status_code=409, detail=str(e))
    except ValueError as e:
        logger.error(f"❌ Invalid solve request: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"❌ Error in solve endpoint: {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))

    logger.success(f"✅ Returning {len(report.solutions)} solutions")
    return SolveResponse(report=ReportModel.from_report(report), tuple=TupleModel.from_tuple(tup))
