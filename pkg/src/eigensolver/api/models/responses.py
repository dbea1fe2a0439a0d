"""API response models."""
from typing import Dict, List

from pydantic import BaseModel, Field

from ...schemas import ReportModel, TupleModel


class HealthResponse(BaseModel):
    """Health check response."""

    status: str = Field(..., description="Service status")
    version: str = Field(..., description="Package version")
    backend: Dict[str, str] = Field(..., description="numpy and scipy versions")
    families: List[str] = Field(..., description="Tuple families accepted by /tuples and /solve")
    tolerances: Dict[str, float] = Field(..., description="Default solver tolerances")


class TupleResponse(BaseModel):
    """Admissible tuple with its sizes."""

    tuple: TupleModel = Field(..., description="The admissible tuple")
    summary: Dict[str, object] = Field(..., description="Family, n, s and set sizes")


class SolveResponse(BaseModel):
    """Solve report plus the tuple it was computed on."""

    report: ReportModel = Field(..., description="Solutions and run metadata")
    tuple: TupleModel = Field(..., description="The admissible tuple used")
