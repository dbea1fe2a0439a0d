"""API request models."""
from typing import List, Optional

from pydantic import BaseModel, Field

from ...schemas import FamilyParams, PolynomialModel, TupleModel


class SolveOverrides(BaseModel):
    """Per-request replacements of the configured tolerances."""

    rtol: Optional[float] = Field(default=None, gt=0, description="Rank tolerance")
    cluster_tol: Optional[float] = Field(default=None, gt=0, description="Eigenvalue clustering tolerance")
    bwe_threshold: Optional[float] = Field(default=None, gt=0, description="Backward-error filter")
    seed: Optional[int] = Field(default=None, description="Random seed")
    check_eigenvector: Optional[bool] = Field(default=None, description="Run the eigenvector cross-check")


class TupleRequest(BaseModel):
    """Build an admissible tuple for a system."""

    polynomials: List[PolynomialModel] = Field(..., min_length=1, description="Polynomials f_1..f_s")
    family: str = Field(..., description="Tuple family, e.g. dense or multi-dense")
    params: FamilyParams = Field(default_factory=FamilyParams, description="Family parameters")


class SolveRequest(BaseModel):
    """Solve a system from a family or a previously built tuple."""

    polynomials: List[PolynomialModel] = Field(..., min_length=1, description="Polynomials f_1..f_s")
    family: Optional[str] = Field(default=None, description="Tuple family when no tuple is given")
    tuple: Optional[TupleModel] = Field(default=None, description="Precomputed admissible tuple")
    params: FamilyParams = Field(default_factory=FamilyParams, description="Family parameters")
    options: SolveOverrides = Field(default_factory=SolveOverrides, description="Tolerance overrides")
