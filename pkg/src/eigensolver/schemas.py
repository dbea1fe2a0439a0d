"""JSON models for systems, admissible tuples and solve reports."""
from pathlib import Path
from typing import Dict, List, Optional, Type, TypeVar, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from .core.lattice import LatticePolytope
from .core.poly import Polynomial, PolySystem, Support
from .services.admissible import AdmissibleTuple, TupleFamily
from .services.solver import SolveReport

ModelT = TypeVar("ModelT", bound=BaseModel)

Point = List[int]


class TermModel(BaseModel):
    exp: Point
    re: float
    im: float = 0.0

    @field_validator("exp")
    @classmethod
    def nonnegative(cls, v: Point) -> Point:
        if any(a < 0 for a in v):
            raise ValueError("exponents must be nonnegative")
        return v


class PolynomialModel(BaseModel):
    """``{"dim": n, "terms": [{"exp": [...], "re": r, "im": i}, ...]}``"""

    dim: int = Field(..., ge=1)
    terms: List[TermModel]

    @model_validator(mode="after")
    def check_lengths(self) -> "PolynomialModel":
        for term in self.terms:
            if len(term.exp) != self.dim:
                raise ValueError(f"exponent {term.exp} does not have length {self.dim}")
        return self

    def to_polynomial(self) -> Polynomial:
        terms: Dict[tuple, complex] = {}
        for t in self.terms:
            key = tuple(t.exp)
            terms[key] = terms.get(key, 0j) + complex(t.re, t.im)
        return Polynomial(terms, self.dim)

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "PolynomialModel":
        return cls(
            dim=p.dim,
            terms=[TermModel(exp=list(e), re=c.real, im=c.imag) for e, c in zip(p.support, p.coefficients)],
        )


class FamilyParams(BaseModel):
    """Family parameters; anything omitted is inferred from the system where possible."""

    degrees: Optional[List[int]] = Field(default=None, description="d_1..d_s (dense, unmixed, incremental)")
    polytope: Optional[List[Point]] = Field(default=None, description="Generators of P (unmixed, incremental)")
    block_sizes: Optional[List[int]] = Field(default=None, description="n_1..n_r (multi-graded families)")
    polytopes: Optional[List[List[Point]]] = Field(default=None, description="Generators of P_1..P_r (multi-unmixed)")
    degree_matrix: Optional[List[List[int]]] = Field(default=None, description="d_{i,k} (multi-graded families)")

    def polytope_obj(self) -> Optional[LatticePolytope]:
        return LatticePolytope.of(self.polytope) if self.polytope else None

    def polytope_objs(self) -> Optional[List[LatticePolytope]]:
        return [LatticePolytope.of(g) for g in self.polytopes] if self.polytopes else None


class SystemModel(BaseModel):
    """System file: the polynomials plus optional family and parameters."""

    polynomials: List[PolynomialModel] = Field(..., min_length=1)
    family: Optional[str] = None
    params: FamilyParams = Field(default_factory=FamilyParams)

    def to_system(self) -> PolySystem:
        return PolySystem(tuple(p.to_polynomial() for p in self.polynomials))

    @classmethod
    def from_system(cls, F: PolySystem, family: Optional[str] = None, params: Optional[FamilyParams] = None) -> "SystemModel":
        return cls(
            polynomials=[PolynomialModel.from_polynomial(p) for p in F],
            family=family,
            params=params or FamilyParams(),
        )


class TupleModel(BaseModel):
    """``{"A0": [...], "E": [[...], ...], "D": [...], "family": "..."}``"""

    A0: List[Point]
    E: List[List[Point]] = Field(..., min_length=1)
    D: List[Point] = Field(..., min_length=1)
    family: str = TupleFamily.CUSTOM.value

    def to_tuple(self) -> AdmissibleTuple:
        dim = len(self.D[0])
        return AdmissibleTuple(
            A0=Support.of(self.A0, dim),
            E=tuple(Support.of(Ei, dim) for Ei in self.E),
            D=Support.of(self.D, dim),
            family=TupleFamily(self.family),
        )

    @classmethod
    def from_tuple(cls, tup: AdmissibleTuple) -> "TupleModel":
        def points(S: Support) -> List[Point]:
            return [list(e) for e in S]

        return cls(
            A0=points(tup.A0),
            E=[points(Ei) for Ei in tup.E],
            D=points(tup.D),
            family=tup.family.value,
        )


class SolutionModel(BaseModel):
    re: List[float]
    im: List[float]
    bwe: float


class ReportModel(BaseModel):
    solutions: List[SolutionModel]
    gamma: int
    d_size: int
    candidates_total: int
    timings: Dict[str, float]
    seed: int
    tolerances: Dict[str, float]
    f0_redraws: int = 0
    eigenvector_deviation: Optional[List[Optional[float]]] = None

    @classmethod
    def from_report(cls, report: SolveReport) -> "ReportModel":
        return cls(**report.to_json_dict())


def read_model(path: Union[str, Path], model: Type[ModelT]) -> ModelT:
    """Parse a JSON file into a model; raises pydantic ``ValidationError`` on bad content."""
    return model.model_validate_json(Path(path).read_text())


def write_model(path: Union[str, Path], instance: BaseModel) -> Path:
    path = Path(path)
    path.write_text(instance.model_dump_json(indent=2))
    return path
