"""API request and response models."""
from .requests import SolveOverrides, SolveRequest, TupleRequest
from .responses import HealthResponse, SolveResponse, TupleResponse

__all__ = [
    "SolveOverrides",
    "SolveRequest",
    "TupleRequest",
    "HealthResponse",
    "SolveResponse",
    "TupleResponse",
]
