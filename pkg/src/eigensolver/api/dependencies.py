"""Dependency injection for FastAPI."""
from ..config import Settings, get_settings
from ..services.solver_service import SolverService

# Singleton instances
_solver_service = None


def get_solver_service() -> SolverService:
    """Get solver service singleton."""
    global _solver_service
    if _solver_service is None:
        settings = get_settings()
        _solver_service = SolverService(settings)
    return _solver_service


__all__ = ["Settings", "get_settings", "get_solver_service"]
