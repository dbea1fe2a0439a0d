"""FastAPI application serving tuple construction and solves."""
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from ..config import get_settings
from ..utils.logger import setup_logger, get_logger
from .dependencies import get_solver_service
from .routes import health, solve

settings = get_settings()
setup_logger(settings.log_level)
logger = get_logger()


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info(f"🚀 Starting {settings.app_name} v{settings.app_version}")
    logger.info(
        f"🎚️  rank rtol {settings.rank_rtol:g}, cluster tol {settings.cluster_tol:g}, "
        f"BWE threshold {settings.bwe_threshold:g}, seed {settings.seed}"
    )
    # build the shared service before the first request
    get_solver_service()
    logger.success(f"✅ Ready, docs at http://{settings.api_host}:{settings.api_port}/docs")
    yield
    logger.warning("🛑 Solver API shutting down")


app = FastAPI(
    title=settings.app_name,
    description="Eigenvalue solver for sparse and overdetermined polynomial systems",
    version=settings.app_version,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins_list,
    allow_methods=["GET", "POST"],
    allow_headers=["*"],
)

app.include_router(health)
app.include_router(solve)
