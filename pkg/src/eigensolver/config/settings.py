"""Application configuration and settings."""
import os
from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

from .. import __version__


class Settings(BaseSettings):
    """Application settings loaded from environment variables (prefix ``EIGENSOLVER_``)."""

    model_config = SettingsConfigDict(
        env_prefix="EIGENSOLVER_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = "Eigensolver"
    app_version: str = __version__
    log_level: str = "INFO"

    # Randomness
    seed: Optional[int] = None  # global default, --seed overrides

    # Numerical rank
    rank_rtol: float = 1e-8  # relative to sigma_max
    compression_factor: float = 1.5  # compress when sum #E_i > factor * #D

    # Eigenvalue stage
    cluster_tol: float = 1e-6  # relative to ||M_g||
    eigvec_tol: float = 1e-6
    max_f0_redraws: int = 3
    check_eigenvector: bool = False

    # Filtering
    bwe_threshold: float = 1e-6
    dedup_tol: float = 1e-6

    # Benchmarks
    bench_full: bool = False

    # API Configuration
    api_host: str = "0.0.0.0"
    api_port: int = int(os.getenv("PORT", "8000"))
    cors_origins: str = "*"

    @property
    def cors_origins_list(self) -> list[str]:
        """Parse CORS origins from comma-separated string."""
        return [origin.strip() for origin in self.cors_origins.split(",") if origin.strip()]


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
