"""Runtime settings loaded from the environment.

These knobs never change the numbers a run produces; experiment semantics
live in ``poolal.core.models.RunConfig``.
"""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment."""

    model_config = SettingsConfigDict(
        env_prefix="POOLAL_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    log_level: str = Field(default="INFO")
    out_dir: str = Field(default="runs", description="Default output directory for run artifacts")
    score_workers: int = Field(
        default=1,
        ge=1,
        description="Threads used to score the unlabeled pool; results do not depend on it",
    )
    compare_workers: int = Field(
        default=1,
        ge=1,
        description="Processes used by compare when --parallel is not given",
    )


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
