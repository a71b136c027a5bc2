"""Process-level settings for ratsteer"""

import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from RAT_STEER_* environment variables"""

    model_config = SettingsConfigDict(
        env_prefix="RAT_STEER_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Output directory override (RAT_STEER_OUT beats --out-dir)
    out: Optional[Path] = None

    log_level: str = "INFO"

    # Worker processes for independent runs; 0 means one per core
    jobs: int = 0

    @property
    def effective_jobs(self) -> int:
        """Number of worker processes to use"""
        return self.jobs if self.jobs > 0 else (os.cpu_count() or 1)


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
