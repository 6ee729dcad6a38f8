from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit configuration."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        protected_namespaces=("settings_",),
    )

    out_dir: str = Field(default="./runs", alias="YOKED_OUT_DIR")
    workers: int = Field(default=1, ge=1, alias="YOKED_WORKERS")
    seed: int = Field(default=0, ge=0, alias="YOKED_SEED")
    log_level: str = Field(default="INFO", alias="YOKED_LOG_LEVEL")
    log_format: str = Field(default="pretty", alias="YOKED_LOG_FORMAT")
    enumeration_budget: int = Field(default=5_000_000, ge=1, alias="YOKED_ENUMERATION_BUDGET")
    schedule: str = Field(default="hook_safe", alias="YOKED_SCHEDULE")
    empirical_min_samples: int = Field(default=100, ge=1, alias="YOKED_EMPIRICAL_MIN_SAMPLES")
    shot_block: int = Field(default=1024, ge=1, alias="YOKED_SHOT_BLOCK")
    calibration_rescale: float = Field(
        default=0.9, gt=0.0, le=1.0, alias="YOKED_CALIBRATION_RESCALE"
    )
    database_url: str | None = Field(default=None, alias="YOKED_DATABASE_URL")


@lru_cache
def get_settings() -> Settings:
    """Return cached settings instance."""

    return Settings()
