"""
Configuration management using Pydantic Settings.
Handles environment variables and the YAML corpus configuration.
"""

from functools import lru_cache
from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_PROJECT_ROOT = Path(__file__).parent.parent


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application Settings
    debug: bool = Field(default=False, alias="DEBUG")
    log_level: str = Field(default="WARNING", alias="LOG_LEVEL")

    # Computation limits
    threads: int = Field(
        default=1,
        alias="KH_THREADS",
        description="Worker processes for corpus runs; 1 runs sequentially",
    )
    crossing_limit: int = Field(
        default=12,
        alias="KH_CROSSING_LIMIT",
        description="Largest diagram accepted without --allow-large",
    )
    seed: int = Field(default=0, alias="KH_SEED")

    # Logfire Configuration
    logfire_token: Optional[str] = Field(default=None, alias="LOGFIRE_TOKEN")

    # Corpus locations
    corpus_dir: str = Field(default=str(_PROJECT_ROOT / "corpus"), alias="KH_CORPUS_DIR")
    corpus_config_path: str = Field(
        default=str(_PROJECT_ROOT / "config" / "corpus.yaml"), alias="KH_CORPUS_CONFIG"
    )

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level is one of the standard levels."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v = v.upper()
        if v not in valid_levels:
            raise ValueError(f"Log level must be one of {valid_levels}")
        return v

    @field_validator("threads", "crossing_limit")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    def _resolve(self, raw: str) -> Path:
        path = Path(raw)
        return path if path.is_absolute() else _PROJECT_ROOT / path

    @property
    def corpus_path(self) -> Path:
        return self._resolve(self.corpus_dir)

    def load_corpus_config(self) -> dict[str, Any]:
        """Load corpus groups (mirror pairs, Reidemeister classes) from YAML."""
        path = self._resolve(self.corpus_config_path)
        if not path.exists():
            raise FileNotFoundError(
                f"Corpus configuration file not found: {path.absolute()}"
            )

        with open(path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)

        if not config or "groups" not in config:
            raise ValueError(
                f"Invalid corpus configuration: missing 'groups' key in {path}"
            )

        return config


@lru_cache()
def get_settings() -> Settings:
    """
    Get application settings singleton.
    Uses lru_cache to ensure single instance across application.
    """
    return Settings()
