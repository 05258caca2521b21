from __future__ import annotations

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Hard ceiling on blow-ups for subset enumeration, independent of max_subsets
MAX_ENUMERATION_N = 16


class Settings(BaseSettings):
    """Runtime knobs, read from CONECALC_* environment variables or a .env file."""

    model_config = SettingsConfigDict(env_prefix="CONECALC_", env_file=".env", extra="ignore")

    # Guard for 2^n subset enumeration (CONECALC_MAX_SUBSETS)
    max_subsets: int = Field(default=1 << 16, ge=1)
    # Default decomposition search window
    coeff_bound: int = Field(default=5, ge=1)
    max_parts: int = Field(default=6, ge=1)
    # SVG rendering
    svg_scale: int = Field(default=120, ge=1)
    svg_margin: int = Field(default=20, ge=0)
    log_level: str = "WARNING"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()
