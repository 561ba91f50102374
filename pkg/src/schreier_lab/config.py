"""Configuration management using Pydantic Settings."""

from fractions import Fraction
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Library and CLI settings with environment variable support.

    Every field can be overridden with a ``SCHREIER_`` prefixed variable,
    e.g. ``SCHREIER_ENCLOSURE_WIDTH=1e-12``.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        env_prefix="SCHREIER_",
    )

    # Certified arithmetic
    enclosure_width: float = Field(
        default=1e-9,
        description="Maximum width of certified enclosures for p=2 quantities",
        gt=0,
        le=1,
    )
    certify_rounds: int = Field(
        default=8,
        description="Refinement rounds of the p=2 cutting-plane certificate",
        ge=1,
        le=64,
    )

    # Rank oracle
    oracle_cap: int = Field(
        default=16,
        description="Default extension cap of the rank oracle",
        ge=1,
        le=64,
    )
    oracle_node_budget: int = Field(
        default=20000,
        description="Memoized nodes the rank oracle may visit before giving up",
        ge=10,
    )

    # Search guards
    measure_support_limit: int = Field(
        default=4096,
        description="Largest support a repeated average may reach",
        ge=1,
    )
    search_node_limit: int = Field(
        default=2_000_000,
        description="Node guard for branch-and-bound searches",
        ge=100,
    )

    # Reports
    default_seed: int = Field(
        default=0,
        description="Seed used by check suites when --seed is omitted",
    )
    report_format: str = Field(
        default="text",
        description="Default report format",
        pattern="^(text|json)$",
    )

    # Logging
    log_level: str = Field(
        default="INFO",
        description="Logging level",
        pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$",
    )

    @property
    def enclosure_fraction(self) -> Fraction:
        """Enclosure width as an exact rational."""
        return Fraction(str(self.enclosure_width))


def get_settings(**kwargs) -> Settings:
    """Get settings instance with optional overrides."""
    return Settings(**kwargs)


@lru_cache(maxsize=1)
def default_settings() -> Settings:
    """Settings shared by library calls that were not given explicit limits."""
    return Settings()
