"""Configuration management for miebound."""

from typing import Optional, Tuple, Type

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource


class Settings(BaseSettings):
    """Numerical defaults loaded from MIEBOUND_* environment variables."""

    # Application Settings
    app_name: str = Field(default="miebound")
    app_version: str = Field(default="0.1.0")
    log_level: str = Field(default="WARNING")

    # Wavefunction sampling
    grid_points: int = Field(default=2001, ge=16)
    grid_r_min_factor: float = Field(default=1e-4, gt=0.0, lt=1.0)
    grid_tail_decades: float = Field(default=14.0, gt=0.0)
    grid_r_max_cap: float = Field(default=40.0, gt=1.0)
    expectation_points: int = Field(default=4001, ge=16)
    expectation_tolerance: float = Field(default=1e-9, gt=0.0)

    # Oracle Settings
    oracle_method: str = Field(default="fd")
    oracle_richardson: bool = Field(default=True)
    oracle_log_step: float = Field(default=0.005, gt=0.0)
    oracle_r_min_factor: float = Field(default=1e-8, gt=0.0, le=1e-3)
    oracle_tail_decades: float = Field(default=16.0, gt=0.0)
    oracle_max_doublings: int = Field(default=4, ge=0)
    oracle_tail_window: float = Field(default=0.05, gt=0.0, lt=0.5)
    oracle_tail_amplitude: float = Field(default=1e-8, gt=0.0)
    oracle_eigen_tol: float = Field(default=1e-15, gt=0.0)

    # Verification Settings
    verify_tolerance: float = Field(default=1e-6, gt=0.0)
    convergence_threshold: float = Field(default=1e-7, gt=0.0)
    max_workers: int = Field(default=1, ge=1)
    cache_ttl: int = Field(default=600, ge=1)

    model_config = {
        "env_prefix": "MIEBOUND_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": False,
    }

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Invalid log level: {v}")
        return v.upper()

    @field_validator("oracle_method")
    @classmethod
    def validate_oracle_method(cls, v: str) -> str:
        """Validate oracle method."""
        valid_methods = ["fd", "numerov"]
        if v.lower() not in valid_methods:
            raise ValueError(f"Invalid oracle method: {v}")
        return v.lower()

    @field_validator("grid_points", "expectation_points")
    @classmethod
    def validate_odd_points(cls, v: int) -> int:
        """Composite Simpson wants an even number of intervals."""
        if v % 2 == 0:
            raise ValueError(f"Invalid point count (must be odd): {v}")
        return v


class CliSettings(Settings):
    """Settings built from command-line flags only."""

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)


# Global settings instance
settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create settings instance."""
    global settings
    if settings is None:
        settings = Settings()
    return settings


def use_settings(new_settings: Settings) -> Settings:
    """Install an explicit settings instance (the CLI does this)."""
    global settings
    settings = new_settings
    return settings


def reset_settings() -> None:
    """Reset settings instance (useful for testing)."""
    global settings
    settings = None
