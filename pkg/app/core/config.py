"""Toolkit Configuration Module.

This module defines toolkit-wide numerical settings using Pydantic BaseSettings.
Settings include:
- Series truncation policy (tolerance, term cap, boundary snap)
- Nested minimax solver tolerances
- Region dispatch thresholds of the glued potential field
- Finite-difference oracle defaults
- Quadrature tolerances

Values are taken from keyword overrides only. The command line turns its flags
into overrides; the process environment and .env files are never consulted.
"""

from typing import Tuple

from pydantic import field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit configuration settings.

    Provides type validation and default values for every tolerance used by
    the services. Construct with keyword overrides, e.g.
    ``Settings(SERIES_ABS_TOL=1e-14)``.
    """
    # Application
    APP_NAME: str = "Infinity Potential Toolkit"
    LOG_LEVEL: str = "WARNING"

    # Series truncation
    SERIES_ABS_TOL: float = 1e-15
    SERIES_MAX_TERMS: int = 100_000
    SERIES_BOUNDARY_SNAP: float = 1.0 - 1e-12
    THETA2_PRODUCT_CROSSOVER: float = 0.9

    # Minimax solver
    SOLVER_ROOT_TOL: float = 1e-13
    SOLVER_MAX_ITER: int = 200
    SOLVER_BRACKET_SHRINK: float = 1e-15
    SOLVER_ANGLE_CLAMP: float = 1e-9
    SOLVER_SQUEEZE_TOL: float = 1e-13

    # Potential field dispatch
    FIELD_LINE_TOL: float = 1e-12
    FIELD_HESSIAN_GUARD: float = 1e-6
    FIELD_MEDIAN_FALLBACK_BAND: float = 1e-4
    FIELD_CACHE_SIZE: int = 262_144

    # Finite-difference oracle
    ORACLE_STENCIL_RADIUS: int = 3
    ORACLE_SWEEP_TOL: float = 1e-10
    ORACLE_MAX_SWEEPS: int = 1_000_000

    # Quadrature
    QUADRATURE_ABS_TOL: float = 1e-11
    QUADRATURE_LIMIT: int = 200

    model_config = SettingsConfigDict(case_sensitive=True, extra="forbid")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    @field_validator("LOG_LEVEL")
    @classmethod
    def _normalize_level(cls, value: str) -> str:
        level = value.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level '{value}'")
        return level

    @field_validator(
        "SERIES_ABS_TOL", "SOLVER_ROOT_TOL", "SOLVER_BRACKET_SHRINK",
        "SOLVER_ANGLE_CLAMP", "SOLVER_SQUEEZE_TOL", "FIELD_LINE_TOL",
        "FIELD_HESSIAN_GUARD", "FIELD_MEDIAN_FALLBACK_BAND",
        "ORACLE_SWEEP_TOL", "QUADRATURE_ABS_TOL",
    )
    @classmethod
    def _positive(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("must be positive")
        return value

    @field_validator("SERIES_BOUNDARY_SNAP", "THETA2_PRODUCT_CROSSOVER")
    @classmethod
    def _unit_interval(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError("must lie strictly between 0 and 1")
        return value


settings = Settings()
