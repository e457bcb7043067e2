"""Typed configuration via pydantic-settings."""

from __future__ import annotations

from fractions import Fraction

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

__all__ = ["Settings"]


class Settings(BaseSettings):
    """Application settings, loaded from environment variables prefixed with SPECTRAL_DOMAINS_."""

    model_config = SettingsConfigDict(env_prefix="SPECTRAL_DOMAINS_", arbitrary_types_allowed=True)

    # -- Randomized suites --
    seed: int = 0

    # -- Enumeration caps --
    cap_lattice: int = 4096  # sublattice closure size
    cap_exhaustive: int = 24  # exhaustive prime-filter enumeration (2^n subsets)
    cap_subsets: int = 20  # step-function components for the Formula preimage strategy

    # -- A-priori bound search (ivp) --
    apriori_max_iterations: int = 60
    apriori_inflation: Fraction = Fraction(1, 10)
    apriori_epsilon: Fraction = Fraction(1, 1024)
    apriori_magnitude_limit: Fraction = Fraction(10**12)

    log_level: str = "WARNING"

    # -- MCP tool surface --
    server_transport: str = "stdio"  # "stdio" | "streamable-http"
    server_host: str = "127.0.0.1"
    server_port: int = 8080

    @field_validator(
        "apriori_inflation", "apriori_epsilon", "apriori_magnitude_limit", mode="before"
    )
    @classmethod
    def _parse_rational(cls, v: object) -> object:
        """Accept "p/q" strings, ints and Fractions; floats are rejected as inexact."""
        if isinstance(v, float):
            msg = f"Rational settings must be exact, got float {v!r}; use a 'p/q' string"
            raise ValueError(msg)
        if isinstance(v, str | int):
            return Fraction(v)
        return v

    @field_validator(
        "cap_lattice", "cap_exhaustive", "cap_subsets", "apriori_max_iterations"
    )
    @classmethod
    def _validate_positive(cls, v: int) -> int:
        if v < 1:
            msg = f"Caps must be positive, got {v}"
            raise ValueError(msg)
        return v

    @field_validator("apriori_inflation", "apriori_epsilon", "apriori_magnitude_limit")
    @classmethod
    def _validate_positive_rational(cls, v: Fraction) -> Fraction:
        if v <= 0:
            msg = f"Rational settings must be positive, got {v}"
            raise ValueError(msg)
        return v

    @field_validator("log_level")
    @classmethod
    def _validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            msg = f"Unknown log level {v!r}"
            raise ValueError(msg)
        return level
