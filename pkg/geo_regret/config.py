"""Configuration management for geometric regret matching runs."""

import os
import logging
from dataclasses import dataclass


logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class Config:
    """Defaults for runs, overridable per command by CLI flags."""

    # Logging
    log_level: str = "INFO"

    # Randomness; unseeded commands use this seed and say so
    default_seed: int = 0

    # Iteration defaults
    default_rate: float = 0.05
    default_iterations: int = 10000
    record_every: int = 1

    # Classification and oracle thresholds
    convergence_epsilon: float = 1e-3
    oracle_tolerance: float = 1e-9

    @classmethod
    def from_env(cls) -> "Config":
        """Create configuration from GRM_* environment variables."""
        try:
            default_seed = int(os.getenv("GRM_DEFAULT_SEED", "0"))
            default_iterations = int(os.getenv("GRM_DEFAULT_ITERATIONS", "10000"))
            record_every = int(os.getenv("GRM_RECORD_EVERY", "1"))
            default_rate = float(os.getenv("GRM_DEFAULT_RATE", "0.05"))
            convergence_epsilon = float(os.getenv("GRM_CONVERGENCE_EPSILON", "1e-3"))
            oracle_tolerance = float(os.getenv("GRM_ORACLE_TOLERANCE", "1e-9"))
        except ValueError as e:
            raise ValueError(f"Configuration parsing error: {e}")

        return cls(
            log_level=os.getenv("GRM_LOG_LEVEL", "INFO"),
            default_seed=default_seed,
            default_rate=default_rate,
            default_iterations=default_iterations,
            record_every=record_every,
            convergence_epsilon=convergence_epsilon,
            oracle_tolerance=oracle_tolerance,
        )

    def validate(self) -> None:
        """Validate configuration values."""
        if self.log_level.upper() not in LOG_LEVELS:
            raise ValueError(f"GRM_LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}, got '{self.log_level}'")

        if not self.default_rate > 0:
            raise ValueError(f"GRM_DEFAULT_RATE must be > 0, got {self.default_rate}")

        if self.default_iterations < 1:
            raise ValueError(f"GRM_DEFAULT_ITERATIONS must be >= 1, got {self.default_iterations}")

        if self.record_every < 1:
            raise ValueError(f"GRM_RECORD_EVERY must be >= 1, got {self.record_every}")

        if not self.convergence_epsilon > 0:
            raise ValueError(f"GRM_CONVERGENCE_EPSILON must be > 0, got {self.convergence_epsilon}")

        if not self.oracle_tolerance > 0:
            raise ValueError(f"GRM_ORACLE_TOLERANCE must be > 0, got {self.oracle_tolerance}")

        if self.default_seed < 0:
            raise ValueError(f"GRM_DEFAULT_SEED must be >= 0, got {self.default_seed}")
