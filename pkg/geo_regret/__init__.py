"""Geometric Regret Matching.

Approximates Nash equilibria of finite n-person games by iterating a smooth
regret matching update, and measures and exports the resulting strategy
trajectories, regret sequences and convergence diagnostics.
"""

__version__ = "0.1.0"

from .pipeline import Pipeline
from .models import Game, MixedStrategy, StrategyProfile, RunConfig, IterationTrace

__all__ = ["Pipeline", "Game", "MixedStrategy", "StrategyProfile", "RunConfig", "IterationTrace"]
