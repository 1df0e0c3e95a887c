"""Simultaneous fixed-point iteration of all players' regret matching updates."""

import logging
import math
from typing import List, Optional, Sequence, Union

import numpy as np

from .exceptions import NumericalError, ShapeError
from .game_core import regret_report
from .metrics import profile_distance_sum
from .models import Game, IterationTrace, MixedStrategy, RegretReport, RunConfig, StrategyProfile, frozen_array
from .regret_matching import UpdateRule, apply_rule


logger = logging.getLogger(__name__)

Rules = Union[UpdateRule, Sequence[UpdateRule]]


def resolve_rules(rules: Rules, num_players: int) -> List[UpdateRule]:
    """Expand a single rule (or a one-element list) to one rule per player."""
    if isinstance(rules, UpdateRule):
        return [rules] * num_players
    rules = list(rules)
    if len(rules) == 1:
        return rules * num_players
    if len(rules) != num_players:
        raise ShapeError(f"Got {len(rules)} update rules for a {num_players}-player game")
    return rules


def _advance(game: Game, profile: StrategyProfile, report: RegretReport, rules: List[UpdateRule]) -> StrategyProfile:
    # Every player reads the same report: no player sees another's new strategy.
    return StrategyProfile(
        tuple(apply_rule(profile[i], report[i], rules[i], report) for i in range(game.num_players))
    )


def step(game: Game, profile: StrategyProfile, rules: Rules) -> StrategyProfile:
    """Apply every player's update simultaneously to the same input profile."""
    report = regret_report(game, profile)
    return _advance(game, profile, report, resolve_rules(rules, game.num_players))


def run(game: Game, initial: StrategyProfile, config: RunConfig) -> IterationTrace:
    """Iterate the simultaneous update and track the best approximate equilibrium.

    At each of the ``config.iterations`` steps the regret sums of the current
    profile are evaluated, the best-so-far profile is replaced only when the
    overall regret sum is a strict new minimum, the step is recorded every
    ``record_every`` steps (and on the last one), and all players update.

    Args:
        game: The game to play.
        initial: Starting profile.
        config: Rules, iteration count, optional early-stop epsilon and
            recording stride.

    Returns:
        The iteration trace.
    """
    game.check_profile(initial)
    rules = resolve_rules(config.rules, game.num_players)
    logger.debug(
        f"Running {config.iterations} iterations on {game.name or 'game'} "
        f"with rules {[r.describe() for r in rules]}"
    )

    profile = initial
    profiles: List[StrategyProfile] = []
    steps: List[int] = []
    recorded_sums: List[np.ndarray] = []
    best_profile = initial
    best_sums: Optional[np.ndarray] = None
    best_overall = math.inf
    best_step = 0
    stopped_early = False
    steps_run = 0

    for t in range(config.iterations):
        report = regret_report(game, profile)
        regret_sums = report.regret_sums
        overall = float(np.sum(regret_sums))
        if not math.isfinite(overall):
            raise NumericalError(f"Regret sums became non-finite at step {t}")

        if overall < best_overall:
            best_overall = overall
            best_profile = profile
            best_sums = regret_sums
            best_step = t

        stop = config.epsilon is not None and overall <= config.epsilon
        if t % config.record_every == 0 or t == config.iterations - 1 or stop:
            profiles.append(profile)
            steps.append(t)
            recorded_sums.append(regret_sums)

        steps_run = t + 1
        if stop:
            stopped_early = True
            logger.debug(f"Early stop at step {t}: overall regret sum {overall:.3e} <= {config.epsilon:g}")
            break

        profile = _advance(game, profile, report, rules)

    return IterationTrace(
        profiles=profiles,
        steps=steps,
        regret_sums=frozen_array(np.vstack(recorded_sums)),
        best_profile=best_profile,
        best_regret_sums=frozen_array(best_sums),
        best_step=best_step,
        stopped_early=stopped_early,
        steps_run=steps_run,
    )


def trajectory_distances(trace: IterationTrace, reference: StrategyProfile) -> np.ndarray:
    """Summed per-player L2 distance of every recorded profile to ``reference``."""
    return np.array([profile_distance_sum(profile, reference) for profile in trace.profiles])


def random_profile(shape: Sequence[int], rng: np.random.Generator) -> StrategyProfile:
    """Profile drawn uniformly from the product of simplices.

    Normalized exponential draws are Dirichlet(1, ..., 1) distributed.
    """
    strategies = []
    for g in shape:
        draws = rng.exponential(1.0, size=int(g))
        strategies.append(MixedStrategy(draws / draws.sum()))
    return StrategyProfile(tuple(strategies))


def perturbed_profile(profile: StrategyProfile, rng: np.random.Generator, radius: float) -> StrategyProfile:
    """Move every player's strategy by ``radius`` (L2) in a random in-simplex direction.

    The move is taken within the plane of the simplex; weights pushed below
    zero near the boundary are clipped before renormalizing.
    """
    strategies = []
    for strategy in profile:
        direction = rng.normal(size=strategy.size)
        direction -= direction.mean()
        norm = np.linalg.norm(direction)
        if norm > 0:
            direction *= radius / norm
        weights = np.maximum(strategy.weights + direction, 0.0)
        strategies.append(MixedStrategy(weights / weights.sum()))
    return StrategyProfile(tuple(strategies))
