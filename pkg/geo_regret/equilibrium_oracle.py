"""Ground-truth Nash equilibria of small two-player games by support enumeration."""

import itertools
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import GameTooLargeError, ShapeError
from .game_core import regret_report
from .metrics import profile_distance_sum
from .models import EquilibriumSet, Game, MixedStrategy, StrategyProfile


logger = logging.getLogger(__name__)

MAX_STRATEGIES = 10
DEDUP_TOLERANCE = 1e-7


def _indifference_solution(payoffs: np.ndarray, support: Sequence[int], size: int) -> Optional[np.ndarray]:
    """Weights on ``support`` that make the opponent indifferent over its support.

    ``payoffs`` is the opponent's payoff matrix restricted to (our support) x
    (opponent support), our strategies along the rows. Solves

        sum_i w_i * payoffs[i, j] - value = 0   for every opponent j
        sum_i w_i = 1

    and returns the full-length weight vector, or None for singular systems.
    """
    k = len(support)
    system = np.zeros((k + 1, k + 1))
    system[:k, :k] = payoffs.T
    system[:k, k] = -1.0
    system[k, :k] = 1.0
    if np.linalg.matrix_rank(system) < k + 1:
        return None
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    solution = np.linalg.solve(system, rhs)
    weights = np.zeros(size)
    weights[list(support)] = solution[:k]
    return weights


def _as_strategy(weights: np.ndarray, tolerance: float) -> Optional[MixedStrategy]:
    if weights.min() < -tolerance:
        return None
    weights = np.maximum(weights, 0.0)
    return MixedStrategy(weights / weights.sum())


def _has_extra_best_responses(vertex_payoffs: np.ndarray, support_size: int, tolerance: float) -> bool:
    best = np.max(vertex_payoffs)
    return int(np.sum(vertex_payoffs >= best - tolerance)) > support_size


def support_enumeration(game: Game, tolerance: float = 1e-9) -> EquilibriumSet:
    """All equilibria of a nondegenerate two-player game.

    Every pair of equal-size supports is tried; singular indifference
    systems are skipped. A candidate is kept when its weights are
    nonnegative and no player has regret sum above ``tolerance``. Results
    are deduplicated within 1e-7 and ordered by support size, then
    lexicographically by support. For degenerate games only representative
    equilibria are returned and the set is flagged ``degenerate``.

    Args:
        game: Two-player game with at most 10 strategies per player.
        tolerance: Regret and weight tolerance.

    Returns:
        The equilibrium set.

    Raises:
        ShapeError: If the game does not have two players.
        GameTooLargeError: If a player has more than 10 strategies.
    """
    if game.num_players != 2:
        raise ShapeError(f"Support enumeration needs a two-player game, got {game.num_players} players")
    rows, cols = game.shape
    if max(rows, cols) > MAX_STRATEGIES:
        raise GameTooLargeError(
            f"Support enumeration is limited to {MAX_STRATEGIES} strategies per player, got {rows}x{cols}"
        )
    row_payoffs, col_payoffs = game.payoffs[0], game.payoffs[1]

    found: List[StrategyProfile] = []
    degenerate = False
    for size in range(1, min(rows, cols) + 1):
        for row_support, col_support in itertools.product(
            itertools.combinations(range(rows), size), itertools.combinations(range(cols), size)
        ):
            row_weights = _indifference_solution(
                col_payoffs[np.ix_(row_support, col_support)], row_support, rows
            )
            col_weights = _indifference_solution(
                row_payoffs[np.ix_(row_support, col_support)].T, col_support, cols
            )
            if row_weights is None or col_weights is None:
                logger.debug(f"Singular indifference system for supports {row_support} x {col_support}")
                continue
            row_strategy = _as_strategy(row_weights, tolerance)
            col_strategy = _as_strategy(col_weights, tolerance)
            if row_strategy is None or col_strategy is None:
                continue
            profile = StrategyProfile((row_strategy, col_strategy))
            report = regret_report(game, profile)
            if report.maximum > tolerance:
                continue
            if any(np.max(np.abs(profile.flatten() - other.flatten())) < DEDUP_TOLERANCE for other in found):
                continue
            if _has_extra_best_responses(report[0].vertex_payoffs, size, tolerance) or _has_extra_best_responses(
                report[1].vertex_payoffs, size, tolerance
            ):
                degenerate = True
            found.append(profile)

    if degenerate:
        logger.warning(f"Game {game.name or ''} is degenerate: equilibria are representative points only")
    logger.debug(f"Support enumeration found {len(found)} equilibria")
    return EquilibriumSet(equilibria=found, method="support_enumeration", tolerance=tolerance, degenerate=degenerate)


def nearest_equilibrium(profile: StrategyProfile, equilibria: EquilibriumSet) -> Tuple[int, float]:
    """Index of and summed L2 distance to the closest equilibrium; ties go to the lowest index."""
    if len(equilibria) == 0:
        raise ValueError("Cannot find the nearest equilibrium in an empty set")
    best_index, best_distance = 0, profile_distance_sum(profile, equilibria.equilibria[0])
    for index, equilibrium in enumerate(equilibria.equilibria[1:], start=1):
        distance = profile_distance_sum(profile, equilibrium)
        if distance < best_distance:
            best_index, best_distance = index, distance
    return best_index, best_distance
