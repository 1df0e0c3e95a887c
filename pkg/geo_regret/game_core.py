"""Payoffs, regret vectors and regret sums of finite n-person games."""

import logging
from typing import List

import numpy as np

from .exceptions import ShapeError
from .models import Game, MixedStrategy, PlayerRegret, RegretReport, StrategyProfile, frozen_array


logger = logging.getLogger(__name__)


def vertex_payoffs(game: Game, profile: StrategyProfile, player: int) -> np.ndarray:
    """Player's expected payoff at each of its pure strategies.

    Component j is the expectation of the player's payoff tensor over the
    opponents' mixed strategies with the player fixed at pure strategy j.

    Args:
        game: The game.
        profile: Current strategies of all players.
        player: Index of the player whose vertex payoffs are computed.

    Returns:
        Vector of length g_player.

    Raises:
        ShapeError: If the player index is out of range or the profile does
            not fit the game.
    """
    game.check_player(player)
    game.check_profile(profile)
    tensor = game.payoffs[player]
    # Contract from the last axis down so lower axis indices stay valid.
    for opponent in reversed(range(game.num_players)):
        if opponent == player:
            continue
        tensor = np.tensordot(tensor, profile[opponent].weights, axes=([opponent], [0]))
    return np.asarray(tensor, dtype=float)


def expected_payoff(strategy: MixedStrategy, payoffs: np.ndarray) -> float:
    """Inner product of a mixed strategy with a vertex payoff vector."""
    payoffs = np.asarray(payoffs, dtype=float)
    if payoffs.shape != strategy.weights.shape:
        raise ShapeError(f"Strategy of length {strategy.size} paired with payoff vector of shape {payoffs.shape}")
    return float(np.dot(strategy.weights, payoffs))


def regret_vector(payoffs: np.ndarray, payoff: float) -> np.ndarray:
    """Componentwise positive part of vertex payoffs minus the average payoff.

    The component of the least profitable pure strategy is pinned to zero,
    which holds analytically since the average never falls below the
    minimum vertex payoff.
    """
    payoffs = np.asarray(payoffs, dtype=float)
    if payoffs.ndim != 1 or payoffs.size == 0:
        raise ShapeError(f"Vertex payoffs must be a non-empty vector, got shape {payoffs.shape}")
    regret = np.maximum(payoffs - payoff, 0.0)
    regret[int(np.argmin(payoffs))] = 0.0
    return regret


def regret_report(game: Game, profile: StrategyProfile) -> RegretReport:
    """Vertex payoffs, payoff, regret vector and regret sum for every player."""
    game.check_profile(profile)
    players: List[PlayerRegret] = []
    for player in range(game.num_players):
        payoffs = vertex_payoffs(game, profile, player)
        payoff = expected_payoff(profile[player], payoffs)
        regret = regret_vector(payoffs, payoff)
        players.append(
            PlayerRegret(
                vertex_payoffs=frozen_array(payoffs),
                payoff=payoff,
                regret_vector=frozen_array(regret),
                regret_sum=float(np.sum(regret)),
            )
        )
    return RegretReport(tuple(players))
