"""Canonical builtin games and a seeded random game generator."""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence

import numpy as np

from .exceptions import GameFileError, ShapeError
from .models import Game, StrategyProfile, as_profile


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BuiltinGame:
    """A named game together with the equilibria it is advertised to have.

    When ``exhaustive`` is set the advertised list is the complete
    equilibrium set; otherwise it only has to be contained in it.
    """

    name: str
    description: str
    factory: Callable[[], Game]
    equilibria: List[List[List[float]]]
    exhaustive: bool = True

    def build(self) -> Game:
        return self.factory()

    def advertised(self) -> List[StrategyProfile]:
        return [as_profile(eq) for eq in self.equilibria]


def matching_pennies() -> Game:
    a = np.array([[1.0, -1.0], [-1.0, 1.0]])
    return Game.from_bimatrix(a, -a, name="MP")


def one_pure_equilibrium() -> Game:
    a = np.array([[3.0, 3.0, 3.0], [2.0, 2.0, 2.0], [1.0, 1.0, 1.0]])
    return Game.from_bimatrix(a, a.T, name="3X3-1eq1sp")


def embedded_matching_pennies() -> Game:
    """Matching pennies plus a strictly dominated third strategy per player."""
    a = np.array([[1.0, -1.0, 0.0], [-1.0, 1.0, 0.0], [-2.0, -2.0, -2.0]])
    b = np.array([[-1.0, 1.0, -2.0], [1.0, -1.0, -2.0], [0.0, 0.0, -2.0]])
    return Game.from_bimatrix(a, b, name="3X3-1eq2sp")


def two_overlapping_pennies() -> Game:
    """Two matching-pennies blocks sharing the middle strategy.

    Equilibria sit on supports {0,1}x{0,1} and {1,2}x{1,2}; the game is
    nondegenerate, so a third, full-support equilibrium exists as well.
    """
    a = np.array([[1.0, -1.0, 0.0], [-1.0, 1.0, -1.0], [0.0, -1.0, 1.0]])
    b = np.array([[-1.0, 1.0, -2.0], [1.0, -1.0, 1.0], [-2.0, 1.0, -1.0]])
    return Game.from_bimatrix(a, b, name="3X3-2eq2sp")


def rock_paper_scissors() -> Game:
    a = np.array([[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]])
    return Game.from_bimatrix(a, -a, name="3X3-1eq3sp")


_THIRD = 1.0 / 3.0

BUILTIN_GAMES: Dict[str, BuiltinGame] = {
    game.name: game
    for game in [
        BuiltinGame(
            name="MP",
            description="matching pennies, unique interior equilibrium",
            factory=matching_pennies,
            equilibria=[[[0.5, 0.5], [0.5, 0.5]]],
        ),
        BuiltinGame(
            name="3X3-1eq1sp",
            description="dominant first strategies, unique pure equilibrium",
            factory=one_pure_equilibrium,
            equilibria=[[[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]],
        ),
        BuiltinGame(
            name="3X3-1eq2sp",
            description="matching pennies with a dominated third strategy, unique 2-support equilibrium",
            factory=embedded_matching_pennies,
            equilibria=[[[0.5, 0.5, 0.0], [0.5, 0.5, 0.0]]],
        ),
        BuiltinGame(
            name="3X3-2eq2sp",
            description="two 2-support equilibria plus one full-support equilibrium",
            factory=two_overlapping_pennies,
            equilibria=[
                [[0.5, 0.5, 0.0], [0.5, 0.5, 0.0]],
                [[0.0, 0.5, 0.5], [0.0, 0.5, 0.5]],
                [[2.0 / 9.0, 5.0 / 9.0, 2.0 / 9.0], [2.0 / 7.0, 3.0 / 7.0, 2.0 / 7.0]],
            ],
        ),
        BuiltinGame(
            name="3X3-1eq3sp",
            description="rock-paper-scissors, unique full-support equilibrium",
            factory=rock_paper_scissors,
            equilibria=[[[_THIRD, _THIRD, _THIRD], [_THIRD, _THIRD, _THIRD]]],
        ),
    ]
}

ALIASES = {"MP3": "3X3-1eq2sp", "RPS": "3X3-1eq3sp"}


def get_builtin(name: str) -> BuiltinGame:
    """Look up a builtin game by name or alias."""
    key = ALIASES.get(name, name)
    try:
        return BUILTIN_GAMES[key]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_GAMES) + sorted(ALIASES))
        raise GameFileError(f"Unknown builtin game '{name}'. Known games: {known}") from None


def random_game(shape: Sequence[int], rng: np.random.Generator, low: float = -1.0, high: float = 1.0) -> Game:
    """Game with payoffs drawn uniformly from [low, high) for every player.

    Args:
        shape: Pure strategy counts (g1, ..., gn).
        rng: Source of randomness.
        low: Lower payoff bound.
        high: Upper payoff bound.

    Returns:
        A random game named after its shape.
    """
    shape = tuple(int(g) for g in shape)
    if not shape:
        raise ShapeError("Random game needs at least one player")
    payoffs = rng.uniform(low, high, size=(len(shape),) + shape)
    return Game(payoffs, name="random:" + "x".join(str(g) for g in shape))


def verify_builtin(name: str, tolerance: float = 1e-9, match_tolerance: float = 1e-7) -> bool:
    """Confirm a builtin game's advertised equilibria with support enumeration."""
    from .equilibrium_oracle import support_enumeration
    from .metrics import profile_distance_sum

    builtin = get_builtin(name)
    found = support_enumeration(builtin.build(), tolerance=tolerance)
    advertised = builtin.advertised()

    def contains(pool: List[StrategyProfile], profile: StrategyProfile) -> bool:
        return any(profile_distance_sum(profile, other) < match_tolerance for other in pool)

    ok = all(contains(found.equilibria, eq) for eq in advertised)
    if builtin.exhaustive:
        ok = ok and len(found) == len(advertised) and all(contains(advertised, eq) for eq in found.equilibria)
    if not ok:
        logger.warning(f"Builtin game {builtin.name} does not match its advertised equilibria: found {len(found)}")
    return ok
