"""Tests for the builtin game registry and the random game generator."""

import numpy as np
import pytest

from geo_regret.builtin_games import ALIASES, BUILTIN_GAMES, get_builtin, random_game, verify_builtin
from geo_regret.exceptions import GameFileError


@pytest.mark.parametrize("name", sorted(BUILTIN_GAMES))
def test_advertised_equilibria_are_confirmed(name):
    assert verify_builtin(name)


@pytest.mark.parametrize("name", sorted(BUILTIN_GAMES))
def test_builtin_shapes(name):
    game = get_builtin(name).build()
    assert game.name == name
    assert game.num_players == 2
    assert game.shape in ((2, 2), (3, 3))


def test_aliases_resolve():
    assert get_builtin("MP3").name == "3X3-1eq2sp"
    assert get_builtin("RPS").name == "3X3-1eq3sp"
    assert set(ALIASES.values()) <= set(BUILTIN_GAMES)


def test_rps_is_zero_sum():
    game = get_builtin("3X3-1eq3sp").build()
    np.testing.assert_array_equal(game.payoffs[0], -game.payoffs[1])
    np.testing.assert_array_equal(game.payoffs[0], [[0, -1, 1], [1, 0, -1], [-1, 1, 0]])


def test_mp3_third_strategies_are_strictly_dominated():
    game = get_builtin("MP3").build()
    assert np.all(game.payoffs[0][0, :] > game.payoffs[0][2, :])
    assert np.all(game.payoffs[1][:, 0] > game.payoffs[1][:, 2])


def test_unknown_builtin():
    with pytest.raises(GameFileError, match="Unknown builtin game"):
        get_builtin("PD")


def test_random_game_is_seeded_and_bounded():
    a = random_game((3, 4, 2), np.random.default_rng(3))
    b = random_game((3, 4, 2), np.random.default_rng(3))
    np.testing.assert_array_equal(a.payoffs, b.payoffs)
    assert a.payoffs.shape == (3, 3, 4, 2)
    assert a.name == "random:3x4x2"
    assert a.payoffs.min() >= -1.0 and a.payoffs.max() < 1.0
