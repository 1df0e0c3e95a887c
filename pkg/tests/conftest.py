"""Shared fixtures: builtin games and seeded generators."""

import numpy as np
import pytest

from geo_regret.builtin_games import get_builtin, random_game


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def mp():
    return get_builtin("MP").build()


@pytest.fixture
def mp3():
    return get_builtin("MP3").build()


@pytest.fixture
def rps():
    return get_builtin("RPS").build()


@pytest.fixture
def dominant():
    return get_builtin("3X3-1eq1sp").build()


@pytest.fixture
def three_player(rng):
    return random_game((2, 3, 2), rng)


@pytest.fixture
def clean_env(monkeypatch):
    """Remove GRM_* variables so Config.from_env sees only what a test sets."""
    import os

    for key in list(os.environ):
        if key.startswith("GRM_"):
            monkeypatch.delenv(key, raising=False)
    return monkeypatch
