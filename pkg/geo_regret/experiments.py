"""Experiment harnesses: adjustment rate sweeps, payoff scale sweeps and basin sampling."""

import logging
from typing import List, Optional, Sequence, Union

import numpy as np

from .equilibrium_oracle import nearest_equilibrium, support_enumeration
from .exceptions import GameTooLargeError
from .iteration_engine import perturbed_profile, random_profile, run
from .models import (
    BasinEntry,
    BasinReport,
    EquilibriumSet,
    Game,
    RunConfig,
    StrategyProfile,
    SweepResult,
    SweepRow,
    frozen_array,
)
from .regret_matching import UpdateRule


logger = logging.getLogger(__name__)

DEFAULT_CONVERGENCE_EPSILON = 1e-3

PerPlayer = Union[float, Sequence[float]]


def _per_player(values: PerPlayer, num_players: int, what: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim == 0:
        return np.full(num_players, float(array))
    if array.shape != (num_players,):
        raise ValueError(f"Expected one {what} per player ({num_players}), got {array.shape[0]}")
    return array


def affine_transform(game: Game, scale: PerPlayer, offset: PerPlayer = 0.0) -> Game:
    """Map each player's payoffs x -> scale_i * x + offset_i.

    Positive scales leave the equilibria unchanged.
    """
    scales = _per_player(scale, game.num_players, "scale")
    offsets = _per_player(offset, game.num_players, "offset")
    if np.any(scales <= 0):
        raise ValueError(f"Payoff scales must be > 0, got {scales.tolist()}")
    shape = (game.num_players,) + (1,) * game.num_players
    payoffs = scales.reshape(shape) * game.payoffs + offsets.reshape(shape)
    return Game(payoffs, name=game.name)


def sweep_rates(
    game: Game, initial: StrategyProfile, rates: Sequence[float], iterations: int, epsilon: Optional[float] = None
) -> SweepResult:
    """One standard-rule run per rate, the rate shared by all players.

    Rows keep the order of ``rates``; every row starts from ``initial``.
    """
    if not rates:
        raise ValueError("sweep_rates needs at least one rate")
    rows: List[SweepRow] = []
    for rate in rates:
        config = RunConfig(rules=(UpdateRule.standard(rate),), iterations=iterations, epsilon=epsilon)
        trace = run(game, initial, config)
        logger.info(f"  rate={rate:g}: best overall regret sum {trace.best_overall:.6g} at step {trace.best_step}")
        rows.append(
            SweepRow(
                params={"rate": float(rate)},
                best_regret_sums=trace.best_regret_sums,
                best_overall=trace.best_overall,
                best_step=trace.best_step,
            )
        )
    return SweepResult(parameter_names=("rate",), rows=rows)


def sweep_scales(
    game: Game,
    initial: StrategyProfile,
    scales: Sequence[float],
    iterations: int,
    rate: float,
    epsilon: Optional[float] = None,
) -> SweepResult:
    """One run per payoff scale a (same a for all players, zero offset).

    Regret sums are multiplied by 1/a before storage so rows share units.
    """
    if not scales:
        raise ValueError("sweep_scales needs at least one scale")
    rows: List[SweepRow] = []
    for scale in scales:
        scaled = affine_transform(game, scale, 0.0)
        config = RunConfig(rules=(UpdateRule.standard(rate),), iterations=iterations, epsilon=epsilon)
        trace = run(scaled, initial, config)
        scaled_back = trace.best_regret_sums * (1.0 / scale)
        logger.info(f"  scale={scale:g}: scaled-back best overall regret sum {float(np.sum(scaled_back)):.6g}")
        rows.append(
            SweepRow(
                params={"scale": float(scale)},
                best_regret_sums=frozen_array(scaled_back),
                best_overall=float(np.sum(scaled_back)),
                best_step=trace.best_step,
            )
        )
    return SweepResult(parameter_names=("scale",), rows=rows)


def _root_sequence(seed: Union[int, np.random.SeedSequence]) -> np.random.SeedSequence:
    # A fresh copy, since spawn advances the counter of the sequence it is called on.
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key)
    return np.random.SeedSequence(seed)


def _oracle_for(game: Game) -> Optional[EquilibriumSet]:
    if game.num_players != 2:
        return None
    try:
        equilibria = support_enumeration(game)
    except GameTooLargeError as e:
        logger.info(f"No equilibrium labels: {e}")
        return None
    return equilibria if len(equilibria) else None


def basin_sample(
    game: Game,
    num_starts: int,
    seed: Union[int, np.random.SeedSequence],
    config: RunConfig,
    convergence_epsilon: float = DEFAULT_CONVERGENCE_EPSILON,
    near: Optional[StrategyProfile] = None,
    near_starts: int = 0,
    near_radius: float = 1e-3,
) -> BasinReport:
    """Run from many seeded random starts and classify each run.

    Each start gets its own seed derived from ``seed`` through
    ``numpy.random.SeedSequence``, so a start's result does not depend on
    the others. The first ``near_starts`` starts are perturbations of
    ``near`` by ``near_radius``; the rest are uniform on the simplices. A
    run counts as converged when its best overall regret sum is below
    ``convergence_epsilon``. Two-player games small enough for support
    enumeration also get the index of and distance to the equilibrium
    nearest the final profile.

    Args:
        game: The game.
        num_starts: Number of starts, at least one.
        seed: Master seed, or a seed sequence to spawn the per-start seeds from.
        config: Run configuration shared by all starts.
        convergence_epsilon: Classification threshold.
        near: Optional profile to perturb for the first starts.
        near_starts: How many starts to place near ``near``.
        near_radius: L2 perturbation radius per player.

    Returns:
        Report with one entry per start, in start order.
    """
    if num_starts < 1:
        raise ValueError(f"num_starts must be >= 1, got {num_starts}")
    if near_starts and near is None:
        raise ValueError("near_starts requires a profile to perturb")
    equilibria = _oracle_for(game)
    children = _root_sequence(seed).spawn(num_starts)

    entries: List[BasinEntry] = []
    for index, child in enumerate(children):
        start_seed = int(child.generate_state(1)[0])
        rng = np.random.default_rng(start_seed)
        if index < near_starts:
            initial = perturbed_profile(near, rng, near_radius)
        else:
            initial = random_profile(game.shape, rng)
        trace = run(game, initial, config)
        converged = trace.best_overall < convergence_epsilon

        eq_index = eq_distance = initial_distance = None
        if equilibria is not None:
            eq_index, eq_distance = nearest_equilibrium(trace.final_profile, equilibria)
            _, initial_distance = nearest_equilibrium(initial, equilibria)

        logger.info(
            f"  start {index + 1}/{num_starts} (seed {start_seed}): best overall regret sum "
            f"{trace.best_overall:.6g} {'converged' if converged else 'not converged'}"
        )
        entries.append(
            BasinEntry(
                seed=start_seed,
                initial=initial,
                converged=converged,
                best_overall=trace.best_overall,
                eq_index=eq_index,
                eq_distance=eq_distance,
                initial_eq_distance=initial_distance,
            )
        )
    return BasinReport(entries=entries, convergence_epsilon=convergence_epsilon, equilibria=equilibria)
