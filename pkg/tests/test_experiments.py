"""Tests for payoff transforms, parameter sweeps and basin sampling."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from geo_regret.builtin_games import get_builtin
from geo_regret.experiments import affine_transform, basin_sample, sweep_rates, sweep_scales
from geo_regret.game_core import regret_report
from geo_regret.iteration_engine import run
from geo_regret.models import RunConfig, StrategyProfile, as_profile
from geo_regret.regret_matching import UpdateRule


# Frozen after reference runs: smooth regret matching on MP3 with r=0.05
# settles on a small cycle around the equilibrium rather than onto it.
MP3_BEST_REGRET_THRESHOLD = 0.1
MP3_FINAL_DISTANCE_THRESHOLD = 0.1
RPS_START = [[0.4, 0.3, 0.3], [0.4, 0.3, 0.3]]


def test_identity_transform(mp3):
    np.testing.assert_array_equal(affine_transform(mp3, 1.0, 0.0).payoffs, mp3.payoffs)


def test_transform_keeps_zero_regret_profiles(mp):
    moved = affine_transform(mp, 2.0, 3.0)
    assert_allclose(regret_report(moved, StrategyProfile.uniform(mp.shape)).regret_sums, [0.0, 0.0], atol=1e-15)
    assert_allclose(moved.payoffs[0], 2.0 * mp.payoffs[0] + 3.0)


def test_transform_per_player(mp):
    moved = affine_transform(mp, [1.0, 4.0], [0.0, -1.0])
    assert_allclose(moved.payoffs[1], 4.0 * mp.payoffs[1] - 1.0)


@pytest.mark.parametrize("scale", [0.0, -2.0])
def test_transform_rejects_nonpositive_scale(mp, scale):
    with pytest.raises(ValueError):
        affine_transform(mp, scale)


def test_single_rate_sweep_matches_plain_run(mp3):
    initial = StrategyProfile.uniform(mp3.shape)
    result = sweep_rates(mp3, initial, [0.05], 500)
    trace = run(mp3, initial, RunConfig(rules=(UpdateRule.standard(0.05),), iterations=500))
    assert len(result.rows) == 1
    row = result.rows[0]
    assert row.params == {"rate": 0.05}
    assert row.best_overall == trace.best_overall
    assert row.best_step == trace.best_step
    assert_allclose(row.best_regret_sums, trace.best_regret_sums, rtol=0, atol=0)


def test_rate_sweep_preserves_input_order(mp3):
    rates = [0.1, 0.001, 1.0, 0.01]
    result = sweep_rates(mp3, StrategyProfile.uniform(mp3.shape), rates, 50)
    assert [row.params["rate"] for row in result.rows] == rates
    assert result.parameter_names == ("rate",)


def test_unit_scale_matches_plain_run(mp3):
    initial = StrategyProfile.uniform(mp3.shape)
    result = sweep_scales(mp3, initial, [1.0], 500, rate=0.05)
    trace = run(mp3, initial, RunConfig(rules=(UpdateRule.standard(0.05),), iterations=500))
    assert result.rows[0].best_overall == pytest.approx(trace.best_overall, rel=1e-15)


def test_doubling_payoffs_acts_like_doubling_rate(mp3):
    initial = StrategyProfile.uniform(mp3.shape)
    scaled = sweep_scales(mp3, initial, [2.0], 400, rate=0.05).rows[0]
    faster = sweep_rates(mp3, initial, [0.1], 400).rows[0]
    assert scaled.best_overall == pytest.approx(faster.best_overall, rel=1e-12)
    assert scaled.best_step == faster.best_step


def test_scaled_back_sums_differ_between_scales(mp3):
    result = sweep_scales(mp3, StrategyProfile.uniform(mp3.shape), [0.5, 1.0, 2.0, 4.0], 2000, rate=0.05)
    values = [row.best_overall for row in result.rows]
    assert len({round(v, 12) for v in values}) == 4


def test_basin_sample_is_deterministic(mp3):
    config = RunConfig(rules=(UpdateRule.standard(0.05),), iterations=200)
    first = basin_sample(mp3, 1, seed=11, config=config)
    second = basin_sample(mp3, 1, seed=11, config=config)
    assert first.entries[0].seed == second.entries[0].seed
    assert first.entries[0].initial.allclose(second.entries[0].initial, atol=0.0)
    assert first.entries[0].best_overall == second.entries[0].best_overall
    assert first.entries[0].eq_distance == second.entries[0].eq_distance


def test_basin_start_does_not_depend_on_start_count(mp3):
    config = RunConfig(rules=(UpdateRule.standard(0.05),), iterations=10)
    few = basin_sample(mp3, 2, seed=5, config=config)
    many = basin_sample(mp3, 4, seed=5, config=config)
    for a, b in zip(few.entries, many.entries):
        assert a.seed == b.seed
        assert a.initial.allclose(b.initial, atol=0.0)


def test_basin_near_starts_need_a_profile(mp3):
    config = RunConfig(rules=(UpdateRule.standard(0.05),), iterations=10)
    with pytest.raises(ValueError):
        basin_sample(mp3, 3, seed=0, config=config, near_starts=2)


def test_basin_without_oracle_labels(three_player):
    config = RunConfig(rules=(UpdateRule.standard(0.05),), iterations=20)
    report = basin_sample(three_player, 2, seed=0, config=config)
    assert report.equilibria is None
    assert all(entry.eq_index is None for entry in report.entries)


@pytest.mark.slow
def test_mp3_attracts_every_start(mp3):
    config = RunConfig(rules=(UpdateRule.standard(0.05),), iterations=10000)
    report = basin_sample(mp3, 10, seed=2024, config=config, convergence_epsilon=MP3_BEST_REGRET_THRESHOLD)
    assert report.converged_count == 10
    for entry in report.entries:
        assert entry.best_overall < MP3_BEST_REGRET_THRESHOLD
        assert entry.eq_index == 0
        assert entry.eq_distance < MP3_FINAL_DISTANCE_THRESHOLD




@pytest.mark.slow
def test_rps_basin_has_no_converged_start(rps):
    config = RunConfig(rules=(UpdateRule.standard(0.01),), iterations=10000)
    report = basin_sample(
        rps,
        10,
        seed=2024,
        config=config,
        convergence_epsilon=1e-3,
        near=StrategyProfile.uniform(rps.shape),
        near_starts=5,
        near_radius=1e-2,
    )
    assert report.converged_count == 0
    for entry in report.entries[:5]:
        assert entry.initial_eq_distance == pytest.approx(2e-2, rel=1e-9)
    assert all(entry.eq_index == 0 for entry in report.entries)


@pytest.mark.slow
def test_rps_rate_sweep_is_not_monotone(rps):
    result = sweep_rates(rps, as_profile(RPS_START), [1e-3, 1e-2, 0.1, 1.0], 10000)
    changes = np.diff([row.best_overall for row in result.rows])
    assert np.any(changes > 0)
    assert np.any(changes < 0)


@pytest.mark.slow
def test_rps_scale_sweep_changes_dynamics(rps):
    scales = [0.5, 1.0, 2.0, 4.0]
    result = sweep_scales(rps, as_profile(RPS_START), scales, 10000, rate=0.01)
    values = [row.best_overall for row in result.rows]
    assert len({round(v, 12) for v in values}) == 4

    config = RunConfig(rules=(UpdateRule.standard(0.01),), iterations=10000)
    raw = run(affine_transform(rps, 4.0), as_profile(RPS_START), config)
    np.testing.assert_array_equal(result.rows[-1].best_regret_sums, raw.best_regret_sums * (1.0 / 4.0))


@pytest.mark.slow
def test_both_two_support_equilibria_attract():
    game = get_builtin("3X3-2eq2sp").build()
    config = RunConfig(rules=(UpdateRule.standard(0.05),), iterations=10000)
    report = basin_sample(game, 10, seed=2024, config=config)
    assert len(report.equilibria) == 3
    # Equilibria 0 and 1 are the 2-support ones; the full-support one draws no start.
    assert {entry.eq_index for entry in report.entries} == {0, 1}


def test_basin_reuses_a_seed_sequence_deterministically(mp3):
    stream = np.random.SeedSequence(4).spawn(2)[1]
    config = RunConfig(rules=(UpdateRule.standard(0.05),), iterations=10)
    first = basin_sample(mp3, 2, seed=stream, config=config)
    second = basin_sample(mp3, 2, seed=stream, config=config)
    assert [e.seed for e in first.entries] == [e.seed for e in second.entries]
    assert first.entries[0].initial.allclose(second.entries[0].initial, atol=0.0)
