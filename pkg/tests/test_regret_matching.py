"""Tests for the regret matching update rules and their monotonicity properties."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from geo_regret.builtin_games import random_game
from geo_regret.exceptions import NumericalError, RuleError, ShapeError
from geo_regret.game_core import expected_payoff, regret_report, regret_vector, vertex_payoffs
from geo_regret.iteration_engine import random_profile
from geo_regret.models import MixedStrategy, StrategyProfile
from geo_regret.regret_matching import (
    CONVEX_TARGET,
    GENERALIZED,
    STANDARD,
    AlphaTransform,
    RateFunction,
    TargetMap,
    UpdateRule,
    convex_update,
    cosine_angle,
    parse_rule_spec,
    psi_update,
    psi_update_general,
)


def _log_uniform_rate(rng):
    return float(10.0 ** rng.uniform(-3.0, 3.0))


def _random_situation(rng):
    """Random game, profile and player with the player's regret quantities."""
    shape = tuple(int(g) for g in rng.integers(2, 5, size=int(rng.integers(2, 4))))
    game = random_game(shape, rng)
    profile = random_profile(game.shape, rng)
    player = int(rng.integers(game.num_players))
    v = vertex_payoffs(game, profile, player)
    p = expected_payoff(profile[player], v)
    return game, profile, player, v, regret_vector(v, p)


class TestPsiUpdate:
    def test_zero_regret_is_fixed_point(self):
        s = MixedStrategy([0.3, 0.7])
        assert psi_update(s, np.zeros(2), 1.0) is s

    def test_moves_towards_regret(self):
        out = psi_update(MixedStrategy([1, 0, 0]), np.array([0.0, 2.0, 0.0]), 0.5)
        assert_allclose(out.weights, [0.5, 0.5, 0.0], atol=1e-15)

    def test_uniform_start(self):
        out = psi_update(MixedStrategy.uniform(3), np.array([0.0, 0.0, 1.0]), 1.0)
        assert_allclose(out.weights, [1 / 6, 1 / 6, 2 / 3], atol=1e-15)

    @pytest.mark.parametrize("rate", [0.0, -1.0, np.inf, np.nan])
    def test_rejects_invalid_rate(self, rate):
        with pytest.raises(RuleError):
            psi_update(MixedStrategy.uniform(2), np.array([1.0, 0.0]), rate)

    def test_rejects_negative_regret(self):
        with pytest.raises(RuleError):
            psi_update(MixedStrategy.uniform(2), np.array([1.0, -0.5]), 0.1)

    def test_rejects_length_mismatch(self):
        with pytest.raises(ShapeError):
            psi_update(MixedStrategy.uniform(2), np.array([1.0, 0.0, 0.0]), 0.1)

    def test_overflowing_update_is_numerical_error(self):
        with pytest.raises(NumericalError):
            psi_update(MixedStrategy.uniform(2), np.array([1e308, 0.0]), 1e10)

    def test_stays_on_simplex(self, rng):
        for _ in range(500):
            g = int(rng.integers(2, 7))
            s = MixedStrategy(rng.dirichlet(np.ones(g)))
            regret = rng.uniform(0.0, 3.0, size=g)
            regret[rng.integers(g)] = 0.0
            out = psi_update(s, regret, _log_uniform_rate(rng))
            assert np.all(out.weights >= 0.0)
            assert abs(out.weights.sum() - 1.0) <= 1e-12

    def test_large_rate_tends_to_normalized_regret(self, rng):
        for _ in range(50):
            s = MixedStrategy(rng.dirichlet(np.ones(4)))
            regret = rng.uniform(0.1, 2.0, size=4)
            regret[0] = 0.0
            out = psi_update(s, regret, 1e12)
            assert_allclose(out.weights, regret / regret.sum(), atol=1e-6)

    def test_suppresses_strategies_without_regret(self, rng):
        for _ in range(200):
            _, profile, player, _, regret = _random_situation(rng)
            if regret.sum() == 0.0:
                continue
            s = profile[player]
            out = psi_update(s, regret, _log_uniform_rate(rng))
            for j in np.flatnonzero(regret == 0.0):
                if s.weights[j] > 0.0:
                    assert out.weights[j] < s.weights[j]


class TestMonotonicity:
    """Angle, payoff and regret inequalities on random triples."""

    def test_angle_to_regret_never_decreases(self, rng):
        for _ in range(1000):
            d = int(rng.integers(2, 6))
            u = rng.normal(size=d)
            v = rng.normal(size=d)
            r = _log_uniform_rate(rng)
            assert cosine_angle(u + r * v, v) >= cosine_angle(u, v) - 1e-12

    def test_payoff_never_decreases_and_matches_closed_form(self, rng):
        for _ in range(1000):
            _, profile, player, v, regret = _random_situation(rng)
            r = _log_uniform_rate(rng)
            s = profile[player]
            before = expected_payoff(s, v)
            after = expected_payoff(psi_update(s, regret, r), v)
            total = float(np.sum(regret))
            assert after >= before - 1e-9
            assert after - before == pytest.approx(float(np.dot(regret, regret)) / (1.0 / r + total), abs=1e-9)
            if total <= 1e-12:
                assert after == pytest.approx(before, abs=1e-9)

    def test_unilateral_update_never_increases_own_regret(self, rng):
        for _ in range(1000):
            game, profile, player, _, regret = _random_situation(rng)
            r = _log_uniform_rate(rng)
            moved = profile.replace(player, psi_update(profile[player], regret, r))
            before = regret_report(game, profile)[player].regret_sum
            after = regret_report(game, moved)[player].regret_sum
            assert after <= before + 1e-9

    def test_generalized_payoff_increment_closed_form(self, rng):
        alpha = AlphaTransform("power", 2.0)
        for _ in range(1000):
            _, profile, player, v, regret = _random_situation(rng)
            r = _log_uniform_rate(rng)
            rule = UpdateRule.generalized(r, alpha)
            s = profile[player]
            increment = expected_payoff(psi_update_general(s, regret, rule), v) - expected_payoff(s, v)
            transformed = alpha(regret)
            expected = float(np.dot(transformed, regret)) / (1.0 / r + float(np.sum(transformed)))
            assert increment == pytest.approx(expected, abs=1e-9)

    def test_fixed_point_iff_zero_regret(self, rng, mp, rps):
        for game in (mp, rps):
            profile = StrategyProfile.uniform(game.shape)
            report = regret_report(game, profile)
            for player in range(2):
                out = psi_update(profile[player], report[player].regret_vector, 0.3)
                assert_allclose(out.weights, profile[player].weights, atol=1e-12)

        for _ in range(200):
            _, profile, player, _, regret = _random_situation(rng)
            s = profile[player]
            out = psi_update(s, regret, 0.5)
            moved = float(np.max(np.abs(out.weights - s.weights)))
            if regret.sum() == 0.0:
                assert moved <= 1e-12
            else:
                assert moved > 1e-12


class TestGeneralizedRule:
    def test_identity_alpha_matches_standard(self, rng):
        rule = UpdateRule.generalized(0.2)
        for _ in range(100):
            s = MixedStrategy(rng.dirichlet(np.ones(3)))
            regret = rng.uniform(0.0, 1.0, size=3)
            regret[rng.integers(3)] = 0.0
            assert psi_update_general(s, regret, rule).allclose(psi_update(s, regret, 0.2), atol=1e-15)

    def test_square_alpha(self):
        rule = UpdateRule.generalized(0.5, AlphaTransform("power", 2.0))
        out = psi_update_general(MixedStrategy([1, 0, 0]), np.array([0.0, 2.0, 0.0]), rule)
        assert_allclose(out.weights, [1 / 3, 2 / 3, 0.0], atol=1e-15)

    @pytest.mark.parametrize(
        "alpha",
        [AlphaTransform(), AlphaTransform("power", 0.5), AlphaTransform("power", 3.0), AlphaTransform("deadzone", 0.2)],
    )
    def test_zero_regret_is_fixed_point_for_every_alpha(self, alpha):
        s = MixedStrategy([0.2, 0.5, 0.3])
        out = psi_update_general(s, np.zeros(3), UpdateRule.generalized(0.7, alpha))
        assert out.allclose(s)

    def test_deadzone_ignores_small_regret(self):
        s = MixedStrategy([0.2, 0.5, 0.3])
        rule = UpdateRule.generalized(1.0, AlphaTransform("deadzone", 0.5))
        assert psi_update_general(s, np.array([0.0, 0.4, 0.1]), rule).allclose(s)

    def test_damped_rate_shrinks_with_regret(self, mp3):
        profile = StrategyProfile((MixedStrategy([1, 0, 0]), MixedStrategy([1, 0, 0])))
        report = regret_report(mp3, profile)
        rate = RateFunction("damped", 0.6)
        assert rate.evaluate(report) == pytest.approx(0.6 / 3.0)
        with pytest.raises(RuleError):
            rate.evaluate(None)

    @pytest.mark.parametrize("kind, parameter", [("power", 0.0), ("deadzone", -1.0), ("cube", 1.0)])
    def test_invalid_alpha(self, kind, parameter):
        with pytest.raises(RuleError):
            AlphaTransform(kind, parameter)


class TestConvexUpdate:
    def test_midpoint(self):
        out = convex_update(MixedStrategy([1, 0]), MixedStrategy([0, 1]), 1.0)
        assert_allclose(out.weights, [0.5, 0.5])

    def test_target_is_fixed_point(self):
        s = MixedStrategy([0.2, 0.8])
        assert convex_update(s, s, 3.0).allclose(s, atol=1e-15)

    def test_rate_three(self):
        s, t = MixedStrategy([1, 0]), MixedStrategy([0, 1])
        out = convex_update(s, t, 3.0)
        assert_allclose(out.weights, [0.25, 0.75])
        assert np.linalg.norm(out.weights - t.weights) == pytest.approx(np.linalg.norm(s.weights - t.weights) / 4)

    def test_contraction_factor(self, rng):
        for _ in range(500):
            g = int(rng.integers(2, 6))
            s = MixedStrategy(rng.dirichlet(np.ones(g)))
            t = MixedStrategy(rng.dirichlet(np.ones(g)))
            r = _log_uniform_rate(rng)
            out = convex_update(s, t, r)
            expected = np.linalg.norm(s.weights - t.weights) / (1.0 + r)
            assert np.linalg.norm(out.weights - t.weights) == pytest.approx(expected, abs=1e-12)

    def test_softmax_target(self):
        target = TargetMap("softmax", temperature=1.0).target(np.array([0.0, np.log(3.0)]))
        assert_allclose(target.weights, [0.25, 0.75])

    def test_constant_target_length_mismatch(self):
        with pytest.raises(ShapeError):
            TargetMap("constant", weights=(0.5, 0.5)).target(np.zeros(3))


class TestCosineAngle:
    def test_examples(self):
        u, v = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        assert cosine_angle(u, u) == pytest.approx(1.0)
        assert cosine_angle(u, v) == pytest.approx(0.0)
        assert cosine_angle(u + v, v) == pytest.approx(1 / np.sqrt(2))

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            cosine_angle(np.zeros(2), np.array([1.0, 0.0]))


class TestRuleSpec:
    def test_standard(self):
        rule = parse_rule_spec("standard:r=0.05")
        assert rule.variant == STANDARD
        assert rule.rate.value == 0.05

    def test_generalized_with_alpha(self):
        rule = parse_rule_spec("general:r=0.05,alpha=power:2")
        assert rule.variant == GENERALIZED
        assert rule.alpha == AlphaTransform("power", 2.0)

    def test_damped_rate(self):
        rule = parse_rule_spec("general:r=damped:0.5")
        assert rule.rate == RateFunction("damped", 0.5)

    def test_convex_softmax(self):
        rule = parse_rule_spec("convex:r=0.5,target=softmax:1.0")
        assert rule.variant == CONVEX_TARGET
        assert rule.target == TargetMap("softmax", temperature=1.0)

    def test_constant_target(self):
        rule = parse_rule_spec("convex:r=1,target=constant:0.25/0.75")
        assert rule.target.weights == (0.25, 0.75)

    def test_describe_parses_back(self):
        for text in ["standard:r=0.05", "general:r=damped:0.5,alpha=deadzone:0.1", "convex:r=0.5,target=softmax:2"]:
            rule = parse_rule_spec(text)
            assert parse_rule_spec(rule.describe()) == rule

    @pytest.mark.parametrize(
        "text",
        [
            "fancy:r=0.1",
            "standard",
            "standard:r=abc",
            "standard:r=0.1,alpha=power:2",
            "general:r=0.1,speed=3",
            "general:r=0.1,alpha=power",
            "convex:r=0.1",
            "standard:r=-1",
        ],
    )
    def test_invalid_specs(self, text):
        with pytest.raises(RuleError):
            parse_rule_spec(text)
