"""Command orchestration: turns a CommandSpec into runs and output files."""

import json
import logging
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import game_io
from .builtin_games import BUILTIN_GAMES, verify_builtin
from .config import Config
from .equilibrium_oracle import support_enumeration
from .exceptions import (
    GameFileError,
    GameTooLargeError,
    NumericalError,
    RuleError,
    ShapeError,
    SimplexError,
    UsageError,
)
from .experiments import basin_sample, sweep_rates, sweep_scales
from .iteration_engine import random_profile, run
from .models import CommandSpec, Game, RunConfig, StrategyProfile
from .projection import project_strategies
from .regret_matching import UpdateRule, parse_rule_spec


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4


class Pipeline:
    """Executes CLI commands with defaults taken from the configuration."""

    def __init__(self, config: Config):
        """Initialize the pipeline with configuration.

        Args:
            config: Configuration object.
        """
        self.config = config
        self._handlers: Dict[str, Callable[[CommandSpec], None]] = {
            "run": self.run_game,
            "sweep-rate": self.sweep_rate,
            "sweep-scale": self.sweep_scale,
            "basin": self.basin,
            "project": self.project,
            "enumerate": self.enumerate_equilibria,
            "games": self.list_games,
        }

    def execute(self, spec: CommandSpec) -> int:
        """Run one command and map failures to exit codes.

        Returns:
            0 on success, 2 for usage errors, 3 for input-file errors, 4 for
            numerical failures.
        """
        handler = self._handlers.get(spec.subcommand)
        if handler is None:
            logger.error(f"❌ Unknown subcommand '{spec.subcommand}'")
            return EXIT_USAGE
        try:
            handler(spec)
            return EXIT_OK
        except (UsageError, GameTooLargeError) as e:
            logger.error(f"❌ Usage error: {e}")
            return EXIT_USAGE
        except GameFileError as e:
            logger.error(f"❌ Input file error: {e}")
            return EXIT_INPUT
        except OSError as e:
            logger.error(f"❌ I/O error: {e}")
            return EXIT_INPUT
        except (NumericalError, ShapeError, SimplexError, RuleError) as e:
            logger.error(f"❌ Numerical error: {e}")
            return EXIT_NUMERIC
        except ValueError as e:
            logger.error(f"❌ Invalid value: {e}")
            return EXIT_USAGE

    # -- shared helpers -------------------------------------------------

    def _streams(self, spec: CommandSpec) -> Tuple[np.random.SeedSequence, np.random.SeedSequence]:
        """Independent seed streams: one for random game payoffs, one for starting profiles."""
        seed = spec.seed
        if seed is None:
            logger.info(f"No --seed given; using default seed {self.config.default_seed}")
            seed = self.config.default_seed
        game_stream, start_stream = np.random.SeedSequence(seed).spawn(2)
        return game_stream, start_stream

    def _game(self, spec: CommandSpec, stream: np.random.SeedSequence) -> Game:
        return game_io.load_game(spec.game, stream)

    def _initial(self, spec: CommandSpec, game: Game, stream: np.random.SeedSequence) -> StrategyProfile:
        if spec.init == "uniform":
            return StrategyProfile.uniform(game.shape)
        if spec.init == "random":
            return random_profile(game.shape, np.random.default_rng(stream))
        return game_io.parse_profile_file(spec.init, game)

    def _rules(self, spec: CommandSpec, game: Game) -> List[UpdateRule]:
        if spec.rate is not None and spec.rules:
            raise UsageError("--rate and --rule are mutually exclusive")
        try:
            if spec.rules:
                rules = [parse_rule_spec(text) for text in spec.rules]
            else:
                rates = spec.rate or [self.config.default_rate]
                rules = [UpdateRule.standard(r) for r in rates]
        except RuleError as e:
            raise UsageError(str(e)) from e
        if len(rules) not in (1, game.num_players):
            raise UsageError(f"Got {len(rules)} rates/rules for a {game.num_players}-player game")
        return rules

    def _run_config(self, spec: CommandSpec, rules: List[UpdateRule]) -> RunConfig:
        return RunConfig(
            rules=tuple(rules),
            iterations=spec.iterations or self.config.default_iterations,
            epsilon=spec.epsilon,
            record_every=spec.record_every or self.config.record_every,
        )

    def _shared_rate(self, spec: CommandSpec) -> float:
        if spec.rate is None:
            return self.config.default_rate
        if len(spec.rate) != 1:
            raise UsageError("sweep-scale takes a single shared --rate")
        return spec.rate[0]

    @staticmethod
    def _banner(title: str) -> None:
        logger.info("=" * 80)
        logger.info(title)
        logger.info("=" * 80)

    # -- subcommands ----------------------------------------------------

    def run_game(self, spec: CommandSpec) -> None:
        game_stream, start_stream = self._streams(spec)
        game = self._game(spec, game_stream)
        rules = self._rules(spec, game)
        config = self._run_config(spec, rules)
        initial = self._initial(spec, game, start_stream)

        self._banner(f"🚀 RUN {game.name or spec.game}: {config.iterations} iterations, shape {list(game.shape)}")
        trace = run(game, initial, config)

        if spec.out:
            if spec.fmt == "json":
                game_io.write_json(game_io.trace_to_dict(trace), spec.out)
            else:
                game_io.write_trace_csv(trace, spec.out)
            logger.info(f"Trace written to {spec.out}")
        if spec.metrics_out:
            game_io.write_metrics_csv(trace, spec.metrics_out, spec.metric)
            logger.info(f"Metrics written to {spec.metrics_out}")

        print(
            f"best_overall_regret_sum={trace.best_overall!r} best_step={trace.best_step} "
            f"steps={trace.steps_run} stopped_early={str(trace.stopped_early).lower()}"
        )

    def sweep_rate(self, spec: CommandSpec) -> None:
        game_stream, start_stream = self._streams(spec)
        game = self._game(spec, game_stream)
        initial = self._initial(spec, game, start_stream)
        iterations = spec.iterations or self.config.default_iterations

        self._banner(f"📊 RATE SWEEP {game.name or spec.game}: {len(spec.rates)} rates, {iterations} iterations")
        result = sweep_rates(game, initial, spec.rates, iterations, epsilon=spec.epsilon)
        self._write_sweep(result, spec)

    def sweep_scale(self, spec: CommandSpec) -> None:
        game_stream, start_stream = self._streams(spec)
        game = self._game(spec, game_stream)
        initial = self._initial(spec, game, start_stream)
        iterations = spec.iterations or self.config.default_iterations
        rate = self._shared_rate(spec)

        self._banner(f"📊 SCALE SWEEP {game.name or spec.game}: {len(spec.scales)} scales, rate {rate:g}")
        result = sweep_scales(game, initial, spec.scales, iterations, rate, epsilon=spec.epsilon)
        self._write_sweep(result, spec)

    def _write_sweep(self, result, spec: CommandSpec) -> None:
        if spec.out:
            if spec.fmt == "json":
                game_io.write_json(game_io.sweep_to_dict(result), spec.out)
            else:
                game_io.write_sweep_csv(result, spec.out)
            logger.info(f"Sweep written to {spec.out}")
        best = min(result.rows, key=lambda row: row.best_overall)
        print(f"rows={len(result.rows)} best_params={json.dumps(best.params)} best_overall_regret_sum={best.best_overall!r}")

    def basin(self, spec: CommandSpec) -> None:
        game_stream, start_stream = self._streams(spec)
        game = self._game(spec, game_stream)
        rules = self._rules(spec, game)
        config = self._run_config(spec, rules)
        epsilon = spec.convergence_epsilon or self.config.convergence_epsilon
        if spec.near_starts < 0 or spec.near_starts > spec.starts:
            raise UsageError(f"--near-starts must be between 0 and --starts ({spec.starts})")
        near = self._initial(spec, game, start_stream) if spec.near_starts else None

        self._banner(f"🎯 BASIN SAMPLE {game.name or spec.game}: {spec.starts} starts, epsilon {epsilon:g}")
        report = basin_sample(
            game,
            spec.starts,
            start_stream,
            config,
            convergence_epsilon=epsilon,
            near=near,
            near_starts=spec.near_starts,
            near_radius=spec.near_radius,
        )
        if spec.out:
            if spec.fmt == "json":
                game_io.write_json(game_io.basin_to_dict(report), spec.out)
            else:
                game_io.write_basin_csv(report, spec.out)
            logger.info(f"Basin report written to {spec.out}")
        print(f"starts={len(report.entries)} converged={report.converged_count} convergence_epsilon={epsilon!r}")

    def project(self, spec: CommandSpec) -> None:
        steps, profiles = game_io.read_trace_csv(spec.input_path)
        player = spec.player - 1
        if player >= profiles[0].num_players:
            raise UsageError(f"--player {spec.player} out of range for a {profiles[0].num_players}-player trace")
        strategies = [profile[player] for profile in profiles]
        if spec.mode == "barycentric" and strategies[0].size != 3:
            raise UsageError(
                f"barycentric mode requires 3 strategies, player {spec.player} has {strategies[0].size}; use --mode pca"
            )
        path = project_strategies(strategies, spec.mode, spec.dim)
        game_io.write_path_csv(path, steps, spec.out)
        summary = f"points={len(path)} mode={spec.mode}"
        if path.captured_variance is not None:
            summary += f" captured_variance_ratio={path.captured_variance!r}"
        print(summary)

    def enumerate_equilibria(self, spec: CommandSpec) -> None:
        if spec.game.startswith("random:"):
            game = self._game(spec, self._streams(spec)[0])
        else:
            game = game_io.load_game(spec.game)
        if game.num_players != 2:
            raise UsageError(f"enumerate needs a two-player game, {spec.game} has {game.num_players} players")
        tolerance = spec.tolerance or self.config.oracle_tolerance
        equilibria = support_enumeration(game, tolerance=tolerance)
        print(json.dumps(game_io.equilibria_to_dict(game, equilibria), indent=2))

    def list_games(self, spec: CommandSpec) -> None:
        for name, builtin in BUILTIN_GAMES.items():
            status = "verified" if verify_builtin(name, self.config.oracle_tolerance) else "MISMATCH"
            print(f"{name}\t{status}\t{builtin.description}")
