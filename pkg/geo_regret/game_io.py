"""Game, profile and result file formats.

Game files are JSON objects in one of two forms::

    {"shape": [g1, ..., gn], "payoffs": [[...player 1, row-major...], ...]}
    {"A": [[...]], "B": [[...]]}

Result files are CSV with a header row; floats are written with ``repr``
so they read back bit-exact, undefined values are empty cells.
"""

import csv
import io
import json
import logging
import math
import os
import re
import tempfile
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .builtin_games import get_builtin, random_game
from .exceptions import GameFileError, ShapeError, SimplexError
from .game_core import regret_report
from .metrics import metric_trace
from .models import (
    BasinReport,
    EquilibriumSet,
    Game,
    IterationTrace,
    PlanarPath,
    StrategyProfile,
    SweepResult,
    as_profile,
)


logger = logging.getLogger(__name__)

_WEIGHT_COLUMN = re.compile(r"^s(\d+)_(\d+)$")


def atomic_write_text(path: str, text: str) -> None:
    """Write a file in one step: temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    handle, temp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(handle, "w", newline="") as f:
            f.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    return "" if math.isnan(value) else repr(value)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def _read_json(path: str, what: str) -> Any:
    try:
        with open(path, "r") as f:
            return json.load(f)
    except OSError as e:
        raise GameFileError(f"Cannot read {what} file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise GameFileError(f"{what.capitalize()} file {path} is not valid JSON: {e}") from e


def _numeric_array(value: Any, field_name: str, ndim: int) -> np.ndarray:
    try:
        array = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise GameFileError(f"Field '{field_name}' must contain only numbers") from None
    if array.ndim != ndim:
        raise GameFileError(f"Field '{field_name}' must be a {ndim}-dimensional array, got {array.ndim} dimensions")
    if not np.all(np.isfinite(array)):
        raise GameFileError(f"Field '{field_name}' contains non-finite entries")
    return array


def game_from_dict(data: Any, name: Optional[str] = None) -> Game:
    """Build a game from the parsed JSON object of a game file."""
    if not isinstance(data, dict):
        raise GameFileError("Game file must contain a JSON object")

    if "A" in data or "B" in data:
        for key in ("A", "B"):
            if key not in data:
                raise GameFileError(f"Bimatrix game file is missing field '{key}'")
        a = _numeric_array(data["A"], "A", 2)
        b = _numeric_array(data["B"], "B", 2)
        if a.shape != b.shape:
            raise GameFileError(f"Fields 'A' and 'B' have different shapes {list(a.shape)} and {list(b.shape)}")
        try:
            return Game.from_bimatrix(a, b, name=name)
        except ShapeError as e:
            raise GameFileError(f"Field 'A': {e}") from e

    for key in ("shape", "payoffs"):
        if key not in data:
            raise GameFileError(f"Game file is missing field '{key}'")
    shape = data["shape"]
    if not isinstance(shape, list) or not shape or not all(isinstance(g, int) and not isinstance(g, bool) for g in shape):
        raise GameFileError("Field 'shape' must be a non-empty list of integers")
    if any(g < 2 for g in shape):
        raise GameFileError(f"Field 'shape' needs at least 2 strategies per player, got {shape}")
    payoffs = data["payoffs"]
    if not isinstance(payoffs, list) or len(payoffs) != len(shape):
        raise GameFileError(f"Field 'payoffs' must hold one flattened tensor per player ({len(shape)})")
    expected = int(np.prod(shape))
    tensors = []
    for i, flat in enumerate(payoffs):
        field_name = f"payoffs[{i}]"
        values = _numeric_array(flat, field_name, 1)
        if values.size != expected:
            raise GameFileError(f"Field '{field_name}' has {values.size} entries, shape {shape} needs {expected}")
        tensors.append(values.reshape(shape))
    return Game.from_tensors(tensors, name=name)


def parse_game_file(path: str) -> Game:
    """Read a game file in tensor or bimatrix form."""
    game = game_from_dict(_read_json(path, "game"), name=os.path.basename(path))
    logger.debug(f"Loaded {game.num_players}-player game {list(game.shape)} from {path}")
    return game


def game_to_dict(game: Game, bimatrix: bool = False) -> Dict[str, Any]:
    if bimatrix:
        if game.num_players != 2:
            raise ShapeError("Only two-player games have a bimatrix form")
        return {"A": game.payoffs[0].tolist(), "B": game.payoffs[1].tolist()}
    return {"shape": list(game.shape), "payoffs": [game.payoffs[i].ravel().tolist() for i in range(game.num_players)]}


def write_game_file(game: Game, path: str, bimatrix: bool = False) -> None:
    atomic_write_text(path, json.dumps(game_to_dict(game, bimatrix)) + "\n")


def load_game(reference: str, seed: Union[int, np.random.SeedSequence] = 0) -> Game:
    """Resolve ``builtin:NAME``, ``random:KxM[xL...]`` or a game file path.

    ``seed`` only feeds the payoffs of random games.
    """
    kind, sep, value = reference.partition(":")
    if sep and kind == "builtin":
        return get_builtin(value).build()
    if sep and kind == "random":
        try:
            shape = [int(g) for g in value.lower().split("x")]
        except ValueError:
            raise GameFileError(f"Random game reference '{reference}' must look like random:3x3") from None
        if any(g < 2 for g in shape):
            raise GameFileError(f"Random game reference '{reference}' needs at least 2 strategies per player")
        return random_game(shape, np.random.default_rng(seed))
    return parse_game_file(reference)


def parse_profile_file(path: str, game: Game) -> StrategyProfile:
    """Read ``{"strategies": [[...], ...]}`` and check it fits ``game``."""
    data = _read_json(path, "profile")
    if not isinstance(data, dict) or not isinstance(data.get("strategies"), list):
        raise GameFileError("Profile file must be an object with a 'strategies' list")
    try:
        profile = as_profile(
            _numeric_array(s, f"strategies[{i}]", 1) for i, s in enumerate(data["strategies"])
        )
    except SimplexError as e:
        raise GameFileError(f"Field 'strategies': {e}") from e
    if profile.shape != game.shape:
        raise GameFileError(f"Field 'strategies' has shape {list(profile.shape)}, game needs {list(game.shape)}")
    return profile


def trace_header(shape: Sequence[int]) -> List[str]:
    header = ["t"] + [f"rs_{i + 1}" for i in range(len(shape))]
    for i, g in enumerate(shape):
        header.extend(f"s{i + 1}_{j + 1}" for j in range(g))
    return header


def write_trace_csv(trace: IterationTrace, path: str) -> None:
    shape = trace.profiles[0].shape
    rows = [
        [t] + list(sums) + list(profile.flatten())
        for t, sums, profile in zip(trace.steps, trace.regret_sums, trace.profiles)
    ]
    atomic_write_text(path, _csv_text(trace_header(shape), rows))


def read_trace_csv(path: str) -> Tuple[List[int], List[StrategyProfile]]:
    """Read back the steps and profiles of a trace CSV."""
    try:
        with open(path, "r", newline="") as f:
            table = list(csv.reader(f, strict=True))
    except OSError as e:
        raise GameFileError(f"Cannot read trace file {path}: {e}") from e
    except csv.Error as e:
        raise GameFileError(f"Trace file {path} is not valid CSV: {e}") from e
    if not table or not table[0] or table[0][0] != "t":
        raise GameFileError(f"Trace file {path} must start with a header whose first column is 't'")

    header = table[0]
    columns: Dict[int, List[Tuple[int, int]]] = {}
    for index, name in enumerate(header):
        match = _WEIGHT_COLUMN.match(name)
        if match:
            columns.setdefault(int(match.group(1)), []).append((int(match.group(2)), index))
    if not columns:
        raise GameFileError(f"Trace file {path} has no strategy weight columns (s1_1, ...)")

    steps: List[int] = []
    profiles: List[StrategyProfile] = []
    for line_number, row in enumerate(table[1:], start=2):
        if len(row) != len(header):
            raise GameFileError(f"Trace file {path} line {line_number}: {len(row)} cells, header has {len(header)}")
        try:
            steps.append(int(row[0]))
            profiles.append(
                as_profile(
                    [float(row[col]) for _, col in sorted(columns[p])] for p in sorted(columns)
                )
            )
        except (ValueError, SimplexError) as e:
            raise GameFileError(f"Trace file {path} line {line_number}: {e}") from e
    if not profiles:
        raise GameFileError(f"Trace file {path} has no data rows")
    return steps, profiles


def write_metrics_csv(trace: IterationTrace, path: str, kind: str = "sum") -> None:
    """Distances between consecutive recorded profiles and their ratios.

    Row t holds d_dot = d(S_{t-1}, S_t) and q_dot = d_dot(t) / d_dot(t-1);
    q_dot is empty on the first row and wherever undefined. A final record
    off the recording stride (last step or early stop) is left out, so every
    d_dot spans the same number of steps.
    """
    steps, profiles = list(trace.steps), list(trace.profiles)
    if len(steps) > 2 and steps[-1] - steps[-2] != steps[1] - steps[0]:
        logger.debug(f"Metrics leave out off-stride final step {steps[-1]}")
        steps, profiles = steps[:-1], profiles[:-1]
    metrics = metric_trace(profiles, kind)
    rows = []
    for k, d in enumerate(metrics.d_dot):
        q = metrics.q_dot[k - 1] if k >= 1 else None
        rows.append([steps[k + 1], d, q])
    atomic_write_text(path, _csv_text(["t", "d_dot", "q_dot"], rows))


def write_sweep_csv(result: SweepResult, path: str) -> None:
    num_players = len(result.rows[0].best_regret_sums)
    header = list(result.parameter_names) + [f"rs_{i + 1}" for i in range(num_players)] + ["rs_total", "best_step"]
    rows = [
        [row.params[name] for name in result.parameter_names]
        + list(row.best_regret_sums)
        + [row.best_overall, row.best_step]
        for row in result.rows
    ]
    atomic_write_text(path, _csv_text(header, rows))


def write_basin_csv(report: BasinReport, path: str) -> None:
    rows = [[e.seed, e.converged, e.best_overall, e.eq_index, e.eq_distance] for e in report.entries]
    atomic_write_text(path, _csv_text(["seed", "converged", "rs_total", "eq_index", "eq_distance"], rows))


def write_path_csv(path_data: PlanarPath, steps: Sequence[int], path: str) -> None:
    """Write projected coordinates; PCA paths get a sidecar ``.meta`` line."""
    dims = path_data.points.shape[1]
    header = ["t", "x", "y", "z"][: dims + 1]
    rows = [[t] + list(point) for t, point in zip(steps, path_data.points)]
    atomic_write_text(path, _csv_text(header, rows))
    if path_data.captured_variance is not None:
        atomic_write_text(path + ".meta", f"captured_variance_ratio={path_data.captured_variance!r}\n")


def trace_to_dict(trace: IterationTrace) -> Dict[str, Any]:
    return {
        "steps": list(trace.steps),
        "regret_sums": trace.regret_sums.tolist(),
        "profiles": [p.as_lists() for p in trace.profiles],
        "best_profile": trace.best_profile.as_lists(),
        "best_regret_sums": trace.best_regret_sums.tolist(),
        "best_step": trace.best_step,
        "stopped_early": trace.stopped_early,
        "steps_run": trace.steps_run,
    }


def write_json(data: Any, path: str) -> None:
    atomic_write_text(path, json.dumps(data, indent=2) + "\n")


def sweep_to_dict(result: SweepResult) -> Dict[str, Any]:
    return {
        "parameters": list(result.parameter_names),
        "rows": [
            {
                "params": row.params,
                "best_regret_sums": row.best_regret_sums.tolist(),
                "best_overall": row.best_overall,
                "best_step": row.best_step,
            }
            for row in result.rows
        ],
    }


def basin_to_dict(report: BasinReport) -> Dict[str, Any]:
    return {
        "convergence_epsilon": report.convergence_epsilon,
        "converged": report.converged_count,
        "starts": [
            {
                "seed": e.seed,
                "initial": e.initial.as_lists(),
                "converged": e.converged,
                "rs_total": e.best_overall,
                "eq_index": e.eq_index,
                "eq_distance": e.eq_distance,
                "initial_eq_distance": e.initial_eq_distance,
            }
            for e in report.entries
        ],
    }


def equilibria_to_dict(game: Game, equilibria: EquilibriumSet) -> Dict[str, Any]:
    return {
        "game": game.name,
        "method": equilibria.method,
        "tolerance": equilibria.tolerance,
        "degenerate": equilibria.degenerate,
        "equilibria": [
            {"strategies": eq.as_lists(), "regret_sums": regret_report(game, eq).regret_sums.tolist()}
            for eq in equilibria.equilibria
        ],
    }
