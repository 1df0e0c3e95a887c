"""Command-line parsing into CommandSpec objects."""

import argparse
from typing import List, Optional, Sequence

from .models import CommandSpec


SUBCOMMANDS = ("run", "sweep-rate", "sweep-scale", "basin", "project", "enumerate", "games")


def _float_list(text: str) -> List[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _game_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--game", required=True, help="game file path, builtin:NAME or random:KxM[xL...]")
    parser.add_argument("--seed", type=int, help="seed for random games and random starts")


def _run_flags(parser: argparse.ArgumentParser, rule: bool = True) -> None:
    if rule:
        parser.add_argument("--rate", type=_float_list, help="adjustment rate, one value or one per player")
        parser.add_argument(
            "--rule", action="append", help="rule spec, e.g. general:r=0.05,alpha=power:2 (repeat per player)"
        )
    parser.add_argument("--iters", type=_positive_int, help="iterations T")
    parser.add_argument("--epsilon", type=float, help="stop early once the overall regret sum is <= epsilon")
    parser.add_argument("--init", default="uniform", help="uniform, random or a profile file")


def _output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="output file")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geo-regret",
        description="Approximate Nash equilibria by geometric regret matching and analyse the trajectories.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    run = sub.add_parser("run", help="iterate the simultaneous update and export the trace")
    _game_flags(run)
    _run_flags(run)
    run.add_argument("--record-every", type=_positive_int, help="record every k-th step")
    run.add_argument("--metrics-out", help="also write the d_dot/q_dot metrics CSV")
    run.add_argument("--metric", choices=("sum", "max"), default="sum")
    _output_flags(run)

    sweep_rate = sub.add_parser("sweep-rate", help="one run per shared adjustment rate")
    _game_flags(sweep_rate)
    _run_flags(sweep_rate, rule=False)
    sweep_rate.add_argument("--rates", type=_float_list, required=True, help="comma-separated rates")
    _output_flags(sweep_rate)

    sweep_scale = sub.add_parser("sweep-scale", help="one run per payoff scale factor, scaled back")
    _game_flags(sweep_scale)
    _run_flags(sweep_scale, rule=False)
    sweep_scale.add_argument("--scales", type=_float_list, required=True, help="comma-separated scale factors")
    sweep_scale.add_argument("--rate", type=_float_list, help="shared adjustment rate")
    _output_flags(sweep_scale)

    basin = sub.add_parser("basin", help="classify runs from many random starts")
    _game_flags(basin)
    _run_flags(basin)
    basin.add_argument("--starts", type=_positive_int, default=10)
    basin.add_argument("--conv-epsilon", dest="convergence_epsilon", type=float)
    basin.add_argument("--near-starts", type=int, default=0, help="starts placed near the --init profile")
    basin.add_argument("--near-radius", type=float, default=1e-3)
    _output_flags(basin)

    project = sub.add_parser("project", help="project one player's trajectory for plotting")
    project.add_argument("--in", dest="input_path", required=True, help="trace CSV written by run")
    project.add_argument("--player", type=_positive_int, default=1, help="1-based player index")
    project.add_argument("--mode", choices=("barycentric", "pca"), default="barycentric")
    project.add_argument("--dim", type=int, choices=(2, 3), default=3, help="PCA output dimension")
    project.add_argument("--out", required=True)

    enumerate_ = sub.add_parser("enumerate", help="print all equilibria of a small two-player game")
    _game_flags(enumerate_)
    enumerate_.add_argument("--tolerance", type=float)

    sub.add_parser("games", help="list builtin games and verify their advertised equilibria")
    return parser


def parse_command(argv: Optional[Sequence[str]] = None) -> CommandSpec:
    """Parse a command line; argparse exits with status 2 on usage errors."""
    args = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(args).items() if v is not None}
    if "iters" in values:
        values["iterations"] = values.pop("iters")
    if "rule" in values:
        values["rules"] = values.pop("rule")
    return CommandSpec(**values)
