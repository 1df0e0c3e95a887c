"""Data models for the geometric regret matching toolkit."""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ShapeError, SimplexError

if TYPE_CHECKING:
    from .regret_matching import UpdateRule


# Weights below this are treated as off-simplex rather than float noise.
SIMPLEX_NEGATIVE_TOLERANCE = 1e-9
SIMPLEX_SUM_TOLERANCE = 1e-6


def frozen_array(values: Any) -> np.ndarray:
    """Copy values into a read-only float array."""
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    """A point of a player's probability simplex.

    Weights are validated and renormalized on construction: any weight below
    ``-1e-9`` or a sum further than ``1e-6`` from one is rejected, small
    negative noise is clipped to zero.
    """

    weights: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        if weights.ndim != 1 or weights.size == 0:
            raise ShapeError(f"Mixed strategy must be a non-empty vector, got shape {weights.shape}")
        if not np.all(np.isfinite(weights)):
            raise SimplexError("Mixed strategy weights must be finite")
        if weights.min() < -SIMPLEX_NEGATIVE_TOLERANCE:
            raise SimplexError(f"Negative weight {weights.min():.3e} in mixed strategy")
        total = weights.sum()
        if abs(total - 1.0) > SIMPLEX_SUM_TOLERANCE:
            raise SimplexError(f"Mixed strategy weights sum to {total!r}, expected 1")
        weights = np.maximum(weights, 0.0)
        object.__setattr__(self, "weights", frozen_array(weights / weights.sum()))

    @classmethod
    def uniform(cls, size: int) -> "MixedStrategy":
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def vertex(cls, size: int, index: int) -> "MixedStrategy":
        """Pure strategy ``index`` as a simplex vertex."""
        weights = np.zeros(size)
        weights[index] = 1.0
        return cls(weights)

    @property
    def size(self) -> int:
        return int(self.weights.shape[0])

    def __len__(self) -> int:
        return self.size

    def allclose(self, other: "MixedStrategy", atol: float = 1e-12) -> bool:
        return self.size == other.size and bool(np.allclose(self.weights, other.weights, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        return f"MixedStrategy({self.weights.tolist()})"


@dataclass(frozen=True, eq=False)
class StrategyProfile:
    """An n-tuple of mixed strategies, one per player."""

    strategies: Tuple[MixedStrategy, ...]

    def __post_init__(self):
        strategies = tuple(
            s if isinstance(s, MixedStrategy) else MixedStrategy(s) for s in self.strategies
        )
        if not strategies:
            raise ShapeError("Strategy profile needs at least one player")
        object.__setattr__(self, "strategies", strategies)

    @classmethod
    def uniform(cls, shape: Sequence[int]) -> "StrategyProfile":
        return cls(tuple(MixedStrategy.uniform(g) for g in shape))

    @property
    def num_players(self) -> int:
        return len(self.strategies)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(s.size for s in self.strategies)

    def __len__(self) -> int:
        return self.num_players

    def __getitem__(self, player: int) -> MixedStrategy:
        return self.strategies[player]

    def __iter__(self):
        return iter(self.strategies)

    def replace(self, player: int, strategy: MixedStrategy) -> "StrategyProfile":
        """Unilaterally substitute player ``player``'s strategy."""
        strategies = list(self.strategies)
        strategies[player] = strategy
        return StrategyProfile(tuple(strategies))

    def flatten(self) -> np.ndarray:
        return np.concatenate([s.weights for s in self.strategies])

    def allclose(self, other: "StrategyProfile", atol: float = 1e-12) -> bool:
        return self.shape == other.shape and all(
            a.allclose(b, atol=atol) for a, b in zip(self.strategies, other.strategies)
        )

    def as_lists(self) -> List[List[float]]:
        return [s.weights.tolist() for s in self.strategies]

    def __repr__(self) -> str:
        return f"StrategyProfile({self.as_lists()})"


@dataclass(frozen=True, eq=False)
class Game:
    """A finite n-person game in normal form.

    ``payoffs`` has shape ``(n, g1, ..., gn)``: ``payoffs[i]`` is player i's
    tensor indexed by the joint pure profile, laid out row-major.
    """

    payoffs: np.ndarray
    name: Optional[str] = None

    def __post_init__(self):
        payoffs = np.array(self.payoffs, dtype=float)
        if payoffs.ndim < 2:
            raise ShapeError("Payoffs must have shape (n, g1, ..., gn)")
        num_players = payoffs.shape[0]
        shape = payoffs.shape[1:]
        if num_players < 1 or len(shape) != num_players:
            raise ShapeError(
                f"Expected one payoff tensor of rank n per player, got {num_players} tensors of rank {len(shape)}"
            )
        if any(g < 2 for g in shape):
            raise ShapeError(f"Every player needs at least 2 pure strategies, got shape {list(shape)}")
        if not np.all(np.isfinite(payoffs)):
            raise ShapeError("Payoff entries must be finite")
        object.__setattr__(self, "payoffs", frozen_array(payoffs))

    @classmethod
    def from_tensors(cls, tensors: Sequence[Any], name: Optional[str] = None) -> "Game":
        arrays = [np.asarray(t, dtype=float) for t in tensors]
        shapes = {a.shape for a in arrays}
        if len(shapes) != 1:
            raise ShapeError(f"Payoff tensors disagree on shape: {sorted(shapes)}")
        return cls(np.stack(arrays), name=name)

    @classmethod
    def from_bimatrix(cls, row_payoffs: Any, column_payoffs: Any, name: Optional[str] = None) -> "Game":
        """Two-player game from the row player's A and the column player's B."""
        a = np.asarray(row_payoffs, dtype=float)
        b = np.asarray(column_payoffs, dtype=float)
        if a.ndim != 2 or a.shape != b.shape:
            raise ShapeError(f"Bimatrix needs two matrices of equal shape, got {a.shape} and {b.shape}")
        return cls(np.stack([a, b]), name=name)

    @property
    def num_players(self) -> int:
        return int(self.payoffs.shape[0])

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(int(g) for g in self.payoffs.shape[1:])

    def check_player(self, player: int) -> None:
        if not 0 <= player < self.num_players:
            raise ShapeError(f"Player index {player} out of range for {self.num_players}-player game")

    def check_profile(self, profile: StrategyProfile) -> None:
        if profile.shape != self.shape:
            raise ShapeError(f"Profile shape {list(profile.shape)} does not match game shape {list(self.shape)}")


@dataclass(frozen=True, eq=False)
class PlayerRegret:
    """Regret quantities of one player at one profile."""

    vertex_payoffs: np.ndarray
    payoff: float
    regret_vector: np.ndarray
    regret_sum: float


@dataclass(frozen=True, eq=False)
class RegretReport:
    players: Tuple[PlayerRegret, ...]

    @property
    def regret_sums(self) -> np.ndarray:
        return np.array([p.regret_sum for p in self.players])

    @property
    def overall(self) -> float:
        """Sum of all players' regret sums."""
        return float(np.sum(self.regret_sums))

    @property
    def maximum(self) -> float:
        return float(np.max(self.regret_sums))

    def is_epsilon_equilibrium(self, epsilon: float) -> bool:
        return self.maximum <= epsilon

    def __getitem__(self, player: int) -> PlayerRegret:
        return self.players[player]


@dataclass(frozen=True)
class RunConfig:
    """Inputs of one fixed-point iteration run."""

    rules: Tuple["UpdateRule", ...]
    iterations: int
    epsilon: Optional[float] = None
    record_every: int = 1

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if not self.rules:
            raise ValueError("RunConfig needs at least one update rule")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0 when given, got {self.epsilon}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be >= 1, got {self.record_every}")


@dataclass(frozen=True, eq=False)
class IterationTrace:
    """Recorded output of a run: profiles, regret sums and the best-so-far profile."""

    profiles: List[StrategyProfile]
    steps: List[int]
    regret_sums: np.ndarray
    best_profile: StrategyProfile
    best_regret_sums: np.ndarray
    best_step: int
    stopped_early: bool
    steps_run: int

    @property
    def best_overall(self) -> float:
        return float(np.sum(self.best_regret_sums))

    @property
    def overall_regret_sums(self) -> np.ndarray:
        return self.regret_sums.sum(axis=1)

    @property
    def final_profile(self) -> StrategyProfile:
        return self.profiles[-1]

    def __len__(self) -> int:
        return len(self.profiles)


@dataclass(frozen=True, eq=False)
class MetricTrace:
    """Successive-step distances and their ratios along a profile sequence."""

    d_dot: np.ndarray
    q_dot: np.ndarray
    metric_kind: str


@dataclass(frozen=True, eq=False)
class EquilibriumSet:
    equilibria: List[StrategyProfile]
    method: str
    tolerance: float
    degenerate: bool = False

    def __len__(self) -> int:
        return len(self.equilibria)

    def __iter__(self):
        return iter(self.equilibria)


@dataclass(frozen=True, eq=False)
class SweepRow:
    params: Dict[str, float]
    best_regret_sums: np.ndarray
    best_overall: float
    best_step: int


@dataclass(frozen=True, eq=False)
class SweepResult:
    parameter_names: Tuple[str, ...]
    rows: List[SweepRow]


@dataclass(frozen=True, eq=False)
class BasinEntry:
    """Outcome of one start of a basin sample."""

    seed: int
    initial: StrategyProfile
    converged: bool
    best_overall: float
    eq_index: Optional[int] = None
    eq_distance: Optional[float] = None
    initial_eq_distance: Optional[float] = None


@dataclass(frozen=True, eq=False)
class BasinReport:
    entries: List[BasinEntry]
    convergence_epsilon: float
    equilibria: Optional[EquilibriumSet] = None

    @property
    def converged_count(self) -> int:
        return sum(1 for e in self.entries if e.converged)


@dataclass(frozen=True, eq=False)
class PlanarPath:
    """Low-dimensional coordinates of a strategy trajectory, ready for plotting."""

    points: np.ndarray
    captured_variance: Optional[float] = None
    degenerate: bool = False

    def __len__(self) -> int:
        return int(self.points.shape[0])


@dataclass
class CommandSpec:
    """A parsed command line: one subcommand plus its flags."""

    subcommand: str
    game: Optional[str] = None
    rate: Optional[List[float]] = None
    rules: Optional[List[str]] = None
    iterations: Optional[int] = None
    epsilon: Optional[float] = None
    init: str = "uniform"
    seed: Optional[int] = None
    record_every: Optional[int] = None
    out: Optional[str] = None
    fmt: str = "csv"
    metrics_out: Optional[str] = None
    metric: str = "sum"
    rates: List[float] = field(default_factory=list)
    scales: List[float] = field(default_factory=list)
    starts: int = 10
    convergence_epsilon: Optional[float] = None
    near_starts: int = 0
    near_radius: float = 1e-3
    input_path: Optional[str] = None
    player: int = 1
    mode: str = "barycentric"
    dim: int = 3
    tolerance: Optional[float] = None


def as_profile(strategies: Iterable[Any]) -> StrategyProfile:
    """Build a profile from nested weight lists."""
    return StrategyProfile(tuple(MixedStrategy(s) for s in strategies))
