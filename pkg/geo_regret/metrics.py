"""Metric-space diagnostics on sequences of strategy profiles."""

import logging
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from .exceptions import ShapeError
from .models import MetricTrace, StrategyProfile, frozen_array


logger = logging.getLogger(__name__)

MIN_PERIODICITY_LENGTH = 16
PERIODICITY_THRESHOLD = 0.5


def _player_distances(x: StrategyProfile, y: StrategyProfile) -> np.ndarray:
    if x.shape != y.shape:
        raise ShapeError(f"Profiles of shapes {list(x.shape)} and {list(y.shape)} are not comparable")
    return np.array([np.linalg.norm(a.weights - b.weights) for a, b in zip(x, y)])


def profile_distance_sum(x: StrategyProfile, y: StrategyProfile) -> float:
    """Sum over players of the L2 distance between their strategies."""
    return float(np.sum(_player_distances(x, y)))


def profile_distance_max(x: StrategyProfile, y: StrategyProfile) -> float:
    """Largest per-player L2 distance between two profiles."""
    return float(np.max(_player_distances(x, y)))


METRICS: Dict[str, Callable[[StrategyProfile, StrategyProfile], float]] = {
    "sum": profile_distance_sum,
    "max": profile_distance_max,
}


def metric_trace(profiles: Sequence[StrategyProfile], kind: str = "sum") -> MetricTrace:
    """Successive distances d_dot and their ratios q_dot along a profile sequence.

    ``d_dot[t]`` is the distance between profiles t and t+1 and
    ``q_dot[t] = d_dot[t+1] / d_dot[t]``, NaN wherever ``d_dot[t]`` is zero.

    Args:
        profiles: At least three profiles.
        kind: ``sum`` or ``max`` metric.

    Returns:
        MetricTrace with L-1 distances and L-2 ratios.
    """
    if kind not in METRICS:
        raise ValueError(f"Unknown metric '{kind}', expected one of {sorted(METRICS)}")
    if len(profiles) < 3:
        raise ValueError(f"metric_trace needs at least 3 profiles, got {len(profiles)}")
    distance = METRICS[kind]
    d_dot = np.array([distance(profiles[t], profiles[t + 1]) for t in range(len(profiles) - 1)])
    q_dot = np.full(len(d_dot) - 1, np.nan)
    defined = d_dot[:-1] > 0
    q_dot[defined] = d_dot[1:][defined] / d_dot[:-1][defined]
    return MetricTrace(d_dot=frozen_array(d_dot), q_dot=frozen_array(q_dot), metric_kind=kind)


def autocorrelation(series: np.ndarray) -> np.ndarray:
    """Biased sample autocorrelation of a mean-removed, linearly detrended series."""
    values = np.asarray(series, dtype=float)
    t = np.arange(values.size)
    slope, intercept = np.polyfit(t, values, 1)
    residual = values - (slope * t + intercept)
    energy = float(np.dot(residual, residual))
    scale = float(np.dot(values - values.mean(), values - values.mean()))
    if energy <= 1e-18 * max(scale, 1.0):
        return np.zeros(values.size)
    full = np.correlate(residual, residual, mode="full")[values.size - 1:]
    return full / energy


def periodicity_estimate(series: Sequence[float], threshold: float = PERIODICITY_THRESHOLD) -> Optional[int]:
    """Lag of the highest autocorrelation peak, if it exceeds ``threshold``.

    A peak is a lag in [1, n/2] whose autocorrelation is strictly above its
    left neighbour and not below its right neighbour.

    Returns:
        The period in steps, or None when no peak clears the threshold.

    Raises:
        ValueError: For fewer than 16 samples or any non-finite sample.
    """
    values = np.asarray(series, dtype=float)
    if values.ndim != 1 or values.size < MIN_PERIODICITY_LENGTH:
        raise ValueError(f"periodicity_estimate needs at least {MIN_PERIODICITY_LENGTH} samples, got {values.size}")
    if not np.all(np.isfinite(values)):
        # Dropping gaps would shift every later lag.
        raise ValueError(
            f"periodicity_estimate needs finite samples, got {int(np.sum(~np.isfinite(values)))} NaN or infinite"
        )
    acf = autocorrelation(values)
    best_lag: Optional[int] = None
    best_value = threshold
    for lag in range(1, values.size // 2 + 1):
        if lag + 1 >= acf.size:
            break
        if acf[lag] > acf[lag - 1] and acf[lag] >= acf[lag + 1] and acf[lag] > best_value:
            best_lag, best_value = lag, float(acf[lag])
    return best_lag
