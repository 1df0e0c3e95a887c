"""Planar and low-dimensional coordinates of strategy trajectories for external plotting."""

import logging
from typing import Sequence

import numpy as np

from .exceptions import ShapeError
from .models import IterationTrace, MixedStrategy, PlanarPath, frozen_array


logger = logging.getLogger(__name__)

# Rows are the images of the three simplex vertices: an equilateral
# triangle of side sqrt(2) with one edge on the x axis.
BARYCENTRIC_VERTICES = np.array(
    [
        [0.0, 0.0],
        [np.sqrt(2.0) / 2.0, np.sqrt(6.0) / 2.0],
        [np.sqrt(2.0), 0.0],
    ]
)


def simplex3_to_plane(strategy: MixedStrategy) -> np.ndarray:
    """Map a 3-strategy mixed strategy to (x, y) in the plane."""
    if strategy.size != 3:
        raise ShapeError(f"Barycentric projection requires 3 strategies, got {strategy.size}")
    return strategy.weights @ BARYCENTRIC_VERTICES


def barycentric_path(strategies: Sequence[MixedStrategy]) -> PlanarPath:
    points = np.array([simplex3_to_plane(s) for s in strategies]).reshape(len(strategies), 2)
    return PlanarPath(points=frozen_array(points))


def pca_project(points: Sequence[Sequence[float]], out_dim: int = 3) -> PlanarPath:
    """Project points onto their top principal directions.

    Data is centered and projected on the leading eigenvectors of the sample
    covariance, ordered by descending eigenvalue (ties by index). Each
    direction's sign makes its largest-magnitude loading positive.

    Args:
        points: At least two points of equal dimension >= out_dim.
        out_dim: 2 or 3.

    Returns:
        PlanarPath with the coordinates and the captured-variance ratio.
        Identical input points give an all-zero path flagged ``degenerate``.
    """
    if out_dim not in (2, 3):
        raise ValueError(f"out_dim must be 2 or 3, got {out_dim}")
    data = np.asarray(points, dtype=float)
    if data.ndim != 2 or data.shape[0] < 2:
        raise ShapeError(f"PCA needs at least 2 points as a 2-D array, got shape {data.shape}")
    if data.shape[1] < out_dim:
        raise ShapeError(f"Points of dimension {data.shape[1]} cannot be reduced to {out_dim} dimensions")

    centered = data - data.mean(axis=0)
    covariance = centered.T @ centered / (data.shape[0] - 1)
    total_variance = float(np.trace(covariance))
    if total_variance <= 0.0:
        logger.warning("PCA input points are all identical; returning a zero path")
        return PlanarPath(points=frozen_array(np.zeros((data.shape[0], out_dim))), captured_variance=0.0, degenerate=True)

    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    order = np.argsort(-eigenvalues, kind="stable")[:out_dim]
    components = eigenvectors[:, order]
    for k in range(out_dim):
        column = components[:, k]
        if column[np.argmax(np.abs(column))] < 0:
            components[:, k] = -column
    captured = float(np.sum(np.clip(eigenvalues[order], 0.0, None)) / total_variance)
    return PlanarPath(points=frozen_array(centered @ components), captured_variance=min(captured, 1.0))


def project_trace(trace: IterationTrace, player: int, mode: str = "barycentric", out_dim: int = 3) -> PlanarPath:
    """Project one player's recorded trajectory, each player independently."""
    if not 0 <= player < trace.profiles[0].num_players:
        raise ShapeError(f"Player index {player} out of range")
    strategies = [profile[player] for profile in trace.profiles]
    return project_strategies(strategies, mode, out_dim)


def project_strategies(strategies: Sequence[MixedStrategy], mode: str = "barycentric", out_dim: int = 3) -> PlanarPath:
    if mode == "barycentric":
        return barycentric_path(strategies)
    if mode == "pca":
        return pca_project([s.weights for s in strategies], out_dim)
    raise ValueError(f"Unknown projection mode '{mode}', expected barycentric or pca")
