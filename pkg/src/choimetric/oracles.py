"""Independent low-tech oracles used to cross-check the solver paths."""

from __future__ import annotations

import itertools

import numpy as np


def grid_ball_maximize(objective: np.ndarray, ball_eval, radius: float,
                       rounds: int = 5, pts: int = 13) -> float:
    """Multiresolution exhaustive grid for sup { g . t : N(t) <= 1 } with a
    positively homogeneous N; independent of the SDP path.

    Infeasible grid points are rescaled onto the sphere N(t) = 1, so every
    evaluated direction contributes.  Intended for <= 4 variables.
    """
    g = np.asarray(objective, dtype=float)
    r = g.shape[0]
    center = np.zeros(r)
    best = 0.0
    span = float(radius)
    for _ in range(rounds):
        axes = [np.linspace(center[i] - span, center[i] + span, pts)
                for i in range(r)]
        best_here = center
        for point in itertools.product(*axes):
            t = np.asarray(point)
            norm = ball_eval(t)
            if norm <= 1.0 + 1e-12:
                val = float(g @ t)
            elif norm > 0:
                t = t / norm
                val = float(g @ t)
            else:
                continue
            if val > best:
                best = val
                best_here = t
        center = best_here
        span = span * 3.0 / (pts - 1)
    return best


def classical_path_metric(weights: dict, n_points: int) -> np.ndarray:
    """All-pairs shortest-path distances from edge weights {(i, j): d}."""
    dist = np.full((n_points, n_points), np.inf)
    np.fill_diagonal(dist, 0.0)
    for (i, j), d in weights.items():
        dist[i, j] = min(dist[i, j], d)
        dist[j, i] = min(dist[j, i], d)
    for k in range(n_points):
        for i in range(n_points):
            for j in range(n_points):
                if dist[i, k] + dist[k, j] < dist[i, j]:
                    dist[i, j] = dist[i, k] + dist[k, j]
    return dist
