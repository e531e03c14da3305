"""Shared planner plumbing: results, radius presets, graph assembly."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix

from ..constants import ball_volume
from ..geometry import path_length


# Connection-radius presets imported from the standard asymptotically-optimal
# planning conventions, specialized to the unit cube (free-space measure 1).
# The prm-star coefficient is fixed at 2.5; the fmt-star preset carries its
# usual tuning slack eta, calibrated here to 0.25.
PRM_STAR_COEFF = 2.5
FMT_STAR_ETA = 0.25


def r_prm_star(n: float, d: int) -> float:
    """prm-star preset: 2.5 * (log n / n)^(1/d)."""
    if n <= 1:
        raise ValueError("n must exceed 1")
    return PRM_STAR_COEFF * (math.log(n) / n) ** (1.0 / d)


def r_fmt_star(n: float, d: int, eta: float = FMT_STAR_ETA) -> float:
    """fmt-star preset: (1+eta) * 2 * ((1/d) * (1/b_d) * log n / n)^(1/d)."""
    if n <= 1:
        raise ValueError("n must exceed 1")
    return (1.0 + eta) * 2.0 * ((1.0 / d) * (1.0 / ball_volume(d)) * math.log(n) / n) ** (1.0 / d)


RST_PRESETS = {
    "prm-star": r_prm_star,
    "fmt-star": r_fmt_star,
}


def resolve_rst(preset, n: float, d: int) -> float:
    """Resolve an r_st preset name, callable, or explicit radius."""
    if isinstance(preset, str):
        try:
            return RST_PRESETS[preset](n, d)
        except KeyError:
            raise ValueError(f"unknown r_st preset {preset!r}") from None
    if callable(preset):
        return float(preset(n, d))
    return float(preset)


@dataclass(frozen=True)
class PlanResult:
    """Outcome of one planner invocation.

    ``cost`` is the planner's objective (length, or the bottleneck value for
    the minimax planner); ``length`` is always the geometric path length when
    a path exists.
    """

    success: bool
    path: np.ndarray | None
    cost: float | None
    length: float | None
    vertex_count: int
    edge_count: int
    samples_drawn: int
    wall_time_ms: float
    bottleneck: float | None = None

    def __post_init__(self):
        if self.path is not None:
            self.path.setflags(write=False)


def no_path_result(vertex_count, edge_count, samples_drawn, wall_time_ms) -> PlanResult:
    return PlanResult(success=False, path=None, cost=None, length=None,
                      vertex_count=vertex_count, edge_count=edge_count,
                      samples_drawn=samples_drawn, wall_time_ms=wall_time_ms)


def recompute_cost(result: PlanResult) -> float:
    """Geometric length recomputed from the returned waypoints."""
    if not result.success:
        raise ValueError("no path to recompute")
    return path_length(result.path)


def edges_to_csr(n_vertices: int, edges: np.ndarray, weights: np.ndarray) -> csr_matrix:
    """Symmetric CSR adjacency from an undirected edge list."""
    if edges.shape[0] == 0:
        return csr_matrix((n_vertices, n_vertices))
    u, v = edges[:, 0], edges[:, 1]
    row = np.concatenate([u, v])
    col = np.concatenate([v, u])
    w = np.concatenate([weights, weights])
    return csr_matrix((w, (row, col)), shape=(n_vertices, n_vertices))


def walk_predecessors(pred: np.ndarray, source: int, target: int) -> list[int]:
    """Vertex index chain from source to target along a predecessor array."""
    chain = [target]
    while chain[-1] != source:
        nxt = int(pred[chain[-1]])
        if nxt < 0:
            raise ValueError("broken predecessor chain")
        chain.append(nxt)
    chain.reverse()
    return chain
