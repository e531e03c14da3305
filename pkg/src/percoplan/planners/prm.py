"""Roadmap construction over point process samples and its shortest-path query.

The roadmap is the radius graph on collision-free samples, using the sample
connection radius r_n, plus supplementary edges linking the start and target
to samples within the (possibly larger) query radius r_st through
collision-free straight segments.  Start and target never connect directly
to each other.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from ..neighbors import radius_pairs
from ..sampling import make_rng, sample_ppp, unit_box
from ..scenario import Scenario, points_free, segments_free
from .base import PlanResult, edges_to_csr, no_path_result, walk_predecessors


@dataclass(frozen=True)
class PrmGraph:
    """Roadmap with vertex ids 0..k-1 for samples, k for start, k+1 for target."""

    scenario: Scenario
    samples: np.ndarray           # (k, d) free samples
    radius: float                 # sample connection radius r_n
    st_radius: float              # start/target connection radius r_st
    edges: np.ndarray             # (m, 2), u < v
    lengths: np.ndarray           # (m,)
    density: float                # expected samples per unit volume
    seed: int | None
    samples_drawn: int            # raw sample count before the free-space filter
    build_time_ms: float

    def __post_init__(self):
        for name in ("samples", "edges", "lengths"):
            getattr(self, name).setflags(write=False)

    @property
    def start_index(self) -> int:
        return self.samples.shape[0]

    @property
    def target_index(self) -> int:
        return self.samples.shape[0] + 1

    @property
    def vertex_count(self) -> int:
        return self.samples.shape[0] + 2

    @property
    def edge_count(self) -> int:
        return self.edges.shape[0]

    def vertex_array(self) -> np.ndarray:
        return np.vstack([self.samples, self.scenario.start[None, :],
                          self.scenario.target[None, :]])

    def sample_subgraph_edges(self) -> np.ndarray:
        """Edges between samples only (no start/target supplementary edges)."""
        k = self.samples.shape[0]
        mask = self.edges.max(axis=1) < k if self.edges.size else np.zeros(0, dtype=bool)
        return self.edges[mask]


def _free_sample_set(scn: Scenario, density: float, rng) -> tuple[np.ndarray, int]:
    raw = sample_ppp(density, unit_box(scn.dimension), rng).points
    if scn.obstacles:
        free = raw[points_free(scn, raw)]
    else:
        free = raw
    return free, raw.shape[0]


def _collision_filtered_pairs(scn: Scenario, pts: np.ndarray, radius: float) -> np.ndarray:
    pairs = radius_pairs(pts, radius)
    if scn.obstacles and pairs.shape[0]:
        ok = segments_free(scn, pts[pairs[:, 0]], pts[pairs[:, 1]])
        pairs = pairs[ok]
    return pairs


def _anchor_edges(scn: Scenario, pts: np.ndarray, anchor: np.ndarray,
                  anchor_id: int, radius: float) -> tuple[np.ndarray, np.ndarray]:
    """Supplementary edges from samples within ``radius`` of an anchor point."""
    if pts.shape[0] == 0:
        return np.empty((0, 2), dtype=np.int64), np.empty(0)
    dist = np.linalg.norm(pts - anchor, axis=1)
    cand = np.nonzero(dist <= radius)[0]
    if scn.obstacles and cand.size:
        ok = segments_free(scn, pts[cand], np.broadcast_to(anchor, (cand.size, pts.shape[1])))
        cand = cand[ok]
    edges = np.stack([cand, np.full(cand.size, anchor_id, dtype=np.int64)], axis=1)
    return edges, dist[cand]


def prm_build(scn: Scenario, n: float, r_n: float, r_st: float, seed) -> PrmGraph:
    """Sample, collision-filter, and connect the roadmap."""
    if r_n <= 0 or r_st <= 0:
        raise ValueError("connection radii must be positive")
    t0 = time.perf_counter()
    rng = make_rng(seed)
    free, drawn = _free_sample_set(scn, n, rng)
    pairs = _collision_filtered_pairs(scn, free, r_n)
    lengths = (np.linalg.norm(free[pairs[:, 0]] - free[pairs[:, 1]], axis=1)
               if pairs.shape[0] else np.empty(0))
    k = free.shape[0]
    s_edges, s_len = _anchor_edges(scn, free, scn.start, k, r_st)
    t_edges, t_len = _anchor_edges(scn, free, scn.target, k + 1, r_st)
    edges = np.concatenate([pairs, s_edges, t_edges]) if pairs.size or s_edges.size or t_edges.size \
        else np.empty((0, 2), dtype=np.int64)
    lengths = np.concatenate([lengths, s_len, t_len])
    ms = (time.perf_counter() - t0) * 1e3
    return PrmGraph(scenario=scn, samples=free, radius=float(r_n), st_radius=float(r_st),
                    edges=edges, lengths=lengths, density=float(n),
                    seed=seed if isinstance(seed, int) else None,
                    samples_drawn=drawn, build_time_ms=ms)


def prm_query(g: PrmGraph) -> PlanResult:
    """Shortest start-target path over the roadmap; no-path is a valid outcome."""
    t0 = time.perf_counter()
    s, t = g.start_index, g.target_index
    csr = edges_to_csr(g.vertex_count, g.edges, g.lengths)
    dist, pred = _sp_dijkstra(csr, directed=False, indices=s, return_predecessors=True)
    elapsed = lambda: g.build_time_ms + (time.perf_counter() - t0) * 1e3
    if not np.isfinite(dist[t]):
        return no_path_result(g.vertex_count, g.edge_count, g.samples_drawn, elapsed())
    chain = walk_predecessors(pred, s, t)
    waypoints = g.vertex_array()[chain]
    cost = float(dist[t])
    return PlanResult(success=True, path=waypoints, cost=cost, length=cost,
                      vertex_count=g.vertex_count, edge_count=g.edge_count,
                      samples_drawn=g.samples_drawn, wall_time_ms=elapsed())
