"""Batch wavefront planner with lazy collision checking.

Sweeps the same implicit roadmap as the shortest-path planner, but probes
each candidate connection only when it would be used.  A connection whose
collision check fails is simply skipped, which can leave the returned path
costlier than the fully checked roadmap optimum; away from obstacles the
two coincide.
"""

from __future__ import annotations

import time
from heapq import heappush, heappop

import numpy as np

from ..neighbors import radius_pairs
from ..sampling import make_rng
from ..scenario import Scenario, segment_free
from .base import PlanResult, no_path_result
from .prm import _free_sample_set

_UNVISITED, _OPEN_NEW, _OPEN, _CLOSED = 0, 1, 2, 3


def _adjacency_lists(count: int, pairs: np.ndarray) -> list:
    adj = [[] for _ in range(count)]
    for u, v in pairs:
        adj[u].append(int(v))
        adj[v].append(int(u))
    return adj


def fmt_star(scn: Scenario, n: float, r_n: float, r_st: float, seed) -> PlanResult:
    """Lazy dynamic-programming sweep from start to target."""
    if r_n <= 0 or r_st <= 0:
        raise ValueError("connection radii must be positive")
    t0 = time.perf_counter()
    rng = make_rng(seed)
    free, drawn = _free_sample_set(scn, n, rng)
    k = free.shape[0]
    s_id, t_id = k, k + 1
    pts = np.vstack([free, scn.start[None, :], scn.target[None, :]])

    pairs = radius_pairs(free, r_n) if k >= 2 else np.empty((0, 2), dtype=np.int64)
    adj = _adjacency_lists(k + 2, pairs)
    for anchor_id, anchor in ((s_id, scn.start), (t_id, scn.target)):
        if k:
            near = np.nonzero(np.linalg.norm(free - anchor, axis=1) <= r_st)[0]
            for idx in near:
                adj[anchor_id].append(int(idx))
                adj[int(idx)].append(anchor_id)
    edge_count = pairs.shape[0] + len(adj[s_id]) + len(adj[t_id])
    adj = [np.array(sorted(lst), dtype=np.int64) for lst in adj]

    has_obstacles = bool(scn.obstacles)
    checked: dict[tuple[int, int], bool] = {}

    def edge_free(a: int, b: int) -> bool:
        if not has_obstacles:
            return True
        key = (a, b) if a < b else (b, a)
        hit = checked.get(key)
        if hit is None:
            hit = segment_free(scn, pts[a], pts[b])
            checked[key] = hit
        return hit

    cost = np.full(k + 2, np.inf)
    parent = np.full(k + 2, -1, dtype=np.int64)
    state = np.zeros(k + 2, dtype=np.int8)
    cost[s_id] = 0.0
    state[s_id] = _OPEN
    heap = [(0.0, s_id)]

    elapsed = lambda: (time.perf_counter() - t0) * 1e3
    while heap:
        c, z = heappop(heap)
        if state[z] != _OPEN or c > cost[z]:
            continue
        if z == t_id:
            chain = [t_id]
            while chain[-1] != s_id:
                chain.append(int(parent[chain[-1]]))
            chain.reverse()
            value = float(cost[t_id])
            return PlanResult(success=True, path=pts[chain], cost=value, length=value,
                              vertex_count=k + 2, edge_count=edge_count,
                              samples_drawn=drawn, wall_time_ms=elapsed())
        fresh = []
        for x in adj[z].tolist():
            if state[x] != _UNVISITED:
                continue
            ys = adj[x]
            open_mask = state[ys] == _OPEN
            if not open_mask.any():
                continue
            open_ys = ys[open_mask]
            cand = cost[open_ys] + np.linalg.norm(pts[open_ys] - pts[x], axis=1)
            best = int(np.argmin(cand))  # adjacency is sorted, so ties pick the smaller id
            best_y = int(open_ys[best])
            if edge_free(best_y, x):
                cost[x] = float(cand[best])
                parent[x] = best_y
                state[x] = _OPEN_NEW
                fresh.append(x)
        for x in fresh:
            state[x] = _OPEN
            heappush(heap, (float(cost[x]), int(x)))
        state[z] = _CLOSED
    return no_path_result(k + 2, edge_count, drawn, elapsed())
