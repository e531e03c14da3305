"""Minimax (bottleneck) planner over the collision-checked roadmap.

The objective is the maximum of a cost map along the path, evaluated at
vertices and at interior samples of every edge at spacing r_n / 10.  The
search is a label-setting sweep whose keys compose by (max, +), so ties in
the bottleneck value resolve toward shorter paths.
"""

from __future__ import annotations

import time
from heapq import heappush, heappop

import numpy as np

from ..scenario import Scenario, CostMap
from .base import PlanResult, no_path_result
from .prm import PrmGraph, prm_build

DEFAULT_RESOLUTION_FRACTION = 0.1


def edge_bottlenecks(points_u: np.ndarray, points_v: np.ndarray, cost_fn,
                     resolution: float) -> np.ndarray:
    """Max of the cost map over each segment, endpoints plus interior samples."""
    m = points_u.shape[0]
    if m == 0:
        return np.empty(0)
    lengths = np.linalg.norm(points_v - points_u, axis=1)
    steps = max(1, int(np.ceil(lengths.max() / resolution)))
    t = np.linspace(0.0, 1.0, steps + 1)
    # (m, steps+1, d) sample block; fine at roadmap edge counts
    pts = points_u[:, None, :] + t[None, :, None] * (points_v - points_u)[:, None, :]
    vals = np.asarray(cost_fn(pts.reshape(-1, pts.shape[2])), dtype=float)
    return vals.reshape(m, steps + 1).max(axis=1)


def minimax_dijkstra(n_vertices: int, edges: np.ndarray, bottlenecks: np.ndarray,
                     lengths: np.ndarray, source: int, target: int):
    """Path minimizing the max edge bottleneck, ties broken by total length.

    Two label-setting sweeps: the first finds the optimal bottleneck value,
    the second finds the shortest path using only edges at or below it.
    Returns (vertex chain, bottleneck, length) or None when unreachable.
    """
    adj = [[] for _ in range(n_vertices)]
    for (u, v), b, w in zip(edges.tolist(), bottlenecks.tolist(), lengths.tolist()):
        adj[u].append((v, b, w))
        adj[v].append((u, b, w))

    best_b = np.full(n_vertices, np.inf)
    done = np.zeros(n_vertices, dtype=bool)
    best_b[source] = -np.inf
    heap = [(-np.inf, source)]
    while heap:
        b, node = heappop(heap)
        if done[node]:
            continue
        done[node] = True
        if node == target:
            break
        for nb, eb, _ in adj[node]:
            cb = max(b, eb)
            if not done[nb] and cb < best_b[nb]:
                best_b[nb] = cb
                heappush(heap, (cb, nb))
    if not done[target]:
        return None
    cap = float(best_b[target])

    best_l = np.full(n_vertices, np.inf)
    pred = np.full(n_vertices, -1, dtype=np.int64)
    settled = np.zeros(n_vertices, dtype=bool)
    best_l[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        l, node = heappop(heap)
        if settled[node]:
            continue
        settled[node] = True
        if node == target:
            break
        for nb, eb, ew in adj[node]:
            if eb > cap or settled[nb]:
                continue
            cl = l + ew
            if cl < best_l[nb]:
                best_l[nb] = cl
                pred[nb] = node
                heappush(heap, (cl, nb))
    chain = [target]
    while chain[-1] != source:
        chain.append(int(pred[chain[-1]]))
    chain.reverse()
    return chain, cap, float(best_l[target])


def btt_on_graph(g: PrmGraph, cost_map: CostMap, resolution: float | None = None) -> PlanResult:
    """Bottleneck query over an already built roadmap."""
    t0 = time.perf_counter()
    cost_fn = cost_map.bind(g.scenario)
    res = resolution if resolution is not None else g.radius * DEFAULT_RESOLUTION_FRACTION
    verts = g.vertex_array()
    eb = edge_bottlenecks(verts[g.edges[:, 0]], verts[g.edges[:, 1]], cost_fn, res) \
        if g.edge_count else np.empty(0)
    # a path's bottleneck also sees the start vertex itself
    s_val = float(cost_fn(g.scenario.start[None, :])[0])
    found = minimax_dijkstra(g.vertex_count, g.edges, eb, g.lengths,
                             g.start_index, g.target_index)
    ms = g.build_time_ms + (time.perf_counter() - t0) * 1e3
    if found is None:
        return no_path_result(g.vertex_count, g.edge_count, g.samples_drawn, ms)
    chain, bottleneck, length = found
    bottleneck = max(bottleneck, s_val)
    return PlanResult(success=True, path=verts[chain], cost=bottleneck, length=length,
                      vertex_count=g.vertex_count, edge_count=g.edge_count,
                      samples_drawn=g.samples_drawn, wall_time_ms=ms,
                      bottleneck=bottleneck)


def btt(scn: Scenario, n: float, r_n: float, r_st: float, cost_map: CostMap, seed,
        resolution: float | None = None) -> PlanResult:
    """Bottleneck-optimal query over the roadmap built from this seed."""
    return btt_on_graph(prm_build(scn, n, r_n, r_st, seed), cost_map, resolution)
