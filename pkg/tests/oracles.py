"""Independent reference implementations used to check the fast paths.

Everything here is deliberately naive: double loops, exhaustive path
enumeration, dense sampling.  None of it shares code with the package
modules it checks.
"""

import itertools
import math

import numpy as np


def brute_radius_pairs(points, radius):
    """All unordered pairs within the closed radius, by plain double loop."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if math.dist(pts[i], pts[j]) <= radius:
                out.append((i, j))
    return sorted(out)


def adjacency_from_edges(n, edges, weights):
    adj = [[] for _ in range(n)]
    for (u, v), w in zip(edges, weights):
        adj[u].append((v, w))
        adj[v].append((u, w))
    return adj


def exhaustive_shortest_path(n, edges, weights, source, target):
    """Minimum-length simple path by branch-and-bound enumeration."""
    adj = adjacency_from_edges(n, edges, weights)
    best = [math.inf]

    def dfs(node, dist, visited):
        if dist >= best[0]:
            return
        if node == target:
            best[0] = dist
            return
        for nb, w in adj[node]:
            if nb not in visited:
                visited.add(nb)
                dfs(nb, dist + w, visited)
                visited.remove(nb)

    dfs(source, 0.0, {source})
    return None if math.isinf(best[0]) else best[0]


def exhaustive_minimax(n, edges, bottlenecks, lengths, source, target):
    """(min over simple paths of max edge bottleneck, min length at that value)."""
    adj = [[] for _ in range(n)]
    for (u, v), b, w in zip(edges, bottlenecks, lengths):
        adj[u].append((v, b, w))
        adj[v].append((u, b, w))
    best_b = [math.inf]

    def dfs_b(node, cur, visited):
        if cur >= best_b[0]:
            return
        if node == target:
            best_b[0] = cur
            return
        for nb, b, _ in adj[node]:
            if nb not in visited:
                visited.add(nb)
                dfs_b(nb, max(cur, b), visited)
                visited.remove(nb)

    dfs_b(source, -math.inf, {source})
    if math.isinf(best_b[0]):
        return None
    cap = best_b[0]
    best_l = [math.inf]

    def dfs_l(node, dist, visited):
        if dist >= best_l[0]:
            return
        if node == target:
            best_l[0] = dist
            return
        for nb, b, w in adj[node]:
            if b <= cap and nb not in visited:
                visited.add(nb)
                dfs_l(nb, dist + w, visited)
                visited.remove(nb)

    dfs_l(source, 0.0, {source})
    return cap, best_l[0]


def dense_segment_in_box(a, b, lo, hi, samples=10_000):
    """Dense-sampling membership test for a segment against one box."""
    t = np.linspace(0.0, 1.0, samples)
    pts = np.asarray(a)[None, :] + t[:, None] * (np.asarray(b) - np.asarray(a))[None, :]
    inside = np.all((pts >= lo) & (pts <= hi), axis=1)
    return bool(inside.any())


def dense_bottleneck(waypoints, fn, samples_per_segment=200_001):
    """Dense evaluation of max fn along a polyline."""
    w = np.asarray(waypoints, dtype=float)
    best = -math.inf
    for i in range(w.shape[0] - 1):
        t = np.linspace(0.0, 1.0, samples_per_segment)
        pts = w[i][None, :] + t[:, None] * (w[i + 1] - w[i])[None, :]
        best = max(best, float(np.max(fn(pts))))
    return best


def random_weighted_graph(rng, n_max=30, p_edge=0.25):
    """Connected-ish random graph with Euclidean-like positive weights."""
    n = int(rng.integers(5, n_max + 1))
    pts = rng.random((n, 2))
    edges, weights = [], []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p_edge:
                edges.append((i, j))
                weights.append(float(np.linalg.norm(pts[i] - pts[j])))
    # chain fallback so source/target are usually reachable
    for i in range(n - 1):
        if (i, i + 1) not in edges:
            if rng.random() < 0.5:
                edges.append((i, i + 1))
                weights.append(float(np.linalg.norm(pts[i] - pts[i + 1])))
    return n, pts, edges, weights
