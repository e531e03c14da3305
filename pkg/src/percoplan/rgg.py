"""Random geometric graphs: construction, components, shortest paths, stretch.

A :class:`GeometricGraph` links every pair of vertices at Euclidean distance
<= radius (closed ball, no tolerance: boundary equality is a measure-zero
event under the point processes used here).  An optional edge filter admits
only pairs passing a validity predicate, which is how collision checking is
injected by the planning layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heappush, heappop

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .constants import gamma_star, gamma_star_asymptotic, connection_gamma
from .neighbors import radius_pairs

__all__ = [
    "GeometricGraph", "ComponentReport", "StretchReport",
    "build_rgg", "connected_components", "connected_components_points",
    "shortest_path", "estimate_stretch",
    "critical_radius", "critical_radius_asymptotic", "connection_critical_radius",
    "subcritical_component_scaling",
]


@dataclass(frozen=True)
class GeometricGraph:
    """Immutable undirected graph over points with Euclidean edge lengths."""

    vertices: np.ndarray          # (n, d)
    radius: float
    edges: np.ndarray             # (m, 2) int, u < v, lexicographically sorted
    lengths: np.ndarray           # (m,)

    def __post_init__(self):
        for name in ("vertices", "edges", "lengths"):
            arr = getattr(self, name)
            arr.setflags(write=False)

    @property
    def vertex_count(self) -> int:
        return self.vertices.shape[0]

    @property
    def edge_count(self) -> int:
        return self.edges.shape[0]

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]

    def adjacency_csr(self) -> csr_matrix:
        """Symmetric CSR adjacency with edge lengths as weights."""
        n = self.vertex_count
        if self.edge_count == 0:
            return csr_matrix((n, n))
        u, v = self.edges[:, 0], self.edges[:, 1]
        row = np.concatenate([u, v])
        col = np.concatenate([v, u])
        w = np.concatenate([self.lengths, self.lengths])
        return csr_matrix((w, (row, col)), shape=(n, n))

    def neighbor_lists(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, indices, weights) of the symmetric adjacency."""
        csr = self.adjacency_csr()
        return csr.indptr, csr.indices, csr.data

    def to_edge_csv(self, path) -> None:
        """Edge list as u,v,length rows."""
        with open(path, "w") as fh:
            fh.write("u,v,length\n")
            for (u, v), w in zip(self.edges, self.lengths):
                fh.write(f"{u},{v},{float(w)!r}\n")


def build_rgg(points: np.ndarray, radius: float, edge_filter=None,
              backend: str = "auto") -> GeometricGraph:
    """Radius graph on ``points``; ``edge_filter(P, Q) -> mask`` may drop pairs."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be an (n, d) array")
    if radius <= 0:
        raise ValueError("radius must be positive")
    pairs = radius_pairs(pts, radius, backend=backend)
    if edge_filter is not None and pairs.shape[0]:
        keep = np.asarray(edge_filter(pts[pairs[:, 0]], pts[pairs[:, 1]]), dtype=bool)
        pairs = pairs[keep]
    lengths = np.linalg.norm(pts[pairs[:, 0]] - pts[pairs[:, 1]], axis=1) if pairs.shape[0] \
        else np.empty(0)
    return GeometricGraph(vertices=pts.copy(), radius=float(radius),
                          edges=pairs, lengths=lengths)


# --- connected components ---


@dataclass(frozen=True)
class ComponentReport:
    """Component labeling with sizes sorted descending."""

    component_id: np.ndarray      # per vertex: smallest vertex index in its component
    sizes: np.ndarray             # descending
    largest_size: int
    second_size: int

    @property
    def component_count(self) -> int:
        return self.sizes.size

    def fractions(self) -> tuple[float, float]:
        """Largest and second-largest sizes as fractions of the vertex count."""
        n = self.component_id.size
        if n == 0:
            return 0.0, 0.0
        return self.largest_size / n, self.second_size / n


def connected_components(g: GeometricGraph) -> ComponentReport:
    """Union of the edge set into components with deterministic ids."""
    n = g.vertex_count
    if n == 0:
        empty = np.empty(0, dtype=np.int64)
        return ComponentReport(empty, empty, 0, 0)
    _, labels = _cc(g.adjacency_csr(), directed=False)
    min_index = np.full(labels.max() + 1, n, dtype=np.int64)
    np.minimum.at(min_index, labels, np.arange(n))
    comp_id = min_index[labels]
    sizes = np.sort(np.bincount(labels))[::-1].astype(np.int64)
    largest = int(sizes[0])
    second = int(sizes[1]) if sizes.size > 1 else 0
    return ComponentReport(component_id=comp_id, sizes=sizes,
                           largest_size=largest, second_size=second)


def connected_components_points(points: np.ndarray, radius: float,
                                dense_pair_limit: float = 3e6) -> ComponentReport:
    """Component report for the radius graph without building it when dense.

    When a pair-count probe estimates more edges than ``dense_pair_limit``,
    components are found by a claim-as-you-go breadth-first sweep (each
    frontier layer claims every unvisited point within the radius), which
    touches each candidate pair at most once and never stores the edge list.
    Sparse inputs fall through to the explicit graph build.
    """
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    if n == 0:
        empty = np.empty(0, dtype=np.int64)
        return ComponentReport(empty, empty, 0, 0)
    if n == 1:
        return ComponentReport(np.zeros(1, dtype=np.int64), np.ones(1, dtype=np.int64), 1, 0)
    rng = np.random.default_rng(12345)
    probe = min(4000, n * (n - 1) // 2)
    iu = rng.integers(0, n, probe)
    iv = rng.integers(0, n, probe)
    ok = iu != iv
    hit = np.linalg.norm(pts[iu[ok]] - pts[iv[ok]], axis=1) <= radius
    est_pairs = hit.mean() * n * (n - 1) / 2 if ok.any() else 0.0
    if est_pairs <= dense_pair_limit:
        return connected_components(build_rgg(pts, radius))
    labels = np.full(n, -1, dtype=np.int64)
    unclaimed = np.ones(n, dtype=bool)
    r2 = radius * radius
    for seed_vertex in range(n):
        if not unclaimed[seed_vertex]:
            continue
        unclaimed[seed_vertex] = False
        labels[seed_vertex] = seed_vertex
        frontier = pts[seed_vertex][None, :]
        while frontier.shape[0]:
            alive_idx = np.nonzero(unclaimed)[0]
            if alive_idx.size == 0:
                break
            alive_pts = pts[alive_idx]
            alive_sq = np.einsum("ij,ij->i", alive_pts, alive_pts)
            claimed_mask = np.zeros(alive_idx.size, dtype=bool)
            for s in range(0, frontier.shape[0], 512):
                block = frontier[s:s + 512]
                block_sq = np.einsum("ij,ij->i", block, block)
                d2 = alive_sq[:, None] + block_sq[None, :] - 2.0 * (alive_pts @ block.T)
                claimed_mask |= (d2 <= r2).any(axis=1)
            claimed = alive_idx[claimed_mask]
            labels[claimed] = seed_vertex
            unclaimed[claimed] = False
            frontier = pts[claimed]
    sizes = np.sort(np.bincount(labels, minlength=0)[np.unique(labels)])[::-1].astype(np.int64)
    largest = int(sizes[0])
    second = int(sizes[1]) if sizes.size > 1 else 0
    return ComponentReport(component_id=labels, sizes=sizes,
                           largest_size=largest, second_size=second)


def component_report_csv_row(report, n, d, radius_label, trial):
    """Rows (n, d, radius_label, trial, size_rank, size, fraction)."""
    total = report.component_id.size
    rows = []
    for rank, size in enumerate(report.sizes):
        frac = size / total if total else 0.0
        rows.append((n, d, radius_label, trial, rank, int(size), frac))
    return rows


# --- shortest paths ---


def shortest_path(g: GeometricGraph, u: int, v: int):
    """Dijkstra over Euclidean edge weights from u to v.

    Returns (vertex index list, length) or None when v is unreachable.
    Equal-length alternatives resolve to the smaller predecessor index, so
    the returned route is deterministic.
    """
    n = g.vertex_count
    if not (0 <= u < n and 0 <= v < n):
        raise IndexError("vertex index out of range")
    if u == v:
        return [u], 0.0
    indptr, indices, weights = g.neighbor_lists()
    dist, pred = _dijkstra(indptr, indices, weights, u, target=v)
    if not np.isfinite(dist[v]):
        return None
    path = _walk_back(pred, u, v)
    return path, float(dist[v])


def _dijkstra(indptr, indices, weights, source, target=None):
    n = indptr.size - 1
    dist = np.full(n, np.inf)
    pred = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, node = heappop(heap)
        if done[node]:
            continue
        done[node] = True
        if node == target:
            break
        for j in range(indptr[node], indptr[node + 1]):
            nb = indices[j]
            if done[nb]:
                continue
            nd = d + weights[j]
            if nd < dist[nb]:
                dist[nb] = nd
                pred[nb] = node
                heappush(heap, (nd, nb))
            elif nd == dist[nb] and node < pred[nb]:
                pred[nb] = node
    return dist, pred


def _walk_back(pred, source, target):
    path = [target]
    while path[-1] != source:
        path.append(int(pred[path[-1]]))
    path.reverse()
    return path


# --- stretch estimation ---


@dataclass(frozen=True)
class StretchReport:
    """Graph-over-Euclidean distance ratios for sampled same-component pairs."""

    pairs: np.ndarray             # (k, 2) vertex indices
    graph_distances: np.ndarray
    euclidean_distances: np.ndarray
    ratios: np.ndarray
    max_ratio: float
    p95_ratio: float


def estimate_stretch(g: GeometricGraph, pair_count: int = 200,
                     min_separation: float = 0.25, rng=None,
                     sources: int = 20) -> StretchReport:
    """Sample vertex pairs in the largest component and report distance ratios.

    Pairs are grouped by source vertex so one Dijkstra sweep serves many
    pairs; only pairs at Euclidean separation >= min_separation are kept,
    matching the regime where a separation-independent stretch is expected.
    """
    if min_separation <= g.radius:
        raise ValueError("min_separation must exceed the connection radius")
    if rng is None:
        rng = np.random.default_rng(0)
    report = connected_components(g)
    comp_sizes = np.bincount(report.component_id, minlength=g.vertex_count)
    largest_id = int(np.argmax(comp_sizes))
    members = np.nonzero(report.component_id == largest_id)[0]
    if members.size < 2:
        raise ValueError("largest component has fewer than 2 vertices")
    pts = g.vertices
    src_count = min(sources, members.size)
    srcs = rng.choice(members, size=src_count, replace=False)
    per_src = int(np.ceil(pair_count / src_count))
    csr = g.adjacency_csr()
    dists = _sp_dijkstra(csr, directed=False, indices=srcs)
    pair_rows = []
    for row, s in enumerate(srcs):
        sep = np.linalg.norm(pts[members] - pts[s], axis=1)
        ok = members[sep >= min_separation]
        if ok.size == 0:
            continue
        chosen = rng.choice(ok, size=min(per_src, ok.size), replace=False)
        for t in chosen:
            pair_rows.append((s, t, dists[row, t]))
    if not pair_rows:
        raise ValueError("no admissible pairs at the requested separation")
    pair_rows = pair_rows[:pair_count]
    pairs = np.array([(s, t) for s, t, _ in pair_rows], dtype=np.int64)
    gd = np.array([d for _, _, d in pair_rows])
    ed = np.linalg.norm(pts[pairs[:, 0]] - pts[pairs[:, 1]], axis=1)
    ratios = gd / ed
    return StretchReport(pairs=pairs, graph_distances=gd, euclidean_distances=ed,
                         ratios=ratios, max_ratio=float(ratios.max()),
                         p95_ratio=float(np.quantile(ratios, 0.95)))


# --- critical radii ---


def critical_radius(d: int, n: float) -> float:
    """Tabulated critical constant scaled by n^(-1/d)."""
    if n <= 0:
        raise ValueError("n must be positive")
    return gamma_star(d) * n ** (-1.0 / d)


def critical_radius_asymptotic(d: int, n: float) -> float:
    """Large-d approximation of the critical radius (kept separately named)."""
    if n <= 0:
        raise ValueError("n must be positive")
    return gamma_star_asymptotic(d) * n ** (-1.0 / d)


def connection_critical_radius(d: int, n: float) -> float:
    """Empirical giant-component threshold for distance-<=r graphs (2x tabulated)."""
    if n <= 0:
        raise ValueError("n must be positive")
    return connection_gamma(d) * n ** (-1.0 / d)


# --- subcritical scaling ---


@dataclass(frozen=True)
class SubcriticalScalingReport:
    n_values: np.ndarray
    mean_largest: np.ndarray      # mean largest-component size per n
    per_log_n: np.ndarray         # mean largest / log n
    slope: float                  # regression slope of L against log n


def subcritical_component_scaling(d: int, gamma_fraction: float, n_list,
                                  trials: int, seed) -> SubcriticalScalingReport:
    """Largest-component growth in the fragmented regime.

    Builds radius graphs at r = gamma_fraction * gamma*(d) * n^(-1/d) on unit
    cube point processes and regresses the mean largest-component size on
    log n; in the fragmented regime the size stays proportional to log n.
    """
    from .sampling import sample_ppp, unit_box, make_rng

    n_values = np.asarray(sorted(n_list), dtype=float)
    means = []
    for i, n in enumerate(n_values):
        r = gamma_fraction * gamma_star(d) * n ** (-1.0 / d)
        sizes = []
        for t in range(trials):
            rng = make_rng(seed, 0, i, t)
            pts = sample_ppp(n, unit_box(d), rng).points
            g = build_rgg(pts, r)
            sizes.append(connected_components(g).largest_size if len(pts) else 0)
        means.append(float(np.mean(sizes)))
    means = np.array(means)
    slope = float(np.polyfit(np.log(n_values), means, 1)[0]) if n_values.size >= 2 else float("nan")
    return SubcriticalScalingReport(n_values=n_values, mean_largest=means,
                                    per_log_n=means / np.log(n_values), slope=slope)
