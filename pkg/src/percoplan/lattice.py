"""Grid-sample site percolation and the sparsified deterministic roadmap.

Sites live on the cube-restricted grid with spacing n^(-1/d); each site is
retained independently with probability p, using one uniform per site derived
from (seed, site index) by an integer hash.  Shared per-site uniforms give a
monotone coupling: the retained set at p1 <= p2 is nested.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .constants import p_star
from .planners.prm import PrmGraph, _anchor_edges
from .rgg import ComponentReport, GeometricGraph, connected_components
from .scenario import Scenario, points_free, segments_free

__all__ = [
    "LatticeGraph", "build_lattice_graph", "p_star", "sparsified_prm",
    "subcritical_reach_decay", "lattice_spacing",
]


def lattice_spacing(n: float, d: int) -> float:
    """Grid spacing n^(-1/d)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n ** (-1.0 / d)


def _site_uniforms(flat_index: np.ndarray, seed: int) -> np.ndarray:
    """Deterministic per-site uniforms from a splitmix-style integer hash."""
    with np.errstate(over="ignore"):
        mix = (np.uint64(0x9E3779B97F4A7C15) * np.uint64((seed + 1) & 0xFFFFFFFFFFFFFFFF))
        x = flat_index.astype(np.uint64) + mix
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        x = x ^ (x >> np.uint64(31))
    return x.astype(np.float64) / float(2 ** 64)


@dataclass(frozen=True)
class LatticeGraph:
    """Retained grid sites with nearest-neighbor (axis) adjacency."""

    density: float                # nominal n
    dimension: int
    spacing: float
    retention: float              # p
    seed: int
    sites: np.ndarray             # (k, d) retained site coordinates
    site_indices: np.ndarray      # (k, d) integer multi-indices
    edges: np.ndarray             # (m, 2) indices into sites, u < v
    per_axis: int                 # grid points per axis

    def __post_init__(self):
        for name in ("sites", "site_indices", "edges"):
            getattr(self, name).setflags(write=False)

    @property
    def site_count(self) -> int:
        return self.sites.shape[0]

    @property
    def total_sites(self) -> int:
        return self.per_axis ** self.dimension

    def as_geometric_graph(self) -> GeometricGraph:
        lengths = np.full(self.edges.shape[0], self.spacing)
        return GeometricGraph(vertices=self.sites.copy(), radius=self.spacing,
                              edges=self.edges.copy(), lengths=lengths)

    def components(self) -> ComponentReport:
        return connected_components(self.as_geometric_graph())


def _axis_neighbor_edges(idx: np.ndarray, per_axis: int) -> np.ndarray:
    """Edges between retained sites differing by one step along one axis."""
    k, d = idx.shape
    if k == 0:
        return np.empty((0, 2), dtype=np.int64)
    dims = np.full(d, per_axis, dtype=np.int64)
    flat = np.ravel_multi_index(idx.T, dims)
    order = np.argsort(flat)
    sflat = flat[order]
    edges = []
    for axis in range(d):
        movable = idx[:, axis] + 1 < per_axis
        src = np.nonzero(movable)[0]
        stride = int(np.prod(dims[axis + 1:], dtype=np.int64))
        nb_flat = flat[src] + stride
        pos = np.searchsorted(sflat, nb_flat)
        pos = np.minimum(pos, sflat.size - 1)
        hit = sflat[pos] == nb_flat
        u = src[hit]
        v = order[pos[hit]]
        if u.size:
            edges.append(np.stack([np.minimum(u, v), np.maximum(u, v)], axis=1))
    if not edges:
        return np.empty((0, 2), dtype=np.int64)
    out = np.concatenate(edges)
    return out[np.lexsort((out[:, 1], out[:, 0]))]


def build_lattice_graph(n: float, d: int, p: float, seed: int) -> LatticeGraph:
    """Site-percolate the grid and connect retained axis neighbors."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("retention probability must be in [0, 1]")
    h = lattice_spacing(n, d)
    per_axis = int(np.floor(1.0 / h + 1e-9)) + 1
    axes = [np.arange(per_axis, dtype=np.int64)] * d
    mesh = np.meshgrid(*axes, indexing="ij")
    idx = np.stack([m.ravel() for m in mesh], axis=1)
    flat = np.arange(idx.shape[0], dtype=np.int64)
    keep = _site_uniforms(flat, seed) < p
    idx = idx[keep]
    sites = idx.astype(float) * h
    edges = _axis_neighbor_edges(idx, per_axis)
    return LatticeGraph(density=float(n), dimension=d, spacing=h, retention=float(p),
                        seed=int(seed), sites=sites, site_indices=idx,
                        edges=edges, per_axis=per_axis)


def sparsified_prm(scn: Scenario, n: float, p: float, r_st: float, seed: int) -> PrmGraph:
    """Roadmap over retained free lattice sites plus start/target connections.

    The sample connection radius is fixed to the lattice spacing; queries run
    through the same machinery as the sampled roadmap (shortest-path or
    bottleneck).
    """
    t0 = time.perf_counter()
    lat = build_lattice_graph(n, scn.dimension, p, seed)
    sites, edges = lat.sites, lat.edges
    if scn.obstacles:
        free = points_free(scn, sites)
        remap = np.cumsum(free) - 1
        sites = sites[free]
        keep_edge = free[edges[:, 0]] & free[edges[:, 1]] if edges.size else np.zeros(0, bool)
        edges = remap[edges[keep_edge]] if edges.size else edges
        if edges.shape[0]:
            ok = segments_free(scn, sites[edges[:, 0]], sites[edges[:, 1]])
            edges = edges[ok]
    lengths = np.full(edges.shape[0], lat.spacing)
    k = sites.shape[0]
    s_edges, s_len = _anchor_edges(scn, sites, scn.start, k, r_st)
    t_edges, t_len = _anchor_edges(scn, sites, scn.target, k + 1, r_st)
    all_edges = np.concatenate([edges, s_edges, t_edges]) if edges.size or s_edges.size or t_edges.size \
        else np.empty((0, 2), dtype=np.int64)
    all_lengths = np.concatenate([lengths, s_len, t_len])
    ms = (time.perf_counter() - t0) * 1e3
    return PrmGraph(scenario=scn, samples=sites, radius=lat.spacing, st_radius=float(r_st),
                    edges=all_edges, lengths=all_lengths, density=float(n), seed=int(seed),
                    samples_drawn=lat.site_count, build_time_ms=ms)


@dataclass(frozen=True)
class ReachDecayReport:
    k_values: np.ndarray
    frequencies: np.ndarray       # empirical Pr[origin cluster reaches L1 distance k]
    slope: float                  # of log-frequency against k
    r_squared: float


def subcritical_reach_decay(d: int, p: float, k_list, trials: int, seed: int) -> ReachDecayReport:
    """Monte-Carlo estimate of the origin cluster's reach distribution.

    For each trial, sites in the L1 ball of radius max(k_list) are retained
    independently with probability p and the farthest L1 distance reachable
    from the origin is recorded.  Below the retention threshold the log of
    the reach frequencies falls off linearly in k.
    """
    k_values = np.asarray(sorted(k_list), dtype=np.int64)
    k_max = int(k_values.max())
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    # window padded by one always-empty ring so flat neighbor offsets are safe
    side = 2 * k_max + 3
    shape = (side,) * d
    coords = np.indices(shape).reshape(d, -1)
    l1 = np.abs(coords - (k_max + 1)).sum(axis=0)
    in_ball = l1 <= k_max
    ball_idx = np.nonzero(in_ball)[0]
    origin = int(np.ravel_multi_index(((k_max + 1),) * d, shape))
    strides = [int(np.prod(shape[axis + 1:], dtype=np.int64)) for axis in range(d)]
    offsets = [s for stride in strides for s in (stride, -stride)]
    size = side ** d
    reaches = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        retained = np.zeros(size, dtype=bool)
        retained[ball_idx] = rng.random(ball_idx.size) < p
        if not retained[origin]:
            reaches[t] = -1
            continue
        retained[origin] = False
        stack = [origin]
        best = 0
        while stack:
            site = stack.pop()
            norm = int(l1[site])
            if norm > best:
                best = norm
            for off in offsets:
                nb = site + off
                if retained[nb]:
                    retained[nb] = False
                    stack.append(nb)
        reaches[t] = best
    freqs = np.array([(reaches >= k).mean() for k in k_values])
    positive = freqs > 0
    if positive.sum() >= 2:
        x = k_values[positive].astype(float)
        y = np.log(freqs[positive])
        slope, intercept = np.polyfit(x, y, 1)
        fitted = slope * x + intercept
        ss_res = float(((y - fitted) ** 2).sum())
        ss_tot = float(((y - y.mean()) ** 2).sum())
        r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    else:
        slope, r2 = float("nan"), float("nan")
    return ReachDecayReport(k_values=k_values, frequencies=freqs,
                            slope=float(slope), r_squared=float(r2))
