"""Incremental tree and roadmap planners fed by Poisson(1) sample batches.

Per iteration both planners draw a Poisson(1)-sized batch of uniform samples
(so the accumulated sample set after n iterations matches a density-n batch
process), steer from the nearest node by at most eta, and insert the new node
when the connecting segment is collision-free.  The roadmap variant then adds
extra edges to every node within min((1+mu) * gamma * m^(-1/d), eta) for m
nodes at iteration start, plus a start connection within the inflated query
radius, so its edge set always contains the tree built from the same stream.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..geometry import Box
from ..sampling import make_rng, poisson_draw
from ..scenario import Scenario, is_free, segment_free, segments_free
from .base import resolve_rst


@dataclass(frozen=True)
class RrtTree:
    """Rooted tree: one parent per non-root node."""

    nodes: np.ndarray             # (m, d), node 0 is the root
    parents: np.ndarray           # (m,), parents[0] == -1
    goal: Box
    goal_reached: bool
    iterations: int
    samples_drawn: int
    empty_iterations: int         # iterations whose batch size was zero
    wall_time_ms: float

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.parents.setflags(write=False)

    def edge_set(self) -> set:
        return {(int(min(p, c)), int(max(p, c)))
                for c, p in enumerate(self.parents) if p >= 0}


@dataclass(frozen=True)
class RrgRoadmap:
    """Tree nodes plus roadmap-style supplementary edges."""

    nodes: np.ndarray
    parents: np.ndarray
    extra_edges: np.ndarray       # (e, 2) supplementary connections, u < v
    goal: Box
    goal_reached: bool
    iterations: int
    samples_drawn: int
    eta: float
    mu: float
    wall_time_ms: float
    edge_radii: np.ndarray        # per-node connection radius in force at insertion

    def __post_init__(self):
        for name in ("nodes", "parents", "extra_edges", "edge_radii"):
            getattr(self, name).setflags(write=False)

    def edge_set(self) -> set:
        tree = {(int(min(p, c)), int(max(p, c)))
                for c, p in enumerate(self.parents) if p >= 0}
        return tree | {(int(u), int(v)) for u, v in self.extra_edges}


def _steer(x_near: np.ndarray, sample: np.ndarray, eta: float) -> np.ndarray:
    gap = sample - x_near
    dist = float(np.linalg.norm(gap))
    if dist <= eta:
        return sample
    return x_near + (eta / dist) * gap


def _stream_batches(scn_dim: int, iterations: int, rng):
    for _ in range(iterations):
        k = poisson_draw(1.0, rng)
        yield rng.random((k, scn_dim))


def rrt_build(scn: Scenario, goal: Box, iterations: int, eta: float, seed,
              start: np.ndarray | None = None) -> RrtTree:
    """Grow a tree from the scenario start toward a goal box."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    t0 = time.perf_counter()
    root = scn.start if start is None else np.asarray(start, dtype=float)
    if not is_free(scn, root):
        raise ValueError("start configuration is in collision")
    rng = make_rng(seed)
    d = scn.dimension
    nodes = np.empty((max(16, iterations), d))
    nodes[0] = root
    count = 1
    parents = [-1]
    reached = bool(goal.contains(root))
    drawn = 0
    empty_iters = 0
    for batch in _stream_batches(d, iterations, rng):
        if batch.shape[0] == 0:
            empty_iters += 1
            continue
        drawn += batch.shape[0]
        for sample in batch:
            near = int(np.argmin(np.linalg.norm(nodes[:count] - sample, axis=1)))
            x_new = _steer(nodes[near], sample, eta)
            if scn.obstacles and not segment_free(scn, nodes[near], x_new):
                continue
            if count == nodes.shape[0]:
                nodes = np.vstack([nodes, np.empty_like(nodes)])
            nodes[count] = x_new
            parents.append(near)
            count += 1
            if goal.contains(x_new):
                reached = True
    return RrtTree(nodes=nodes[:count].copy(), parents=np.array(parents, dtype=np.int64),
                   goal=goal, goal_reached=reached, iterations=iterations,
                   samples_drawn=drawn, empty_iterations=empty_iters,
                   wall_time_ms=(time.perf_counter() - t0) * 1e3)


def rrg_build(scn: Scenario, goal: Box, iterations: int, eta: float, mu: float, seed,
              gamma: float = 1.0, rst_preset="prm-star",
              start: np.ndarray | None = None) -> RrgRoadmap:
    """Grow the tree and add roadmap connections at inflated radii.

    The connection radii for an iteration come from the node count m at its
    start: (1+mu) * gamma * m^(-1/d) for node-to-node links and (1+mu) times
    the query preset for the extra start connection, both capped by eta.
    """
    if eta <= 0 or mu <= 0:
        raise ValueError("eta and mu must be positive")
    t0 = time.perf_counter()
    root = scn.start if start is None else np.asarray(start, dtype=float)
    if not is_free(scn, root):
        raise ValueError("start configuration is in collision")
    rng = make_rng(seed)
    d = scn.dimension
    nodes = np.empty((max(16, iterations), d))
    nodes[0] = root
    count = 1
    parents = [-1]
    extra: list[tuple[int, int]] = []
    radii = [0.0]
    reached = bool(goal.contains(root))
    drawn = 0
    for batch in _stream_batches(d, iterations, rng):
        m = count  # node count at iteration start fixes this iteration's radii
        r_conn = min((1.0 + mu) * gamma * m ** (-1.0 / d), eta)
        r_start = min((1.0 + mu) * resolve_rst(rst_preset, max(m, 2), d), eta)
        drawn += batch.shape[0]
        for sample in batch:
            near = int(np.argmin(np.linalg.norm(nodes[:count] - sample, axis=1)))
            x_new = _steer(nodes[near], sample, eta)
            if scn.obstacles and not segment_free(scn, nodes[near], x_new):
                continue
            new_id = count
            if count == nodes.shape[0]:
                nodes = np.vstack([nodes, np.empty_like(nodes)])
            nodes[count] = x_new
            parents.append(near)
            radii.append(r_conn)
            count += 1
            # roadmap-style connections among nodes present before insertion
            dist = np.linalg.norm(nodes[:new_id] - x_new, axis=1)
            cand = np.nonzero(dist <= r_conn)[0]
            cand = cand[cand != near]
            if scn.obstacles and cand.size:
                ok = segments_free(scn, nodes[cand], np.broadcast_to(x_new, (cand.size, d)))
                cand = cand[ok]
            extra.extend((int(c), new_id) for c in cand)
            # supplementary connection to the root at the inflated query radius
            if 0 not in cand and near != 0:
                if float(np.linalg.norm(x_new - root)) <= r_start:
                    if not scn.obstacles or segment_free(scn, root, x_new):
                        extra.append((0, new_id))
            if goal.contains(x_new):
                reached = True
    extra_arr = np.array(sorted(set(extra)), dtype=np.int64) if extra \
        else np.empty((0, 2), dtype=np.int64)
    return RrgRoadmap(nodes=nodes[:count].copy(), parents=np.array(parents, dtype=np.int64),
                      extra_edges=extra_arr, goal=goal, goal_reached=reached,
                      iterations=iterations, samples_drawn=drawn, eta=eta, mu=mu,
                      wall_time_ms=(time.perf_counter() - t0) * 1e3,
                      edge_radii=np.array(radii))
