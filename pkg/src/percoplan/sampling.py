"""Poisson point process generation with reproducible, splittable seeding.

All randomness flows through counter-based Philox generators derived from a
64-bit seed via ``SeedSequence`` spawn keys, so parallel trials get
independent substreams and identical seeds reproduce identical point sets
bit for bit.

The Poisson sampler is exact: inversion by sequential search below a small
mean, and a sum over equal sub-means above it.  No normal approximation is
ever used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Box

_SMALL_MEAN = 30.0


def make_rng(seed, *key) -> np.random.Generator:
    """Philox generator for ``seed``, optionally on substream ``key``."""
    if isinstance(seed, np.random.Generator):
        if key:
            raise ValueError("cannot derive a keyed substream from a live generator")
        return seed
    if isinstance(seed, np.random.SeedSequence):
        if key:
            ss = np.random.SeedSequence(entropy=seed.entropy,
                                        spawn_key=tuple(seed.spawn_key) + tuple(key))
        else:
            ss = seed
    else:
        ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))


def stream_key_seed(seed: int, *key) -> int:
    """Stable 32-bit integer identifying the (seed, key) substream."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(key))
    return int(ss.generate_state(1)[0])


def _poisson_small_vec(means: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Vectorized sequential-search inversion, valid for means < ~30."""
    means = np.asarray(means, dtype=float)
    u = rng.random(means.shape)
    p = np.exp(-means)
    cdf = p.copy()
    k = np.zeros(means.shape, dtype=np.int64)
    active = u > cdf
    # Beyond this many terms the residual tail is below float resolution.
    cap = int(np.ceil(means.max() + 12.0 * math.sqrt(means.max() + 1.0) + 30.0)) if means.size else 0
    step = 0
    while active.any() and step < cap:
        step += 1
        p = p * means / step
        cdf = cdf + p
        k[active] = step
        active = u > cdf
    return k


def poisson_draw(mean: float, rng: np.random.Generator) -> int:
    """Exact Poisson sample.

    Means below 30 use sequential-search inversion directly; larger means are
    split into equal chunks below 30 and the chunk draws are summed, which
    preserves exactness without special-function evaluations.
    """
    if mean < 0:
        raise ValueError("mean must be nonnegative")
    if mean == 0:
        return 0
    if mean < _SMALL_MEAN:
        return int(_poisson_small_vec(np.array([mean]), rng)[0])
    parts = int(math.ceil(mean / _SMALL_MEAN))
    return int(_poisson_small_vec(np.full(parts, mean / parts), rng).sum())


@dataclass(frozen=True)
class PointProcessSample:
    """A realized point set on [0,1]^d (or a sub-box) with its provenance."""

    points: np.ndarray
    density: float
    mode: str
    seed: int
    domain: Box

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2:
            raise ValueError("points must be an (n, d) array")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


def unit_box(d: int) -> Box:
    return Box(np.zeros(d), np.ones(d))


def sample_ppp(density: float, domain: Box, seed) -> PointProcessSample:
    """Poisson point process of the given density restricted to ``domain``.

    Draws N ~ Poisson(density * |domain|), then N i.i.d. uniform points.
    Identical seeds give identical point lists.
    """
    if density <= 0:
        raise ValueError("density must be positive")
    vol = domain.volume()
    if vol <= 0:
        raise ValueError("domain has zero volume")
    rng = make_rng(seed)
    n = poisson_draw(density * vol, rng)
    extent = domain.max_corner - domain.min_corner
    pts = domain.min_corner + rng.random((n, domain.dimension)) * extent
    return PointProcessSample(points=pts, density=float(density), mode="poisson-batch",
                              seed=_seed_repr(seed), domain=domain)


def sample_binomial(n: int, domain: Box, seed) -> PointProcessSample:
    """Binomial point process: exactly n i.i.d. uniform points."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed)
    extent = domain.max_corner - domain.min_corner
    pts = domain.min_corner + rng.random((n, domain.dimension)) * extent
    return PointProcessSample(points=pts, density=float(n) / domain.volume(), mode="binomial",
                              seed=_seed_repr(seed), domain=domain)


def _seed_repr(seed) -> int:
    if isinstance(seed, (int, np.integer)):
        return int(seed)
    return -1  # live generator or spawned sequence; identity tracked by caller


@dataclass
class IncrementalStream:
    """Iteration state for the incremental point process.

    Each call to :func:`incremental_ppp_next` draws a Poisson(1) batch of
    uniform points; the union of the first n batches is distributed exactly
    like a batch process of density n.
    """

    dimension: int
    iteration_counter: int = 0
    batch_sizes: list = field(default_factory=list)


def incremental_ppp_next(stream: IncrementalStream, rng: np.random.Generator) -> np.ndarray:
    """Next Poisson(1)-sized batch of uniform points in [0,1]^d."""
    k = poisson_draw(1.0, rng)
    pts = rng.random((k, stream.dimension))
    stream.iteration_counter += 1
    stream.batch_sizes.append(k)
    return pts


def points_to_csv(points: np.ndarray, path) -> None:
    """Write one row per point with header x0..x{d-1}."""
    pts = np.asarray(points, dtype=float)
    header = ",".join(f"x{i}" for i in range(pts.shape[1]))
    np.savetxt(path, pts, delimiter=",", header=header, comments="", fmt="%.17g")
