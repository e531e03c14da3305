"""Dimension-generic Euclidean primitives and the two path cost functionals.

Points are plain float arrays.  Boxes and segments are closed sets: touching
counts as intersecting, with a fixed absolute tolerance of 1e-9 on the
predicates.  Paths are polylines over [0,1]^d, so the length functional is the
plain sum of consecutive waypoint distances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PREDICATE_TOL = 1e-9


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Validate and return a 1-D float array of coordinates."""
    p = np.asarray(x, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("a point must be a 1-D sequence of at least one coordinate")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    if dim is not None and p.size != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {p.size}")
    return p


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned box [min_corner, max_corner]."""

    min_corner: np.ndarray
    max_corner: np.ndarray

    def __post_init__(self):
        lo = as_point(self.min_corner)
        hi = as_point(self.max_corner, dim=lo.size)
        if np.any(lo > hi):
            raise ValueError("min_corner must be <= max_corner componentwise")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "min_corner", lo)
        object.__setattr__(self, "max_corner", hi)

    @property
    def dimension(self) -> int:
        return self.min_corner.size

    def contains(self, x) -> bool:
        """Closed-box membership."""
        p = as_point(x, dim=self.dimension)
        return bool(np.all(p >= self.min_corner) and np.all(p <= self.max_corner))

    def distance_to(self, x) -> float:
        """Euclidean distance from x to the box (0 if inside)."""
        p = as_point(x, dim=self.dimension)
        gap = np.maximum(np.maximum(self.min_corner - p, p - self.max_corner), 0.0)
        return float(np.linalg.norm(gap))

    def volume(self) -> float:
        return float(np.prod(self.max_corner - self.min_corner))


@dataclass(frozen=True)
class Segment:
    """Closed straight segment between two configurations."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = as_point(self.a)
        b = as_point(self.b, dim=a.size)
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def dimension(self) -> int:
        return self.a.size


@dataclass(frozen=True)
class Path:
    """Polyline with at least two waypoints, all of the same dimension."""

    waypoints: np.ndarray = field()

    def __post_init__(self):
        w = np.asarray(self.waypoints, dtype=float)
        if w.ndim != 2 or w.shape[0] < 2:
            raise ValueError("a path needs at least two waypoints")
        if not np.all(np.isfinite(w)):
            raise ValueError("waypoints must be finite")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "waypoints", w)

    @property
    def dimension(self) -> int:
        return self.waypoints.shape[1]

    @property
    def has_duplicate_waypoints(self) -> bool:
        """True when consecutive waypoints coincide (allowed but flagged)."""
        return bool(np.any(np.all(self.waypoints[1:] == self.waypoints[:-1], axis=1)))


def euclidean_distance(a, b) -> float:
    """Standard Euclidean distance between two points of equal dimension."""
    pa = as_point(a)
    pb = as_point(b, dim=pa.size)
    return float(np.linalg.norm(pa - pb))


def path_length(path: Path | np.ndarray) -> float:
    """Total polyline length: sum of consecutive waypoint distances."""
    w = path.waypoints if isinstance(path, Path) else np.asarray(path, dtype=float)
    return float(np.linalg.norm(np.diff(w, axis=0), axis=1).sum())


def sample_segment(a: np.ndarray, b: np.ndarray, resolution: float) -> np.ndarray:
    """Points along [a, b] at spacing <= resolution, endpoints included."""
    length = float(np.linalg.norm(b - a))
    n = max(1, int(np.ceil(length / resolution)))
    t = np.linspace(0.0, 1.0, n + 1)
    return a[None, :] + t[:, None] * (b - a)[None, :]


def path_bottleneck(path: Path | np.ndarray, cost_map, resolution: float) -> float:
    """Max of the cost map over waypoints and along each segment.

    ``cost_map`` must evaluate on an (m, d) array of points and return (m,)
    values.  The continuum maximum is approximated by sampling each segment at
    spacing <= resolution, so the result is monotone nonincreasing in
    ``resolution`` and its error is bounded by Lip(M) * resolution for
    Lipschitz maps.
    """
    if resolution <= 0.0:
        raise ValueError("resolution must be positive")
    w = path.waypoints if isinstance(path, Path) else np.asarray(path, dtype=float)
    best = -np.inf
    for i in range(w.shape[0] - 1):
        pts = sample_segment(w[i], w[i + 1], resolution)
        vals = np.asarray(cost_map(pts), dtype=float)
        if vals.shape != (pts.shape[0],):
            raise ValueError("cost map must return one finite value per sampled point")
        if not np.all(np.isfinite(vals)):
            raise ValueError("cost map undefined (non-finite) at a sampled point")
        best = max(best, float(vals.max()))
    return best


# --- segment / box intersection (slab clipping) ---


def segment_box_interval(a: np.ndarray, b: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                         tol: float = PREDICATE_TOL) -> tuple[float, float]:
    """Parameter interval [t0, t1] of a + t(b-a) inside the tol-expanded box.

    Returns an empty interval (t0 > t1) when the closed segment misses the box.
    """
    d = b - a
    t0, t1 = 0.0, 1.0
    for i in range(a.size):
        if d[i] == 0.0:
            if a[i] < lo[i] - tol or a[i] > hi[i] + tol:
                return 1.0, 0.0
        else:
            u = (lo[i] - tol - a[i]) / d[i]
            v = (hi[i] + tol - a[i]) / d[i]
            if u > v:
                u, v = v, u
            t0 = max(t0, u)
            t1 = min(t1, v)
            if t0 > t1:
                return t0, t1
    return t0, t1


def segment_box_intersects(seg: Segment | tuple, box: Box) -> bool:
    """True iff the closed segment meets the closed box (slab method)."""
    if isinstance(seg, Segment):
        a, b = seg.a, seg.b
    else:
        a, b = (as_point(p) for p in seg)
    _check_same_dim(a, b)
    if a.size != box.dimension:
        raise ValueError(f"dimension mismatch: segment is {a.size}-d, box is {box.dimension}-d")
    t0, t1 = segment_box_interval(a, b, box.min_corner, box.max_corner)
    return t0 <= t1


def segments_box_hits(starts: np.ndarray, ends: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                      tol: float = PREDICATE_TOL) -> np.ndarray:
    """Vectorized slab test: which of the (m, d) segments meet the box."""
    a = np.asarray(starts, dtype=float)
    b = np.asarray(ends, dtype=float)
    d = b - a
    m = a.shape[0]
    t0 = np.zeros(m)
    t1 = np.ones(m)
    alive = np.ones(m, dtype=bool)
    for i in range(a.shape[1]):
        ai, di = a[:, i], d[:, i]
        par = di == 0.0
        alive &= ~par | ((ai >= lo[i] - tol) & (ai <= hi[i] + tol))
        with np.errstate(divide="ignore", invalid="ignore"):
            u = (lo[i] - tol - ai) / di
            v = (hi[i] + tol - ai) / di
        u2 = np.minimum(u, v)
        v2 = np.maximum(u, v)
        nonpar = ~par
        t0 = np.where(nonpar, np.maximum(t0, u2), t0)
        t1 = np.where(nonpar, np.minimum(t1, v2), t1)
    return alive & (t0 <= t1)
