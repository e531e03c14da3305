"""Free-space models on [0,1]^d with axis-aligned box obstacles.

Obstacles are closed: boundary contact counts as collision.  Built-in
benchmark scenarios cover the obstacle-free hypercube, a grid of 2^d
sub-cube obstacles, and a two-wall corridor in the plane whose free strip
is wider than any single connection edge can span.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .geometry import Box, as_point, segments_box_hits, segment_box_interval


class ScenarioError(Exception):
    """Raised for invalid scenario definitions or malformed scenario files."""


@dataclass(frozen=True)
class Scenario:
    """Problem instance: obstacles plus start and target configurations."""

    dimension: int
    obstacles: tuple
    start: np.ndarray
    target: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        if self.dimension < 2:
            raise ScenarioError("dimension must be >= 2")
        s = as_point(self.start, dim=self.dimension)
        t = as_point(self.target, dim=self.dimension)
        s.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "target", t)
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        for box in self.obstacles:
            if box.dimension != self.dimension:
                raise ScenarioError("obstacle dimension mismatch")
        if not is_free(self, s):
            raise ScenarioError("start configuration is in collision")
        if not is_free(self, t):
            raise ScenarioError("target configuration is in collision")

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "obstacles": [{"min": box.min_corner.tolist(), "max": box.max_corner.tolist()}
                          for box in self.obstacles],
            "start": self.start.tolist(),
            "target": self.target.tolist(),
            "name": self.name,
        }

    @staticmethod
    def from_dict(data: dict) -> "Scenario":
        try:
            obstacles = tuple(Box(np.asarray(o["min"], dtype=float),
                                  np.asarray(o["max"], dtype=float))
                              for o in data.get("obstacles", []))
            return Scenario(dimension=int(data["dimension"]), obstacles=obstacles,
                            start=np.asarray(data["start"], dtype=float),
                            target=np.asarray(data["target"], dtype=float),
                            name=str(data.get("name", "custom")))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"malformed scenario data: {exc}") from exc

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)

    @staticmethod
    def load(path) -> "Scenario":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
        return Scenario.from_dict(data)


# --- collision checks ---


def is_free(scn: Scenario, x) -> bool:
    """True iff x lies in no (closed) obstacle."""
    p = as_point(x, dim=scn.dimension)
    return not any(box.contains(p) for box in scn.obstacles)


def points_free(scn: Scenario, pts: np.ndarray) -> np.ndarray:
    """Vectorized is_free over an (m, d) array."""
    pts = np.asarray(pts, dtype=float)
    free = np.ones(pts.shape[0], dtype=bool)
    for box in scn.obstacles:
        inside = np.all((pts >= box.min_corner) & (pts <= box.max_corner), axis=1)
        free &= ~inside
    return free


def segment_free(scn: Scenario, a, b) -> bool:
    """Exact test that the closed segment [a, b] avoids every obstacle."""
    pa = as_point(a, dim=scn.dimension)
    pb = as_point(b, dim=scn.dimension)
    for box in scn.obstacles:
        t0, t1 = segment_box_interval(pa, pb, box.min_corner, box.max_corner)
        if t0 <= t1:
            return False
    return True


def segments_free(scn: Scenario, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Vectorized segment_free over (m, d) endpoint arrays."""
    a = np.asarray(starts, dtype=float)
    b = np.asarray(ends, dtype=float)
    ok = np.ones(a.shape[0], dtype=bool)
    for box in scn.obstacles:
        if not ok.any():
            break
        ok &= ~segments_box_hits(a, b, box.min_corner, box.max_corner)
    return ok


def clearance(scn: Scenario, x) -> float:
    """Distance from x to the obstacle union and to the cube complement."""
    p = as_point(x, dim=scn.dimension)
    best = float(min(np.min(p), np.min(1.0 - p)))
    for box in scn.obstacles:
        best = min(best, box.distance_to(p))
    return max(best, 0.0)


# --- built-in scenarios ---


def make_empty_hypercube(d: int) -> Scenario:
    """Obstacle-free cube with start 0.1*(1,..,1) and target 0.9*(1,..,1)."""
    return Scenario(dimension=d, obstacles=(),
                    start=np.full(d, 0.1), target=np.full(d, 0.9),
                    name=f"empty-hypercube:{d}")


def grid_obstacle_side(d: int) -> float:
    """Side of the centered obstacle covering 25% of a half-side sub-cube."""
    return 0.5 * 0.25 ** (1.0 / d)


def grid_diagonal_offset(d: int) -> float:
    """Diagonal coordinate equidistant from the origin and the first obstacle.

    With the obstacle's near corner at c = 0.25 - side/2 on every axis, the
    point a*(1,..,1) is equidistant from the origin and the obstacle when
    a = c / 2 (both distances are multiples of sqrt(d)).
    """
    near_corner = 0.25 - grid_obstacle_side(d) / 2.0
    return near_corner / 2.0


def make_grid_obstacles(d: int) -> Scenario:
    """2^d sub-cubes, each holding a centered cubical obstacle of 25% volume."""
    if not 2 <= d <= 8:
        raise ScenarioError("grid-obstacles supports 2 <= d <= 8")
    side = grid_obstacle_side(d)
    half = side / 2.0
    obstacles = []
    for idx in range(2 ** d):
        center = np.array([(0.25 if (idx >> axis) & 1 == 0 else 0.75) for axis in range(d)])
        obstacles.append(Box(center - half, center + half))
    a = grid_diagonal_offset(d)
    return Scenario(dimension=d, obstacles=tuple(obstacles),
                    start=np.full(d, a), target=np.full(d, 1.0 - a),
                    name=f"grid-obstacles:{d}")


# Corridor geometry: two vertical walls with openings on opposite ends leave a
# free strip of width 0.55 between their inner faces; any start-target path
# must traverse the strip, and no single straight edge from start or target
# reaches into it.
_CORRIDOR_WALLS = (
    ((0.2, 0.0), (0.225, 0.9)),
    ((0.775, 0.1), (0.8, 1.0)),
)


def make_corridor() -> Scenario:
    """Planar two-wall corridor forcing every solution across a 0.55 strip."""
    obstacles = tuple(Box(np.array(lo), np.array(hi)) for lo, hi in _CORRIDOR_WALLS)
    return Scenario(dimension=2, obstacles=obstacles,
                    start=np.array([0.1, 0.5]), target=np.array([0.9, 0.5]),
                    name="corridor")


def corridor_strip_width() -> float:
    """Width of the free strip between the corridor walls."""
    return _CORRIDOR_WALLS[1][0][0] - _CORRIDOR_WALLS[0][1][0]


_BUILTIN_PREFIXES = ("empty-hypercube", "grid-obstacles", "corridor")


def load_scenario(ref: str) -> Scenario:
    """Resolve a builtin name (``empty-hypercube:d`` etc.) or a file path."""
    if ref == "corridor":
        return make_corridor()
    for prefix, factory in (("empty-hypercube", make_empty_hypercube),
                            ("grid-obstacles", make_grid_obstacles)):
        if ref.startswith(prefix + ":"):
            try:
                d = int(ref.split(":", 1)[1])
            except ValueError:
                raise ScenarioError(f"bad builtin scenario dimension in {ref!r}") from None
            return factory(d)
    return Scenario.load(ref)


# --- cost maps ---


@dataclass(frozen=True)
class CostMap:
    """Analytic cost field over the cube, evaluated on (m, d) point arrays.

    Kinds: ``coordinate-distance`` |x_axis - center|, ``point-distance``
    ||x - p||, ``clearance`` (distance to obstacles and cube boundary,
    needs a scenario), and ``constant``.  ``scale`` multiplies the value,
    so -1 turns clearance into a cost to be driven down.
    """

    kind: str
    params: dict = field(default_factory=dict)
    scale: float = 1.0

    def bind(self, scn: Scenario | None = None):
        """Return a vectorized evaluator pts -> values."""
        kind = self.kind
        if kind == "coordinate-distance":
            axis = int(self.params.get("axis", 0))
            center = float(self.params.get("center", 0.5))
            return lambda pts: self.scale * np.abs(np.asarray(pts)[:, axis] - center)
        if kind == "point-distance":
            p = np.asarray(self.params["point"], dtype=float)
            return lambda pts: self.scale * np.linalg.norm(np.asarray(pts) - p, axis=1)
        if kind == "constant":
            value = float(self.params.get("value", 0.0))
            return lambda pts: np.full(np.asarray(pts).shape[0], self.scale * value)
        if kind == "clearance":
            if scn is None:
                raise ValueError("clearance cost map needs a scenario")
            return lambda pts: self.scale * _clearance_vec(scn, np.asarray(pts, dtype=float))
        raise ValueError(f"unknown cost map kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params), "scale": self.scale}

    @staticmethod
    def from_dict(data: dict) -> "CostMap":
        return CostMap(kind=data["kind"], params=dict(data.get("params", {})),
                       scale=float(data.get("scale", 1.0)))


def _clearance_vec(scn: Scenario, pts: np.ndarray) -> np.ndarray:
    vals = np.minimum(pts.min(axis=1), (1.0 - pts).min(axis=1))
    for box in scn.obstacles:
        gap = np.maximum(np.maximum(box.min_corner - pts, pts - box.max_corner), 0.0)
        vals = np.minimum(vals, np.linalg.norm(gap, axis=1))
    return np.maximum(vals, 0.0)
