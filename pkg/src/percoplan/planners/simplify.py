"""Path postprocessing: seeded randomized shortcutting plus vertex pruning."""

from __future__ import annotations

import numpy as np

from ..sampling import make_rng
from ..scenario import Scenario, segment_free

DEFAULT_SHORTCUT_ATTEMPTS = 200


def _point_at(waypoints: np.ndarray, cum: np.ndarray, s: float) -> tuple[int, np.ndarray]:
    """Point at arc length s; returns (segment index, coordinates)."""
    i = int(np.searchsorted(cum, s, side="right") - 1)
    i = min(i, waypoints.shape[0] - 2)
    seg_len = cum[i + 1] - cum[i]
    t = 0.0 if seg_len == 0 else (s - cum[i]) / seg_len
    return i, waypoints[i] + t * (waypoints[i + 1] - waypoints[i])


def _prune_vertices(scn: Scenario, waypoints: np.ndarray) -> np.ndarray:
    """Drop interior waypoints whose removal keeps the path collision-free."""
    pts = [w for w in waypoints]
    changed = True
    while changed and len(pts) > 2:
        changed = False
        i = 1
        while i < len(pts) - 1:
            if segment_free(scn, pts[i - 1], pts[i + 1]):
                del pts[i]
                changed = True
            else:
                i += 1
    return np.array(pts)


def simplify_path(scn: Scenario, path: np.ndarray, seed=0,
                  attempts: int = DEFAULT_SHORTCUT_ATTEMPTS) -> np.ndarray:
    """Shorten a collision-free polyline without leaving free space.

    Random shortcuts splice straight segments between arc-length positions,
    then redundant waypoints are pruned.  Endpoints are preserved and the
    result is never longer than the input.
    """
    w = np.asarray(path, dtype=float)
    if w.ndim != 2 or w.shape[0] < 2:
        raise ValueError("path needs at least two waypoints")
    for i in range(w.shape[0] - 1):
        if not segment_free(scn, w[i], w[i + 1]):
            raise ValueError("input path is in collision")
    rng = make_rng(seed)
    for _ in range(attempts):
        if w.shape[0] <= 2:
            break
        seg = np.linalg.norm(np.diff(w, axis=0), axis=1)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        total = cum[-1]
        if total == 0:
            break
        s1, s2 = np.sort(rng.random(2) * total)
        i1, p1 = _point_at(w, cum, s1)
        i2, p2 = _point_at(w, cum, s2)
        if i2 <= i1:
            continue
        if segment_free(scn, p1, p2):
            w = np.vstack([w[: i1 + 1], p1[None, :], p2[None, :], w[i2 + 1:]])
    return _prune_vertices(scn, w)
