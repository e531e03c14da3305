"""Tests for Euclidean primitives and the path cost functionals."""

import math

import numpy as np
import pytest

from percoplan.geometry import (Box, Path, Segment, euclidean_distance, path_bottleneck,
                                path_length, sample_segment, segment_box_intersects,
                                segment_box_interval, segments_box_hits)

from oracles import dense_bottleneck, dense_segment_in_box


# --- euclidean_distance ---

def test_distance_345():
    assert euclidean_distance((0, 0), (3, 4)) == pytest.approx(5.0)


def test_distance_identity():
    assert euclidean_distance((0.3, 0.7, 0.1), (0.3, 0.7, 0.1)) == 0.0


def test_distance_unit_cube_diagonal():
    # direct formula: sqrt(1^2 + 1^2 + 1^2)
    assert euclidean_distance((0, 0, 0), (1, 1, 1)) == pytest.approx(math.sqrt(3.0), abs=1e-12)
    assert euclidean_distance((0, 0, 0), (1, 1, 1)) == pytest.approx(1.7320508, abs=1e-7)


def test_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        euclidean_distance((0, 0), (1, 1, 1))


def test_distance_symmetry_and_triangle():
    rng = np.random.default_rng(1)
    for _ in range(300):
        d = int(rng.integers(1, 6))
        a, b, c = rng.random((3, d))
        ab = euclidean_distance(a, b)
        assert ab == euclidean_distance(b, a)
        assert euclidean_distance(a, c) <= ab + euclidean_distance(b, c) + 1e-12 * (ab + 1)


def test_point_validation():
    with pytest.raises(ValueError):
        euclidean_distance((np.nan, 0.0), (0.0, 0.0))


# --- path_length ---

def test_path_length_l_shape():
    assert path_length(Path(np.array([[0, 0], [1, 0], [1, 1]]))) == pytest.approx(2.0)


def test_path_length_degenerate():
    p = Path(np.array([[0.0, 0.0], [0.0, 0.0]]))
    assert path_length(p) == 0.0
    assert p.has_duplicate_waypoints


def test_path_length_diagonal():
    p = Path(np.array([[0.1, 0.1], [0.9, 0.9]]))
    assert path_length(p) == pytest.approx(0.8 * math.sqrt(2.0), abs=1e-12)


def test_path_requires_two_waypoints():
    with pytest.raises(ValueError):
        Path(np.array([[0.0, 0.0]]))


def test_path_length_collinear_insertion_invariant():
    rng = np.random.default_rng(2)
    for _ in range(100):
        w = rng.random((4, 3))
        base = path_length(w)
        i = int(rng.integers(0, 3))
        mid = 0.5 * (w[i] + w[i + 1])
        refined = np.insert(w, i + 1, mid, axis=0)
        assert path_length(refined) == pytest.approx(base, rel=1e-12)


# --- path_bottleneck ---

def test_bottleneck_on_zero_set():
    fn = lambda pts: np.abs(pts[:, 1] - 0.5)
    val = path_bottleneck(np.array([[0.1, 0.5], [0.9, 0.5]]), fn, resolution=1e-3)
    assert val == 0.0


def test_bottleneck_max_at_endpoint():
    fn = lambda pts: pts[:, 0]
    for res in (0.5, 1e-2, 1e-4):
        assert path_bottleneck(np.array([[0, 0], [1, 1]]), fn, res) == pytest.approx(1.0)


def test_bottleneck_vertex_maximum():
    # max of the Euclidean norm over this polyline sits at the middle vertex
    # (1, 0); dense evaluation confirms the value 1.0
    fn = lambda pts: np.linalg.norm(pts, axis=1)
    w = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.5]])
    oracle = dense_bottleneck(w, fn)
    assert oracle == pytest.approx(1.0, abs=1e-9)
    assert path_bottleneck(w, fn, resolution=1e-3) == pytest.approx(1.0, abs=1e-6)


def test_bottleneck_resolution_monotone_and_lipschitz():
    # fn is 1-Lipschitz, so halving the resolution can only reveal more of the
    # maximum, and never by more than Lip * resolution
    fn = lambda pts: np.linalg.norm(pts - np.array([0.3, 0.8]), axis=1)
    rng = np.random.default_rng(3)
    for _ in range(50):
        w = rng.random((3, 2))
        rho = 0.05
        coarse = path_bottleneck(w, fn, rho)
        fine = path_bottleneck(w, fn, rho / 2)
        assert fine + 1e-12 >= coarse
        assert fine >= coarse - 1.0 * rho
        assert coarse >= fine - 1.0 * rho


def test_bottleneck_rejects_undefined_map():
    fn = lambda pts: np.where(pts[:, 0] > 0.5, np.nan, 0.0)
    with pytest.raises(ValueError):
        path_bottleneck(np.array([[0.0, 0.0], [1.0, 0.0]]), fn, resolution=1e-2)


def test_sample_segment_spacing():
    pts = sample_segment(np.zeros(2), np.array([1.0, 0.0]), 0.3)
    gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    assert np.all(gaps <= 0.3 + 1e-12)
    assert np.allclose(pts[0], 0.0) and np.allclose(pts[-1], [1, 0])


# --- segment / box intersection ---

def test_segment_crosses_box():
    box = Box([0, 0], [1, 1])
    assert segment_box_intersects(Segment(np.array([-1, 0.5]), np.array([2, 0.5])), box)


def test_segment_disjoint_box():
    box = Box([0, 0], [1, 1])
    assert not segment_box_intersects(Segment(np.array([2, 2]), np.array([3, 3])), box)


def test_segment_touching_corner_counts():
    box = Box([0, 0], [1, 1])
    seg = Segment(np.array([1.0, 1.0]), np.array([2.0, 2.0]))
    assert segment_box_intersects(seg, box)
    # tangent through the corner point only
    seg2 = Segment(np.array([0.5, 1.5]), np.array([1.5, 0.5]))
    assert segment_box_intersects(seg2, box)


def test_segment_box_dimension_mismatch():
    with pytest.raises(ValueError):
        segment_box_intersects(Segment(np.zeros(3), np.ones(3)), Box([0, 0], [1, 1]))


def test_box_validation():
    with pytest.raises(ValueError):
        Box([1, 0], [0, 1])


def test_segment_box_oracle_agreement():
    # Dense sampling can only miss grazing intersections whose parameter
    # interval is narrower than its step, so the assertion is guarded by the
    # exact interval width.
    rng = np.random.default_rng(7)
    boxes = 20
    per_box = 5_000  # 100k cases total
    samples = 10_000
    step = 1.0 / (samples - 1)
    t = np.linspace(0.0, 1.0, samples)
    mismatches = 0
    for _ in range(boxes):
        lo = rng.random(2) * 0.6
        hi = lo + 0.05 + rng.random(2) * 0.35
        a = rng.random((per_box, 2)) * 1.4 - 0.2
        b = rng.random((per_box, 2)) * 1.4 - 0.2
        exact = segments_box_hits(a, b, lo, hi)
        t32 = t.astype(np.float32)
        for s in range(0, per_box, 500):
            e = s + 500
            inside = np.ones((e - s, samples), dtype=bool)
            for dim in range(2):
                x = a[s:e, dim, None].astype(np.float32) + \
                    t32[None, :] * (b[s:e, dim] - a[s:e, dim])[:, None].astype(np.float32)
                inside &= (x >= np.float32(lo[dim])) & (x <= np.float32(hi[dim]))
            oracle = inside.any(axis=1)
            assert not np.any(oracle & ~exact[s:e]), "oracle hit missed by exact test"
            for i in np.nonzero(exact[s:e] & ~oracle)[0]:
                t0, t1 = segment_box_interval(a[s + i], b[s + i], lo, hi)
                assert t1 - t0 <= 2 * step, "non-grazing disagreement"
                mismatches += 1
    assert mismatches < 50  # grazing cases are rare


def test_segments_box_hits_matches_scalar():
    rng = np.random.default_rng(8)
    box = Box([0.3, 0.2, 0.4], [0.7, 0.8, 0.9])
    a = rng.random((500, 3)) * 1.5 - 0.25
    b = rng.random((500, 3)) * 1.5 - 0.25
    vec = segments_box_hits(a, b, box.min_corner, box.max_corner)
    for i in range(500):
        assert vec[i] == segment_box_intersects((a[i], b[i]), box)


def test_segments_box_hits_axis_parallel():
    box = Box([0.0, 0.0], [1.0, 1.0])
    a = np.array([[0.5, -1.0], [2.0, -1.0], [0.5, 0.5]])
    b = np.array([[0.5, 2.0], [2.0, 2.0], [0.6, 0.5]])
    assert list(segments_box_hits(a, b, box.min_corner, box.max_corner)) == [True, False, True]
