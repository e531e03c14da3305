"""Distributional and determinism tests for the point process generators."""

import math

import numpy as np
import pytest
from scipy import stats

from percoplan.geometry import Box
from percoplan.sampling import (IncrementalStream, incremental_ppp_next, make_rng,
                                poisson_draw, points_to_csv, sample_binomial,
                                sample_ppp, unit_box)
from percoplan.sampling import _poisson_small_vec


def draws(mean, size, seed=0):
    rng = make_rng(seed)
    if mean < 30:
        return _poisson_small_vec(np.full(size, float(mean)), rng)
    return np.array([poisson_draw(mean, rng) for _ in range(size)])


# --- poisson_draw ---

def test_poisson_zero_mean():
    rng = make_rng(0)
    assert all(poisson_draw(0.0, rng) == 0 for _ in range(100))


def test_poisson_negative_mean():
    with pytest.raises(ValueError):
        poisson_draw(-1.0, make_rng(0))


def test_poisson_mass_at_zero_mean_two():
    ks = draws(2.0, 1_000_000, seed=11)
    p0 = float(np.mean(ks == 0))
    assert p0 == pytest.approx(math.exp(-2.0), abs=1e-3)


def test_poisson_large_mean_moments():
    ks = draws(1000.0, 100_000, seed=12)
    # 3-sigma bands for the sample mean and variance of Poisson(1000)
    se_mean = math.sqrt(1000.0 / ks.size)
    assert abs(ks.mean() - 1000.0) < 3 * se_mean
    se_var = math.sqrt((1000.0 + 2 * 1000.0 ** 2) / ks.size)
    assert abs(ks.var() - 1000.0) < 3 * se_var


def chi2_gof_pvalue(sample, mean):
    """Chi-square goodness-of-fit against the Poisson pmf, tail-binned."""
    sample = np.asarray(sample)
    kmax = int(sample.max())
    ks = np.arange(kmax + 1)
    pmf = stats.poisson.pmf(ks, mean)
    observed = np.bincount(sample, minlength=kmax + 1).astype(float)
    expected = pmf * sample.size
    tail = sample.size - expected.sum()
    expected = np.append(expected, max(tail, 1e-12))
    observed = np.append(observed, 0.0)
    # merge bins with small expectation into their neighbor
    keep_obs, keep_exp = [], []
    acc_o, acc_e = 0.0, 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= 5.0:
            keep_obs.append(acc_o)
            keep_exp.append(acc_e)
            acc_o, acc_e = 0.0, 0.0
    if acc_e > 0:
        keep_obs[-1] += acc_o
        keep_exp[-1] += acc_e
    keep_exp = np.array(keep_exp) * (sum(keep_obs) / sum(keep_exp))
    chi2, p = stats.chisquare(keep_obs, keep_exp)
    return p


@pytest.mark.parametrize("mean,size", [(0.5, 200_000), (2.0, 200_000),
                                       (30.0, 100_000), (1000.0, 50_000)])
def test_poisson_chi_square_gof(mean, size):
    sample = draws(mean, size, seed=int(mean * 7 + 3))
    assert chi2_gof_pvalue(sample, mean) > 0.001


# --- sample_ppp ---

def test_ppp_count_mean():
    counts = [len(sample_ppp(1000.0, unit_box(2), make_rng(5, i))) for i in range(200)]
    se = math.sqrt(1000.0 / len(counts))
    assert abs(np.mean(counts) - 1000.0) < 3 * se


def test_ppp_determinism():
    a = sample_ppp(500.0, unit_box(3), 123)
    b = sample_ppp(500.0, unit_box(3), 123)
    assert np.array_equal(a.points, b.points)
    assert a.mode == "poisson-batch"


def test_ppp_points_inside_domain():
    dom = Box([0.2, 0.3], [0.6, 0.9])
    s = sample_ppp(2000.0, dom, 9)
    assert np.all(s.points >= dom.min_corner) and np.all(s.points <= dom.max_corner)


def test_ppp_zero_volume_domain():
    with pytest.raises(ValueError):
        sample_ppp(10.0, Box([0.1, 0.1], [0.1, 0.9]), 0)


def test_ppp_disjoint_subbox_counts_uncorrelated():
    left = Box([0.0, 0.0], [0.5, 1.0])
    right = Box([0.5, 0.0], [1.0, 1.0])
    counts = np.empty((10_000, 2))
    for i in range(counts.shape[0]):
        pts = sample_ppp(40.0, unit_box(2), make_rng(31, i)).points
        counts[i, 0] = np.sum(pts[:, 0] < 0.5)
        counts[i, 1] = np.sum(pts[:, 0] >= 0.5)
    corr = np.corrcoef(counts.T)[0, 1]
    assert abs(corr) < 0.01
    del left, right


def test_ppp_four_way_partition_independence():
    # counts in the four quadrants must be independent Poissons: chi-square
    # test of each pair against the product of marginals
    n_trials = 10_000
    quad_counts = np.empty((n_trials, 4), dtype=int)
    for i in range(n_trials):
        pts = sample_ppp(12.0, unit_box(2), make_rng(77, i)).points
        qx = (pts[:, 0] >= 0.5).astype(int)
        qy = (pts[:, 1] >= 0.5).astype(int)
        for q in range(4):
            quad_counts[i, q] = int(np.sum((qx * 2 + qy) == q))
    for a in range(4):
        for b in range(a + 1, 4):
            ca = np.minimum(quad_counts[:, a], 8)
            cb = np.minimum(quad_counts[:, b], 8)
            table = np.zeros((9, 9))
            for x, y in zip(ca, cb):
                table[x, y] += 1
            table = table[table.sum(axis=1) > 0][:, table.sum(axis=0) > 0]
            _, p, _, _ = stats.chi2_contingency(table)
            assert p > 0.001, f"quadrants {a},{b} dependent (p={p})"


def test_ppp_restriction_property():
    # counts of a full-cube process restricted to a sub-box match direct
    # sampling on the sub-box
    sub = Box([0.1, 0.2], [0.5, 0.7])
    restricted, direct = [], []
    for i in range(4000):
        pts = sample_ppp(60.0, unit_box(2), make_rng(41, i)).points
        inside = np.all((pts >= sub.min_corner) & (pts <= sub.max_corner), axis=1)
        restricted.append(int(inside.sum()))
        direct.append(len(sample_ppp(60.0, sub, make_rng(42, i))))
    ks = stats.ks_2samp(restricted, direct)
    assert ks.pvalue > 0.001


# --- incremental stream ---

def test_incremental_mean_batch_size():
    rng = make_rng(55)
    stream = IncrementalStream(dimension=2)
    total = 0
    iters = 100_000
    for _ in range(iters):
        total += incremental_ppp_next(stream, rng).shape[0]
    assert abs(total / iters - 1.0) < 0.01
    assert stream.iteration_counter == iters


def test_incremental_accumulated_count():
    rng = make_rng(56)
    stream = IncrementalStream(dimension=2)
    total = sum(incremental_ppp_next(stream, rng).shape[0] for _ in range(10_000))
    assert abs(total - 10_000) < 300


def test_incremental_empty_iteration_frequency():
    rng = make_rng(57)
    stream = IncrementalStream(dimension=3)
    empties = sum(incremental_ppp_next(stream, rng).shape[0] == 0 for _ in range(100_000))
    assert abs(empties / 100_000 - math.exp(-1.0)) < 0.005


def test_incremental_vs_batch_counts():
    # accumulated counts after n iterations against one batch draw
    n = 40
    reps = 3000
    inc = np.empty(reps, dtype=int)
    bat = np.empty(reps, dtype=int)
    for i in range(reps):
        rng = make_rng(61, i)
        stream = IncrementalStream(dimension=2)
        inc[i] = sum(incremental_ppp_next(stream, rng).shape[0] for _ in range(n))
        bat[i] = len(sample_ppp(float(n), unit_box(2), make_rng(62, i)))
    hi = int(max(inc.max(), bat.max()))
    bins = np.arange(0, hi + 2)
    ti = np.histogram(inc, bins=bins)[0]
    tb = np.histogram(bat, bins=bins)[0]
    table = np.stack([ti, tb])
    table = table[:, table.sum(axis=0) >= 10]
    _, p, _, _ = stats.chi2_contingency(table)
    assert p > 0.001


# --- binomial mode ---

def test_binomial_exact_count():
    s = sample_binomial(5, unit_box(4), 1)
    assert len(s) == 5 and s.mode == "binomial"


def test_binomial_determinism():
    assert np.array_equal(sample_binomial(64, unit_box(2), 3).points,
                          sample_binomial(64, unit_box(2), 3).points)


def test_binomial_coordinate_mean():
    s = sample_binomial(1_000_000, unit_box(2), 17)
    means = s.points.mean(axis=0)
    assert np.all(np.abs(means - 0.5) < 0.002)


def test_points_csv_header(tmp_path):
    s = sample_binomial(10, unit_box(3), 2)
    out = tmp_path / "pts.csv"
    points_to_csv(s.points, out)
    lines = out.read_text().splitlines()
    assert lines[0] == "x0,x1,x2"
    assert len(lines) == 11
    parsed = np.loadtxt(out, delimiter=",", skiprows=1)
    assert np.array_equal(parsed, s.points)
