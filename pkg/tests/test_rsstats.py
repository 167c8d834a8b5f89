import math
import random
from statistics import NormalDist

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsdtwist.algebra.poly import RationalPoly
from bsdtwist.curve import make_curve
from bsdtwist.rsstats import (
    GaloisClass,
    distances,
    galois_class,
    histogram,
    kde,
    kde_grid,
    ks_distance,
    normal_cdf,
    params_for_class,
    rs_params,
    silverman_bandwidth,
    wasserstein1_vs_normal,
    z_value,
)

L2 = math.log(2)


@pytest.mark.parametrize("coeffs,cls", [
    ([-2, 0, 0, 1], GaloisClass.S3),
    ([1, -3, 0, 1], GaloisClass.C3),       # x^3 - 3x + 1, discriminant 81
    ([-2, 1, -2, 1], GaloisClass.C2),       # (x - 2)(x^2 + 1)
    ([0, -1, 0, 1], GaloisClass.C1),
])
def test_galois_class(coeffs, cls):
    assert galois_class(RationalPoly.from_ints(coeffs)) is cls


@pytest.mark.parametrize("cls,mu,sigma2", [
    (GaloisClass.S3, -0.5 - 5 / 6 * L2, 1 + 7 / 6 * L2**2),
    (GaloisClass.C3, -0.5 - 2 / 3 * L2, 1 + 4 / 3 * L2**2),
    (GaloisClass.C2, -0.5 - 3 / 2 * L2, 1 + 5 / 2 * L2**2),
    (GaloisClass.C1, -0.5 - math.log(4), 1 + math.log(4) ** 2),
])
def test_closed_forms(cls, mu, sigma2):
    p = params_for_class(cls)
    assert abs(p.mu - mu) < 1e-12 and abs(p.sigma2 - sigma2) < 1e-12
    assert p.mu <= -0.5 and p.sigma2 > 1
    assert len(p.c_values) == {"S3": 6, "C3": 3, "C2": 2, "C1": 1}[cls.value]


def test_params_depend_only_on_class(e46, fixture_records):
    assert rs_params(e46) == params_for_class(GaloisClass.C2)
    seen = {}
    for rec in fixture_records:
        E = rec.curve()
        cls = galois_class(E.two_division_cubic())
        assert seen.setdefault(cls, rs_params(E)) == rs_params(E)
    assert {GaloisClass.S3, GaloisClass.C2, GaloisClass.C1} <= set(seen)


def test_z_value_examples():
    s3 = params_for_class(GaloisClass.S3)
    ll = math.log(math.log(10**6))
    want = (-0.5 * math.log(10**6) - s3.mu * ll) / math.sqrt(s3.sigma2 * ll)
    assert z_value(1, 10**6, s3) == pytest.approx(want, abs=1e-14)
    assert z_value(1, 10**6, s3) == pytest.approx(-2.01464, abs=1e-5)
    with pytest.raises(ValueError):
        z_value(1, 15, s3)
    with pytest.raises(ValueError):
        z_value(0, 100, s3)


@given(st.integers(16, 10**9), st.sampled_from(list(GaloisClass)))
def test_z_zero_and_shift(d, cls):
    p = params_for_class(cls)
    ll = math.log(math.log(d))
    sha0 = math.sqrt(d) * math.exp(p.mu * ll)
    # the formula is continuous in sha, so evaluate the algebra directly
    z = (math.log(sha0) - 0.5 * math.log(d) - p.mu * ll) / math.sqrt(p.sigma2 * ll)
    assert abs(z) < 1e-9
    shift = math.exp(math.sqrt(p.sigma2 * ll))
    assert z_value(9, d, p) + 1 == pytest.approx(
        (math.log(9 * shift) - 0.5 * math.log(d) - p.mu * ll) / math.sqrt(p.sigma2 * ll), abs=1e-9)


def test_z_monotone():
    p = params_for_class(GaloisClass.C2)
    for d in (100, 10**4, 10**6):
        zs = [z_value(s * s, d, p) for s in range(1, 20)]
        assert all(a < b for a, b in zip(zs, zs[1:]))
    assert z_value(1, 1000, p) > z_value(1, 100000, p)


def test_distance_single_point():
    assert ks_distance([0.0]) == pytest.approx(0.5, abs=1e-12)
    assert wasserstein1_vs_normal([0.0]) == pytest.approx(math.sqrt(2 / math.pi), abs=1e-12)


def test_w1_against_quadrature():
    zs = sorted(random.Random(5).gauss(0.3, 1.4) for _ in range(25))
    n = len(zs)

    def gap(x):
        k = sum(1 for z in zs if z <= x)
        return abs(k / n - mpmath.ncdf(x))

    quad = mpmath.quad(gap, [-mpmath.inf, *zs, mpmath.inf])
    assert wasserstein1_vs_normal(zs) == pytest.approx(float(quad), abs=1e-9)


def test_normal_cdf_accuracy():
    std = NormalDist()
    for x in np.linspace(-8, 8, 321):
        assert abs(normal_cdf(x) - float(mpmath.ncdf(x))) < 1e-15
        assert abs(normal_cdf(x) - std.cdf(x)) < 1e-12


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=50), st.randoms())
@settings(max_examples=60)
def test_distances_invariances(zs, rnd):
    shuffled = list(zs)
    rnd.shuffle(shuffled)
    assert ks_distance(zs) == ks_distance(shuffled)
    assert wasserstein1_vs_normal(zs) == pytest.approx(wasserstein1_vs_normal(shuffled), abs=1e-12)
    neg = [-z for z in zs]
    assert ks_distance(neg) == pytest.approx(ks_distance(zs), abs=1e-12)
    assert wasserstein1_vs_normal(neg) == pytest.approx(wasserstein1_vs_normal(zs), abs=1e-9)
    r = distances(zs)
    assert 0 <= r.ks <= 1 and r.w1 >= 0


def test_plotting_positions():
    std = NormalDist()
    for n in (5, 50, 500):
        zs = [std.inv_cdf((i - 0.5) / n) for i in range(1, n + 1)]
        assert ks_distance(zs) <= 0.5 / n + 1e-12


def test_monte_carlo():
    zs = np.random.default_rng(12345).standard_normal(100_000)
    r = distances(zs)
    assert r.ks < 0.01 and r.w1 < 0.01


def test_empty_sample():
    with pytest.raises(ValueError):
        ks_distance([])
    with pytest.raises(ValueError):
        wasserstein1_vs_normal([])


def test_kde_normalisation_and_symmetry():
    zs = np.random.default_rng(1).standard_normal(300)
    grid = kde_grid(zs)
    dens = kde(zs, grid)
    integral = float(((dens[1:] + dens[:-1]) / 2 * np.diff(grid)).sum())
    assert abs(integral - 1) < 1e-3
    a = 1.3
    g = np.linspace(-6, 6, 241)
    d = kde([-a, a], g)
    assert np.allclose(d, d[::-1])
    with pytest.raises(ValueError):
        kde([1.0], g)


def test_kde_bandwidth_halving_sharpens_cluster():
    zs = [0.0, 0.01, -0.01, 0.02, 3.0]
    g = np.linspace(-2, 5, 701)
    h = silverman_bandwidth(zs)
    assert kde(zs, g, h / 2).max() > kde(zs, g, h).max()


def test_histogram_density():
    zs = np.random.default_rng(2).standard_normal(1000)
    edges, dens = histogram(zs)
    assert abs((dens * np.diff(edges)).sum() - 1) < 1e-12
    edges, dens = histogram(zs, bins=7)
    assert len(dens) == 7
