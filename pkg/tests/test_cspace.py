import math

import numpy as np
import pytest

from mrfmt import SpaceSpec, Topology
from mrfmt.cspace import TWO_PI


def unit_square():
    return SpaceSpec.euclidean(np.zeros(2), np.ones(2))


def se2():
    return SpaceSpec.se2(np.zeros(2), np.ones(2))


def test_distance_pythagorean():
    space = SpaceSpec.euclidean(np.array([-5.0, -5.0]), np.array([5.0, 5.0]))
    assert space.distance(np.array([0.0, 0.0]), np.array([3.0, 4.0])) == pytest.approx(5.0)


def test_angular_wraparound():
    space = SpaceSpec(
        np.array([0.0, 0.0]),
        np.array([TWO_PI, TWO_PI]),
        (Topology.ANGULAR, Topology.ANGULAR),
        np.ones(2),
    )
    a = np.array([0.1, 1.0])
    b = np.array([TWO_PI - 0.1, 1.0])
    assert space.distance(a, b) == pytest.approx(0.2)


def test_se2_distance_weighted():
    space = se2()
    a = np.array([0.0, 0.0, 0.0])
    b = np.array([1.0, 0.0, math.pi])
    # direct evaluation of the weighted formula with a 0.5 rotation weight
    expected = math.sqrt(1.0 + (0.5 * math.pi) ** 2)
    assert space.distance(a, b) == pytest.approx(expected, rel=1e-12)


def test_metric_axioms_on_random_triples():
    space = se2()
    rng = np.random.default_rng(3)
    for _ in range(300):
        a, b, c = (space.sample_uniform(rng) for _ in range(3))
        dab, dba = space.distance(a, b), space.distance(b, a)
        assert dab >= 0.0
        assert abs(dab - dba) <= 1e-12
        assert space.distance(a, c) <= dab + space.distance(b, c) + 1e-12
    assert space.distance(a, a) == 0.0


def test_angular_distance_bounded_by_pi_times_weight():
    space = se2()
    rng = np.random.default_rng(4)
    for _ in range(200):
        a, b = space.sample_uniform(rng), space.sample_uniform(rng)
        a[:2] = b[:2]
        assert space.distance(a, b) <= math.pi * 0.5 + 1e-12


def test_interpolate_endpoints():
    space = unit_square()
    a, b = np.array([0.2, 0.3]), np.array([0.9, 0.1])
    assert np.array_equal(space.interpolate(a, b, 0.0), a)
    assert np.allclose(space.interpolate(a, b, 1.0), b, atol=1e-15)


def test_interpolate_angular_midpoint_wraps():
    space = se2()
    a = np.array([0.5, 0.5, 0.1])
    b = np.array([0.5, 0.5, TWO_PI - 0.1])
    mid = space.interpolate(a, b, 0.5)
    assert mid[2] == pytest.approx(0.0, abs=1e-12)


def test_interpolate_distance_proportional():
    space = se2()
    rng = np.random.default_rng(5)
    for _ in range(100):
        a, b = space.sample_uniform(rng), space.sample_uniform(rng)
        t = rng.uniform()
        m = space.interpolate(a, b, t)
        assert space.distance(a, m) == pytest.approx(t * space.distance(a, b), abs=1e-9)


def test_interpolate_path_additivity():
    space = se2()
    rng = np.random.default_rng(6)
    for _ in range(100):
        a, b = space.sample_uniform(rng), space.sample_uniform(rng)
        m = space.interpolate(a, b, rng.uniform())
        total = space.distance(a, m) + space.distance(m, b)
        assert total == pytest.approx(space.distance(a, b), abs=1e-9)


def test_interpolate_rejects_bad_t():
    space = unit_square()
    with pytest.raises(ValueError):
        space.interpolate(np.zeros(2), np.ones(2), 1.5)


def test_distance_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        unit_square().distance(np.zeros(3), np.zeros(2))


def test_sample_within_bounds():
    space = se2()
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        q = space.sample_uniform(rng)
        assert space.contains(q)


def test_sampling_deterministic_per_seed():
    space = unit_square()
    rng1, rng2 = np.random.default_rng(9), np.random.default_rng(9)
    for _ in range(50):
        assert np.array_equal(space.sample_uniform(rng1), space.sample_uniform(rng2))


def test_sample_mean_near_midpoint():
    space = unit_square()
    rng = np.random.default_rng(11)
    draws = np.array([space.sample_uniform(rng) for _ in range(100_000)])
    # law of large numbers: per-dimension mean within 1% of the midpoint
    assert np.all(np.abs(draws.mean(axis=0) - 0.5) < 0.01)


def test_spec_validation():
    with pytest.raises(ValueError):
        SpaceSpec.euclidean(np.array([0.0, 1.0]), np.array([1.0, 0.5]))
    with pytest.raises(ValueError):
        SpaceSpec(np.zeros(2), np.ones(2), (Topology.ANGULAR, Topology.EUCLIDEAN), np.ones(2))
    with pytest.raises(ValueError):
        SpaceSpec.euclidean(np.zeros(2), np.ones(2), weight=np.array([1.0, 0.0]))


def test_normalize_wraps_angles():
    space = se2()
    q = space.normalize(np.array([0.5, 0.5, TWO_PI + 0.3]))
    assert q[2] == pytest.approx(0.3)
