import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from meandist import (
    compute_invariants,
    from_distance_matrix,
    generalized_mean,
    make_suspension,
    mean_distance,
    model_reference,
    observable_diameter_bound,
    pointwise_mean_distance,
    radius_diameter,
    sample_sphere,
)
from meandist.invariants import DIRECT, LAYER_CAKE

from .conftest import random_graph_space


def test_path3_values(path3):
    assert mean_distance(path3) == pytest.approx(8 / 9, abs=1e-15)
    for mode in (DIRECT, LAYER_CAKE):
        got = [pointwise_mean_distance(path3, x, mode) for x in range(3)]
        np.testing.assert_allclose(got, [1.0, 2 / 3, 1.0], atol=1e-15)
    rad, diam, ecc = radius_diameter(path3)
    assert (rad, diam) == (1.0, 2.0)
    np.testing.assert_array_equal(ecc, [2, 1, 2])


def test_two_point_and_one_point(two_point, one_point):
    assert mean_distance(two_point) == 0.5
    assert radius_diameter(two_point)[:2] == (1.0, 1.0)
    assert mean_distance(one_point) == 0.0
    assert radius_diameter(one_point)[:2] == (0.0, 0.0)
    assert pointwise_mean_distance(one_point, 0, LAYER_CAKE) == 0.0


def test_weighted_mean_distance():
    space = from_distance_matrix([[0, 1], [1, 0]], [1, 3])
    # 2 * w0 * w1 * d / W^2
    assert mean_distance(space) == pytest.approx(6 / 16)
    assert pointwise_mean_distance(space, 0) == pytest.approx(0.75)
    assert pointwise_mean_distance(space, 1, LAYER_CAKE) == pytest.approx(0.25)


def test_pointwise_argument_errors(path3):
    with pytest.raises(IndexError):
        pointwise_mean_distance(path3, 3)
    with pytest.raises(ValueError):
        pointwise_mean_distance(path3, 0, "riemann")


def test_md_is_weighted_average_of_pointwise():
    rng = np.random.default_rng(0)
    for _ in range(10):
        space = random_graph_space(rng)
        w = space.normalized_weights
        pointwise = [pointwise_mean_distance(space, x) for x in range(space.n_points)]
        assert mean_distance(space) == pytest.approx(float(np.dot(w, pointwise)), abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), factor=st.floats(0.01, 100.0))
def test_scaling_covariance(seed, factor):
    space = random_graph_space(np.random.default_rng(seed), n_max=20)
    assert mean_distance(space.scaled(factor)) == pytest.approx(factor * mean_distance(space), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), data=st.data())
def test_permutation_invariance(seed, data):
    space = random_graph_space(np.random.default_rng(seed), n_max=20)
    order = data.draw(st.permutations(range(space.n_points)))
    permuted = space.permuted(order)
    assert mean_distance(permuted) == pytest.approx(mean_distance(space), rel=1e-13, abs=1e-15)
    assert radius_diameter(permuted)[:2] == radius_diameter(space)[:2]


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_radius_diameter_bounds(seed):
    space = random_graph_space(np.random.default_rng(seed), n_max=20)
    rad, diam, _ = radius_diameter(space)
    assert rad <= diam <= 2 * rad + 1e-12
    assert mean_distance(space) <= diam


def test_generalized_mean_values(path3):
    # pairs: three at distance 0, four at 1, two at 2
    assert generalized_mean(path3, "pow2") == pytest.approx((4 * 1 + 2 * 4) / 9, abs=1e-15)
    assert generalized_mean(path3.scaled(0.5), "cos") == pytest.approx(
        (3 + 4 * math.cos(0.5) + 2 * math.cos(1.0)) / 9, abs=1e-15
    )
    # M_alpha: any continuous callable, no diameter restriction
    assert generalized_mean(path3, lambda d: d**3) == pytest.approx((4 + 2 * 8) / 9)


def test_generalized_mean_requires_diameter_at_most_pi():
    wide = from_distance_matrix([[0, 4.0], [4.0, 0]])
    with pytest.raises(ValueError, match="exceeds pi"):
        generalized_mean(wide, "id")
    assert generalized_mean(wide, lambda d: d) == mean_distance(wide)


@pytest.mark.parametrize("n", [1, 2, 3, 6])
@pytest.mark.parametrize("tag", ["pow2", "exp", "cos", "lin3"])
def test_model_reference_against_scipy(n, tag):
    from meandist import monotone_function

    f = monotone_function(tag)
    num, _ = integrate.quad(lambda r: f(r) * math.sin(r) ** (n - 1), 0, math.pi, epsabs=1e-12)
    den, _ = integrate.quad(lambda r: math.sin(r) ** (n - 1), 0, math.pi, epsabs=1e-12)
    assert model_reference(f, n) == pytest.approx(num / den, abs=1e-10)


def test_compute_invariants_report(path3):
    report = compute_invariants(path3, ["pow2", "id"])
    assert report.md == mean_distance(path3)
    assert (report.radius, report.diameter) == (1.0, 2.0)
    np.testing.assert_allclose(report.per_point_mean, [1, 2 / 3, 1], atol=1e-15)
    assert [tag for tag, _ in report.generalized_means] == ["pow2", "id"]
    d = report.to_dict(per_point=False)
    assert list(d) == ["md", "radius", "diameter", "generalized_means"]
    assert "per_point_mean" in report.to_dict()


def test_layer_cake_on_sphere_and_suspension():
    for space in (sample_sphere(2, 300, seed=1), make_suspension(sample_sphere(1, 10, seed=2), 6)):
        for x in range(0, space.n_points, 17):
            assert pointwise_mean_distance(space, x, LAYER_CAKE) == pytest.approx(
                pointwise_mean_distance(space, x, DIRECT), abs=1e-12
            )


def test_sphere_sample_converges():
    values = [abs(mean_distance(sample_sphere(3, size, seed=7)) - math.pi / 2) for size in (100, 3000)]
    assert values[1] < values[0]
    assert values[1] < 1e-3


def test_observable_diameter_bound_closed_form():
    # on S^2, v^{-1}(y) = arccos(1 - 2y)
    for kappa in (0.1, 0.3, 0.9):
        expected = math.pi - 2 * math.acos(1 - kappa)
        assert observable_diameter_bound(2, kappa) == pytest.approx(expected, abs=1e-10)
    # on S^1, v is linear
    assert observable_diameter_bound(1, 0.4) == pytest.approx(math.pi * 0.6, abs=1e-10)
    for bad in (0.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            observable_diameter_bound(2, bad)
