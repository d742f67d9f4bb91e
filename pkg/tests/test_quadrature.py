import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from meandist.quadrature import ModelProfile, adaptive_simpson, invert_v, profile_v, sin_power_integral, wallis

from .conftest import closed_form_v2

EPS = np.finfo(float).eps


def riemann(f, a, b, n=200_000):
    # midpoint rule, vectorized
    t = a + (np.arange(n) + 0.5) * (b - a) / n
    return float(np.sum(f(t)) * (b - a) / n)


@pytest.mark.parametrize(
    "m, expected",
    [(0, math.pi), (1, 2.0), (2, math.pi / 2), (3, 4.0 / 3.0)],
)
def test_full_interval_values(m, expected):
    assert sin_power_integral(m, 0.0, math.pi) == pytest.approx(expected, abs=1e-12)


def test_sin_cubed_against_antiderivative_and_riemann():
    def antiderivative(t):
        return -math.cos(t) + math.cos(t) ** 3 / 3.0

    for a, b in [(0.0, math.pi), (0.3, 2.0), (1.0, 1.1), (0.0, 0.01)]:
        closed = antiderivative(b) - antiderivative(a)
        assert sin_power_integral(3, a, b) == pytest.approx(closed, abs=1e-12)
        assert riemann(lambda t: np.sin(t) ** 3, a, b) == pytest.approx(closed, abs=1e-9)


@pytest.mark.parametrize("m", range(0, 12))
def test_wallis_matches_quadrature(m):
    ref, _ = integrate.quad(lambda t: math.sin(t) ** m, 0.0, math.pi, epsabs=1e-14)
    assert wallis(m) == pytest.approx(ref, abs=1e-12)
    # the adaptive path on a nearly full interval agrees with the recursion
    assert sin_power_integral(m, 0.0, math.pi - 1e-9) == pytest.approx(wallis(m), abs=1e-8)


def test_partial_intervals_against_scipy():
    for m in (2, 5, 9):
        for a, b in [(0.0, 0.7), (0.2, 3.0), (1.5, math.pi)]:
            ref, _ = integrate.quad(lambda t: math.sin(t) ** m, a, b, epsabs=1e-14)
            assert sin_power_integral(m, a, b) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("args", [(2, -0.1, 1.0), (2, 0.0, 3.5), (2, 2.0, 1.0), (-1, 0.0, 1.0), (1.5, 0.0, 1.0)])
def test_sin_power_integral_rejects_bad_arguments(args):
    with pytest.raises(ValueError):
        sin_power_integral(*args)


@settings(max_examples=200, deadline=None)
@given(
    m=st.integers(0, 10),
    xs=st.lists(st.floats(0.0, math.pi), min_size=3, max_size=3),
)
def test_additivity(m, xs):
    a, b, c = sorted(xs)
    whole = sin_power_integral(m, a, c)
    parts = sin_power_integral(m, a, b) + sin_power_integral(m, b, c)
    assert abs(whole - parts) <= 1e-11


def test_adaptive_simpson_polynomial_exact():
    assert adaptive_simpson(lambda x: x**3 - 2 * x, -1.0, 2.0) == pytest.approx(0.75, abs=1e-14)


def test_profile_rejects_non_integer_dimension():
    with pytest.raises(ValueError):
        ModelProfile(2.5)
    with pytest.raises(ValueError):
        ModelProfile(0)
    with pytest.raises(ValueError):
        ModelProfile(True)


@pytest.mark.parametrize("n", range(1, 11))
def test_profile_endpoints_and_symmetry(n):
    p = ModelProfile(n)
    assert p.v(0.0) == 0.0
    assert p.v(math.pi) == 1.0
    assert p.v(math.pi / 2) == 0.5
    for r in (0.1, 0.9, 1.3):
        assert p.v(r) + p.v(math.pi - r) == pytest.approx(1.0, abs=1e-12)


def test_wallis_recursion_of_totals():
    assert ModelProfile(1).total == math.pi
    assert ModelProfile(2).total == 2.0
    for n in range(3, 15):
        assert ModelProfile(n).total == pytest.approx((n - 2) / (n - 1) * ModelProfile(n - 2).total, rel=1e-15)


def test_profile_closed_forms():
    p2 = ModelProfile(2)
    assert p2.v(math.pi / 3) == pytest.approx(0.25, abs=1e-12)
    for r in np.linspace(0, math.pi, 37):
        assert p2.v(r) == pytest.approx(closed_form_v2(r), abs=1e-12)
        assert ModelProfile(1).v(r) == pytest.approx(r / math.pi, abs=1e-12)


def test_invert_closed_forms():
    p2 = ModelProfile(2)
    assert invert_v(p2, 0.25) == pytest.approx(math.pi / 3, abs=1e-11)
    for y in np.linspace(0.01, 0.99, 25):
        assert invert_v(p2, y) == pytest.approx(math.acos(1 - 2 * y), abs=1e-11)
    for n in (1, 4, 9):
        p = ModelProfile(n)
        assert invert_v(p, 0.5) == math.pi / 2
        assert invert_v(p, 0.0) == 0.0
        assert invert_v(p, 1.0) == math.pi


@pytest.mark.parametrize("bad", [-0.1, 1.1, float("nan")])
def test_invert_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        invert_v(ModelProfile(2), bad)


@pytest.mark.parametrize("bad", [-1e-3, math.pi + 1e-3])
def test_profile_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        profile_v(ModelProfile(3), bad)


@pytest.mark.slow
@pytest.mark.parametrize("n", range(1, 11))
def test_round_trip_on_grid(n):
    # Near r = pi with large n, 1 - v(r) drops below double resolution and v
    # rounds to 1; there the attainable accuracy is set by conditioning,
    # roughly eps / v'(r).
    p = ModelProfile(n)
    for k in range(1001):
        r = math.pi * k / 1000
        y = p.v(r)
        back = invert_v(p, y)
        density = p.density(r)
        allowed = max(1e-9, 8 * EPS / density) if density > 0 else math.inf
        assert abs(back - r) <= allowed, (n, r, back)
        assert abs(p.v(back) - y) <= 1e-10


@pytest.mark.parametrize("n", range(1, 11))
def test_monotone_and_derivative(n):
    p = ModelProfile(n)
    grid = np.linspace(0, math.pi, 400)
    values = np.array([p.v(r) for r in grid])
    steps = np.diff(values)
    assert np.all(steps >= 0)
    # strict wherever the increment is resolvable in double precision
    resolvable = (1.0 - values[1:]) > 1e-12
    assert np.all(steps[resolvable] > 0)
    h = 1e-4
    for r in np.linspace(0.2, math.pi - 0.2, 15):
        numeric = (p.v(r + h) - p.v(r - h)) / (2 * h)
        assert numeric == pytest.approx(p.density(r), abs=1e-6)


def test_tail_complements_profile():
    p = ModelProfile(6)
    for r in (0.05, 1.0, 3.0):
        assert p.tail(r) == pytest.approx(1.0 - p.v(r), abs=1e-12)
    # accurate where 1 - v(r) is below double resolution of v
    assert 0 < p.tail(math.pi - 1e-3) < 1e-15
