import math

import numpy as np
import pytest

from meandist import IDENTITY, MonotoneFunction, monotone_function


@pytest.mark.parametrize(
    "tag, at_one, increasing",
    [
        ("id", 1.0, True),
        ("identity", 1.0, True),
        ("lin2", 2.0, True),
        ("lin:-1", -1.0, False),
        ("pow2", 1.0, True),
        ("pow:2.5", 1.0, True),
        ("exp", math.e, True),
        ("exp-1", math.exp(-1), False),
        ("cos", math.cos(1.0), False),
    ],
)
def test_catalog(tag, at_one, increasing):
    f = monotone_function(tag)
    assert f(1.0) == pytest.approx(at_one)
    assert f.increasing is increasing
    grid = np.linspace(0, math.pi, 50)
    np.testing.assert_allclose(f.inverse(f.forward(grid)), grid, atol=1e-9)


@pytest.mark.parametrize("tag", ["sqrt", "pow0", "pow-1", "lin0", "exp0", "cos2", "id3", "pow"])
def test_bad_tags(tag):
    with pytest.raises(ValueError):
        monotone_function(tag)


def test_identity_singleton():
    assert monotone_function("id") is IDENTITY
    assert monotone_function(IDENTITY) is IDENTITY


def test_rejects_non_monotone():
    with pytest.raises(ValueError, match="strictly"):
        MonotoneFunction("sin", np.sin, np.arcsin)


def test_rejects_wrong_inverse():
    with pytest.raises(ValueError, match="inverse"):
        MonotoneFunction("sq", lambda r: r * r, lambda y: y)


def test_from_table():
    xs = np.linspace(0, math.pi, 11)
    f = MonotoneFunction.from_table(xs, xs**2)
    assert f.increasing
    assert f(0.5 * (xs[1] + xs[2])) == pytest.approx(0.5 * (xs[1] ** 2 + xs[2] ** 2))
    g = MonotoneFunction.from_table(xs, -xs)
    assert not g.increasing
    with pytest.raises(ValueError):
        MonotoneFunction.from_table(xs, np.sin(xs))
    with pytest.raises(ValueError):
        MonotoneFunction.from_table(xs[:-1], xs[:-1])
