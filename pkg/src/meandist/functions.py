"""Strictly monotone weight functions on [0, pi] and their catalog tags.

Tags understood by :func:`monotone_function`:

    id            f(r) = r
    lin<c>        f(r) = c r          (c != 0, e.g. ``lin2``)
    pow<p>        f(r) = r**p         (p > 0, e.g. ``pow2``, ``pow0.5``)
    exp / exp<a>  f(r) = exp(a r)     (a != 0, default 1)
    cos           f(r) = cos r        (decreasing)
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

GRID_POINTS = 10_000
ROUND_TRIP_TOL = 1e-9


@dataclass(frozen=True)
class MonotoneFunction:
    """A continuous, strictly monotone f on [0, pi] together with its inverse.

    ``forward`` and ``inverse`` must accept floats and numpy arrays.
    Construction checks strict monotonicity and the inverse on a dense grid.
    """

    name: str
    forward: Callable = field(repr=False)
    inverse: Callable = field(repr=False)
    direction: str = "increasing"

    def __post_init__(self):
        if self.direction not in ("increasing", "decreasing"):
            raise ValueError(f"direction must be 'increasing' or 'decreasing', got {self.direction!r}")
        grid = np.linspace(0.0, math.pi, GRID_POINTS)
        values = np.asarray(self.forward(grid), dtype=float)
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{self.name}: non-finite values on [0, pi]")
        steps = np.diff(values)
        ok = steps > 0 if self.direction == "increasing" else steps < 0
        if not ok.all():
            k = int(np.argmin(ok))
            raise ValueError(f"{self.name}: not strictly {self.direction} near r = {grid[k]:.6g}")
        back = np.asarray(self.inverse(values), dtype=float)
        err = np.abs(back - grid)
        if not (err <= ROUND_TRIP_TOL).all():
            k = int(np.argmax(err))
            raise ValueError(f"{self.name}: inverse misses by {err[k]:.3g} at r = {grid[k]:.6g}")

    def __call__(self, r):
        return self.forward(r)

    @property
    def increasing(self) -> bool:
        return self.direction == "increasing"

    @classmethod
    def from_table(cls, xs, ys, name: str = "table") -> "MonotoneFunction":
        """Piecewise-linear interpolation of a strictly monotone table covering [0, pi]."""
        xs = np.array(xs, dtype=float)
        ys = np.array(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
            raise ValueError("table needs two equal-length 1-d arrays with at least 2 entries")
        if not np.all(np.diff(xs) > 0):
            raise ValueError("table abscissae must be strictly increasing")
        if xs[0] > 0 or xs[-1] < math.pi:
            raise ValueError("table must cover [0, pi]")
        dy = np.diff(ys)
        if np.all(dy > 0):
            direction = "increasing"
            inv_x, inv_y = ys, xs
        elif np.all(dy < 0):
            direction = "decreasing"
            inv_x, inv_y = ys[::-1], xs[::-1]
        else:
            raise ValueError("table values must be strictly monotone")

        def forward(r):
            out = np.interp(r, xs, ys)
            return float(out) if np.ndim(out) == 0 else out

        def inverse(y):
            out = np.interp(y, inv_x, inv_y)
            return float(out) if np.ndim(out) == 0 else out

        return cls(name, forward, inverse, direction)


def _identity(r):
    return r


IDENTITY = MonotoneFunction("id", _identity, _identity)

_TAG = re.compile(r"^(id|identity|lin|pow|exp|cos)(:?)([-+0-9.eE]*)$")


def monotone_function(tag: str) -> MonotoneFunction:
    """Build a catalog function from its tag (see module docstring)."""
    if isinstance(tag, MonotoneFunction):
        return tag
    m = _TAG.match(tag.strip())
    if not m:
        raise ValueError(f"unknown function tag {tag!r}")
    kind, param = m.group(1), m.group(3)
    value = None
    if param:
        try:
            value = float(param)
        except ValueError:
            raise ValueError(f"bad parameter in function tag {tag!r}") from None
    if kind in ("id", "identity"):
        if value is not None:
            raise ValueError(f"identity takes no parameter: {tag!r}")
        return IDENTITY
    if kind == "cos":
        if value is not None:
            raise ValueError(f"cos takes no parameter: {tag!r}")
        return MonotoneFunction("cos", np.cos, np.arccos, "decreasing")
    if kind == "lin":
        c = 1.0 if value is None else value
        if c == 0:
            raise ValueError("lin scale must be nonzero")
        return MonotoneFunction(tag, lambda r: c * r, lambda y: y / c, "increasing" if c > 0 else "decreasing")
    if kind == "pow":
        if value is None or not value > 0:
            raise ValueError(f"pow needs a positive exponent: {tag!r}")
        p = value
        return MonotoneFunction(tag, lambda r: np.power(r, p), lambda y: np.power(y, 1.0 / p))
    a = 1.0 if value is None else value
    if a == 0:
        raise ValueError("exp rate must be nonzero")
    return MonotoneFunction(
        tag, lambda r: np.exp(a * r), lambda y: np.log(y) / a, "increasing" if a > 0 else "decreasing"
    )
