"""Mean-distance invariants of metric measure spaces.

For a finite space with weights w and total W:

    md(X)  = sum_ij w_i w_j d_ij / W^2
    md(x)  = sum_j w_j d(x, j) / W
    D(x)   = max_j d(x, j),  rad = min_x D(x),  diam = max_x D(x)
    M_f(X) = sum_ij w_i w_j f(d_ij) / W^2

and on the round sphere M*_{f,n} = int f(r) sin^(n-1) r dr / int sin^(n-1) r dr.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .estimate import exact_pair_reduction, row_reduction
from .functions import MonotoneFunction, monotone_function
from .mmspace import TRIANGLE_TOL, DiscreteMMSpace
from .quadrature import ABS_TOL, ModelProfile, adaptive_simpson, check_dimension, invert_v

DIRECT = "direct"
LAYER_CAKE = "layer_cake"


@dataclass
class InvariantReport:
    md: float
    radius: float
    diameter: float
    per_point_eccentricity: np.ndarray = field(repr=False)
    per_point_mean: np.ndarray = field(repr=False)
    generalized_means: list[tuple[str, float]] = field(default_factory=list)

    def to_dict(self, per_point: bool = True) -> dict:
        out = {"md": self.md, "radius": self.radius, "diameter": self.diameter}
        if self.generalized_means:
            out["generalized_means"] = [{"function": tag, "value": value} for tag, value in self.generalized_means]
        if per_point:
            out["per_point_eccentricity"] = [float(v) for v in self.per_point_eccentricity]
            out["per_point_mean"] = [float(v) for v in self.per_point_mean]
        return out


def mean_distance(space: DiscreteMMSpace, n_jobs: int | None = None) -> float:
    """Average distance between two independent mu-random points."""
    return exact_pair_reduction(space, None, n_jobs).value


def pointwise_mean_distance(space: DiscreteMMSpace, x: int, mode: str = DIRECT) -> float:
    """Average distance from point ``x`` to a mu-random point.

    ``layer_cake`` evaluates int_0^D(x) mu_0{h >= s} ds with h = d(x, .)
    exactly as a Stieltjes sum over the sorted distinct distances; the
    superlevel sets {h >= s} are complements of open balls.
    """
    if not isinstance(x, (int, np.integer)) or not 0 <= x < space.n_points:
        raise IndexError(f"point index {x!r} out of range for {space.n_points} points")
    h = space.row(int(x))
    w = space.weights
    total = space.total_weight
    if mode == DIRECT:
        return math.fsum(h * w) / total
    if mode != LAYER_CAKE:
        raise ValueError(f"mode must be {DIRECT!r} or {LAYER_CAKE!r}, got {mode!r}")
    order = np.argsort(h, kind="stable")
    hs, ws = h[order], w[order]
    levels, first = np.unique(hs, return_index=True)
    # mass of {h >= levels[k]}: weights from the first occurrence onwards
    suffix = np.cumsum(ws[::-1])[::-1]
    tail_mass = suffix[first] / total
    terms = np.diff(levels) * tail_mass[1:]
    # the stretch [0, min h] has full mass; min h = h(x) = 0 for a metric
    return math.fsum(terms) + float(levels[0])


def _as_kernel(f) -> Callable:
    if isinstance(f, str):
        f = monotone_function(f)
    return f.forward if isinstance(f, MonotoneFunction) else f


def generalized_mean(space: DiscreteMMSpace, f, n_jobs: int | None = None) -> float:
    """M_f(X): the mu x mu average of f(d(x, y)).

    ``f`` is a :class:`MonotoneFunction` (or catalog tag), which requires
    diam X <= pi, or any vectorized callable alpha, taken as is.
    """
    if isinstance(f, str):
        f = monotone_function(f)
    if isinstance(f, MonotoneFunction):
        _, diameter, _ = radius_diameter(space, n_jobs)
        if diameter > math.pi + TRIANGLE_TOL:
            raise ValueError(f"diameter {diameter:.17g} exceeds pi, outside the domain of {f.name}")
    return exact_pair_reduction(space, _as_kernel(f), n_jobs).value


def model_reference(f, n: int) -> float:
    """M*_{f,n}: the value of M_f on the round n-sphere."""
    n = check_dimension(n)
    forward = _as_kernel(f)
    profile = ModelProfile(n)
    m = n - 1
    integral = adaptive_simpson(lambda r: float(forward(r)) * math.sin(r) ** m, 0.0, math.pi, ABS_TOL)
    return integral / profile.total


def radius_diameter(space: DiscreteMMSpace, n_jobs: int | None = None):
    """``(radius, diameter, eccentricities)`` with D(x) = max_y d(x, y)."""
    n = space.n_points
    ecc = np.empty(n)
    for r0 in range(0, n, 512):
        ecc[r0 : r0 + 512] = space.distance_block(r0, min(r0 + 512, n)).max(axis=1)
    return float(ecc.min()), float(ecc.max()), ecc


def compute_invariants(space: DiscreteMMSpace, functions=(), n_jobs: int | None = None) -> InvariantReport:
    """All basic invariants in one pass, plus M_f for each function given."""
    means, ecc = row_reduction(space, None, n_jobs)
    report = InvariantReport(
        md=mean_distance(space, n_jobs),
        radius=float(ecc.min()),
        diameter=float(ecc.max()),
        per_point_eccentricity=ecc,
        per_point_mean=means,
    )
    for f in functions:
        fn = monotone_function(f) if isinstance(f, str) else f
        tag = fn.name if isinstance(fn, MonotoneFunction) else getattr(fn, "__name__", "alpha")
        report.generalized_means.append((tag, generalized_mean(space, fn, n_jobs)))
    return report


def observable_diameter_bound(n: int, kappa: float) -> float:
    """ObsDiam(S^n; -kappa) = pi - 2 v^{-1}(kappa / 2)."""
    kappa = float(kappa)
    if not 0.0 < kappa <= 1.0:
        raise ValueError(f"kappa must lie in (0, 1], got {kappa!r}")
    return math.pi - 2.0 * invert_v(ModelProfile(n), 0.5 * kappa)

