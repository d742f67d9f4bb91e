"""Bishop-Gromov checks against the round sphere and sphere-proximity margins.

Closed balls throughout: B_r(x) = {y : d(x, y) <= r}. The check compares

    mu_0(B_r(x)) / mu_0(B_R(x))   against   v(r) / v(R)

for every center x and every grid pair r <= R.

The margins come from bounding md(x) on a space whose radius is below
pi - eps1:

    delta(eps1, n)  = int_{pi-eps1}^{pi} [1 - v(s)] ds
    epsilon(n)      = v(eps1 / 2) * delta(eps1 / 2, n)
    delta1(f, ...)  = int_{f(pi-eps1)}^{f(pi)} [1 - v(f^{-1}(s))] ds
    epsilon2(f, n)  = v(eps1 / 2) * delta1(f, eps1 / 2, n)

The constant eps1 has no known value, so every verdict here is
conditional on the value the caller supplies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from .functions import IDENTITY, MonotoneFunction, monotone_function
from .invariants import generalized_mean, mean_distance, model_reference, radius_diameter
from .mmspace import TRIANGLE_TOL, DiscreteMMSpace
from .quadrature import ABS_TOL, ModelProfile, adaptive_simpson, check_dimension

DEFAULT_GRID_SIZE = 64
EXACT_TOL = 1e-9
# one-sided tail of a 3-sigma deviation, spent across the whole family of tests
FAMILY_LEVEL = NormalDist().cdf(-3.0)
_CENTER_BLOCK = 256


def default_radius_grid(size: int = DEFAULT_GRID_SIZE) -> list[float]:
    """``size`` uniform radii pi k / size, k = 1..size."""
    size = int(size)
    if size < 1:
        raise ValueError("grid size must be >= 1")
    return [math.pi * k / size for k in range(1, size + 1)]


@dataclass(frozen=True)
class Violation:
    center: int
    r: float
    R: float
    lhs: float
    rhs: float
    n_centers: int = 1

    def to_dict(self) -> dict:
        return {
            "center": self.center,
            "r": self.r,
            "R": self.R,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.lhs - self.rhs,
            "n_centers": self.n_centers,
        }


@dataclass
class ComparisonReport:
    dim: int
    centers_checked: int = 0
    radius_grid: list[float] = field(default_factory=list)
    min_slack: float | None = None
    min_slack_at: tuple | None = None
    violations: list[Violation] = field(default_factory=list)
    md_value: float | None = None
    md_upper_bound: float | None = None
    thresholds: dict | None = None
    tol: float | None = None
    tol_mode: str | None = None
    z_score: float | None = None
    n_triples: int = 0

    def to_dict(self) -> dict:
        at = None
        if self.min_slack_at is not None:
            center, r, R = self.min_slack_at
            at = {"center": center, "r": r, "R": R}
        return {
            "dim": self.dim,
            "centers_checked": self.centers_checked,
            "n_triples": self.n_triples,
            "tol_mode": self.tol_mode,
            "tol": self.tol,
            "z_score": self.z_score,
            "radius_grid": list(self.radius_grid),
            "min_slack": self.min_slack,
            "min_slack_at": at,
            "n_violations": len(self.violations),
            "violations": [v.to_dict() for v in self.violations],
            "md_value": self.md_value,
            "md_upper_bound": self.md_upper_bound,
            "thresholds": self.thresholds,
        }


def _ball_masses(space: DiscreteMMSpace, grid: np.ndarray, r0: int, r1: int):
    """Closed-ball masses (normalized) and Kish effective counts per center."""
    w = space.weights
    block = space.distance_block(r0, r1)
    order = np.argsort(block, axis=1, kind="stable")
    sorted_d = np.take_along_axis(block, order, axis=1)
    cum_w = np.cumsum(w[order], axis=1)
    cum_w2 = np.cumsum(w[order] ** 2, axis=1)
    masses = np.empty((r1 - r0, len(grid)))
    counts = np.empty_like(masses)
    for i in range(r1 - r0):
        idx = np.searchsorted(sorted_d[i], grid, side="right") - 1
        # idx >= 0: the center lies in every ball
        masses[i] = cum_w[i, idx]
        counts[i] = cum_w[i, idx] ** 2 / cum_w2[i, idx]
    return masses / space.total_weight, counts


def bishop_gromov_check(
    space: DiscreteMMSpace,
    n: int,
    radius_grid=None,
    tol: float | None = None,
    statistical: bool | None = None,
) -> ComparisonReport:
    """Check mu_0(B_r(x)) / mu_0(B_R(x)) >= v(r) / v(R) on a radius grid.

    ``tol`` fixes the allowed shortfall. Without it, exact spaces use
    ``EXACT_TOL`` and sampled spaces (``statistical``, default
    ``space.is_sample``) allow ``z * 0.5 / sqrt(k_R)`` per triple: 0.5 /
    sqrt(k_R) bounds the standard error of a binomial ball-mass ratio
    estimated from k_R points, and z is the normal quantile that keeps the
    chance of any false alarm across all triples at the one-sided
    3-sigma level.

    Violations are reported once per grid pair (r, R), at the center with
    the smallest slack, with ``n_centers`` counting the violating centers.
    """
    n = check_dimension(n)
    if radius_grid is None:
        radius_grid = default_radius_grid()
    grid = np.array([float(r) for r in radius_grid])
    if grid.size == 0:
        raise ValueError("radius grid is empty")
    if not (np.all(grid > 0) and np.all(grid <= math.pi)):
        raise ValueError("radius grid values must lie in (0, pi]")
    if np.any(np.diff(grid) < 0):
        raise ValueError("radius grid must be sorted")
    if statistical is None:
        statistical = space.is_sample

    profile = ModelProfile(n)
    v = np.array([profile.v(r) for r in grid])
    lo, hi = np.triu_indices(len(grid))
    rhs = v[lo] / v[hi]
    n_centers = space.n_points
    n_triples = n_centers * len(lo)

    if tol is not None:
        tol_mode, z = "fixed", None
        tol = float(tol)
    elif statistical:
        tol_mode = "statistical"
        z = NormalDist().inv_cdf(1.0 - FAMILY_LEVEL / n_triples)
    else:
        tol_mode, z, tol = "exact", None, EXACT_TOL

    min_slack, min_at = math.inf, None
    worst: dict[int, tuple[float, int, float]] = {}
    hits = np.zeros(len(lo), dtype=int)
    for r0 in range(0, n_centers, _CENTER_BLOCK):
        r1 = min(r0 + _CENTER_BLOCK, n_centers)
        masses, counts = _ball_masses(space, grid, r0, r1)
        lhs = masses[:, lo] / masses[:, hi]
        slack = lhs - rhs
        allowed = np.maximum(z * 0.5 / np.sqrt(counts[:, hi]), EXACT_TOL) if z is not None else tol
        flat = int(np.argmin(slack))
        if slack.flat[flat] < min_slack:
            min_slack = float(slack.flat[flat])
            i, p = divmod(flat, len(lo))
            min_at = (r0 + i, float(grid[lo[p]]), float(grid[hi[p]]))
        bad = slack < -allowed
        if bad.any():
            hits += bad.sum(axis=0)
            for p in np.flatnonzero(bad.any(axis=0)):
                col = np.where(bad[:, p], slack[:, p], np.inf)
                i = int(np.argmin(col))
                if p not in worst or col[i] < worst[p][0]:
                    worst[p] = (float(col[i]), r0 + i, float(lhs[i, p]))

    violations = [
        Violation(center, float(grid[lo[p]]), float(grid[hi[p]]), lhs_value, float(rhs[p]), int(hits[p]))
        for p, (_, center, lhs_value) in sorted(worst.items())
    ]
    return ComparisonReport(
        dim=n,
        centers_checked=n_centers,
        radius_grid=[float(r) for r in grid],
        min_slack=min_slack,
        min_slack_at=min_at,
        violations=violations,
        md_value=mean_distance(space),
        md_upper_bound=mean_distance_upper_bound(n),
        tol=tol if z is None else None,
        tol_mode=tol_mode,
        z_score=None if z is None else float(z),
        n_triples=n_triples,
    )


def mean_distance_upper_bound(n: int) -> float:
    """pi - int_0^pi v(s) ds, the bound on every pointwise mean distance.

    Swapping the order of integration gives
    int_0^pi v(s) ds = int_0^pi (pi - t) sin^(n-1)(t) dt / T_n,
    a single quadrature.
    """
    profile = ModelProfile(check_dimension(n))
    m = profile.dim - 1
    area = adaptive_simpson(lambda t: (math.pi - t) * math.sin(t) ** m, 0.0, math.pi, ABS_TOL)
    return math.pi - area / profile.total


def _check_epsilon1(epsilon1: float) -> float:
    epsilon1 = float(epsilon1)
    if not 0.0 < epsilon1 <= math.pi:
        raise ValueError(f"epsilon1 must lie in (0, pi], got {epsilon1!r}")
    return epsilon1


def _tail_margin(profile: ModelProfile, forward, epsilon1: float) -> float:
    # int_{f(a)}^{f(pi)} [1 - v(f^-1(s))] ds with a = pi - eps1; substituting
    # s = f(t) and integrating by parts leaves int_a^pi (f(t) - f(a)) v'(t) dt
    a = math.pi - epsilon1
    fa = float(forward(a))
    m = profile.dim - 1
    integral = adaptive_simpson(lambda t: (float(forward(t)) - fa) * math.sin(t) ** m, a, math.pi, ABS_TOL)
    return integral / profile.total


def stability_margins(n: int, epsilon1: float) -> tuple[float, float]:
    """``(delta(eps1, n), epsilon(n))`` for the md sphere-proximity check."""
    profile = ModelProfile(n)
    epsilon1 = _check_epsilon1(epsilon1)
    delta = _tail_margin(profile, IDENTITY.forward, epsilon1)
    epsilon = profile.v(0.5 * epsilon1) * _tail_margin(profile, IDENTITY.forward, 0.5 * epsilon1)
    return delta, epsilon


def generalized_stability_margins(f, n: int, epsilon1: float) -> tuple[float, float]:
    """``(delta1(f, eps1, n), epsilon2(f, n))`` for M_f; ``f`` must increase."""
    f = monotone_function(f) if isinstance(f, str) else f
    if not isinstance(f, MonotoneFunction):
        raise TypeError("f must be a MonotoneFunction or a catalog tag")
    if not f.increasing:
        raise ValueError(f"{f.name} is decreasing; the margins need a strictly increasing f")
    profile = ModelProfile(n)
    epsilon1 = _check_epsilon1(epsilon1)
    delta1 = _tail_margin(profile, f.forward, epsilon1)
    epsilon2 = profile.v(0.5 * epsilon1) * _tail_margin(profile, f.forward, 0.5 * epsilon1)
    return delta1, epsilon2


def sphere_proximity_report(space: DiscreteMMSpace, n: int, epsilon1: float, f=None) -> ComparisonReport:
    """Threshold flags for md (and optionally M_f) near its spherical value.

    ``x0`` is the empirical minimizer of the eccentricity. Flags compare
    numbers only: no flag asserts anything about the topology of the space.
    """
    n = check_dimension(n)
    epsilon1 = _check_epsilon1(epsilon1)
    delta, epsilon = stability_margins(n, epsilon1)
    delta_half = _tail_margin(ModelProfile(n), IDENTITY.forward, 0.5 * epsilon1)
    md = mean_distance(space)
    upper = mean_distance_upper_bound(n)
    radius, diameter, ecc = radius_diameter(space)
    x0 = int(np.argmin(ecc))
    row = space.row(x0)
    w = space.weights
    md_x0 = math.fsum(row * w) / space.total_weight
    ball_mass = math.fsum(w[row <= 0.5 * epsilon1]) / space.total_weight

    md_flag = md >= 0.5 * math.pi - epsilon
    radius_flag = radius >= math.pi - epsilon1
    t = {
        "epsilon1_input": epsilon1,
        "delta": delta,
        "epsilon": epsilon,
        "md_threshold": 0.5 * math.pi - epsilon,
        "radius": radius,
        "diameter": diameter,
        "radius_threshold": math.pi - epsilon1,
        "x0": x0,
        "x0_label": _plain(space.labels[x0]),
        "eccentricity_x0": float(ecc[x0]),
        "md_x0": md_x0,
        "md_x0_bound_if_radius_small": 0.5 * math.pi - delta,
        "ball_mass_x0": ball_mass,
        "md_bound_near_x0": 0.5 * math.pi - delta_half,
        "md_bound_if_radius_small": 0.5 * math.pi - ball_mass * delta_half,
        "flags": {
            "diameter_at_most_pi": diameter <= math.pi + TRIANGLE_TOL,
            "md_at_most_upper_bound": md <= upper + EXACT_TOL,
            "md_within_epsilon": md_flag,
            "radius_within_epsilon1": radius_flag,
            "md_flag_implies_radius_flag": (not md_flag) or radius_flag,
        },
    }
    if f is not None:
        f = monotone_function(f) if isinstance(f, str) else f
        delta1, epsilon2 = generalized_stability_margins(f, n, epsilon1)
        mf = generalized_mean(space, f)
        reference = model_reference(f, n)
        mf_flag = mf >= reference - epsilon2
        t.update(
            {
                "function": f.name,
                "delta1": delta1,
                "epsilon2": epsilon2,
                "mf_value": mf,
                "mf_reference": reference,
                "mf_threshold": reference - epsilon2,
            }
        )
        t["flags"]["mf_within_epsilon2"] = mf_flag
        t["flags"]["mf_flag_implies_radius_flag"] = (not mf_flag) or radius_flag
    t["verdict"] = _verdict(t)
    return ComparisonReport(
        dim=n,
        md_value=md,
        md_upper_bound=upper,
        thresholds=t,
        tol=EXACT_TOL,
        tol_mode="exact",
    )


def _plain(label):
    if isinstance(label, (np.integer,)):
        return int(label)
    if isinstance(label, tuple):
        return [_plain(x) for x in label]
    return label if isinstance(label, (int, float, str)) else str(label)


def _verdict(t: dict) -> str:
    flags = t["flags"]
    parts = [
        f"md {'>=' if flags['md_within_epsilon'] else '<'} pi/2 - epsilon",
        f"rad {'>=' if flags['radius_within_epsilon1'] else '<'} pi - epsilon1",
    ]
    if "mf_within_epsilon2" in flags:
        parts.append(f"M_f {'>=' if flags['mf_within_epsilon2'] else '<'} M*_f,n - epsilon2")
    return f"conditional on epsilon1 = {t['epsilon1_input']!r}: " + "; ".join(parts)
