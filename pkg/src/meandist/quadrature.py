"""Sin-power integrals and the normalized volume profile of the round sphere.

The profile of S^n is

    v(r) = int_0^r sin^(n-1)(t) dt / int_0^pi sin^(n-1)(t) dt,

the fraction of the sphere's volume inside a geodesic ball of radius r.
Full-interval integrals use the Wallis recursion; partial intervals use
adaptive Simpson quadrature.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from typing import Callable

ABS_TOL = 1e-12
# Relative safeguard so tiny integrals near the poles keep their digits;
# inversion of v close to r = 0 depends on it.
REL_TOL = 1e-10
MAX_DEPTH = 50
BISECTION_TOL = 1e-12

_HALF_PI = 0.5 * math.pi


def check_dimension(n) -> int:
    """Return ``n`` as an int, rejecting non-integer and non-positive input."""
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise ValueError(f"dimension must be an integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return n


def adaptive_simpson(
    func: Callable[[float], float],
    a: float,
    b: float,
    tol: float = ABS_TOL,
    rel_tol: float = 0.0,
    max_depth: int = MAX_DEPTH,
) -> float:
    """Integrate ``func`` over ``[a, b]`` with adaptive Simpson + Richardson.

    A panel is accepted once ``|S(left) + S(right) - S(whole)| <= 15 * tol``,
    with ``tol`` halved on each split. A positive ``rel_tol`` tightens the
    starting tolerance to ``rel_tol`` times a rough estimate of the integral.
    """
    if b == a:
        return 0.0
    fa, fm, fb = func(a), func(0.5 * (a + b)), func(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    if rel_tol > 0.0:
        rough = abs(whole)
        if rough == 0.0:
            # probe the quarter points before trusting a zero estimate
            rough = 0.5 * (b - a) * (abs(func(0.75 * a + 0.25 * b)) + abs(func(0.25 * a + 0.75 * b)))
        if rough > 0.0:
            tol = min(tol, rel_tol * rough)
    return _simpson_step(func, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_step(func, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    if not (a < lm < m < rm < b):
        return whole
    flm, frm = func(lm), func(rm)
    left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _simpson_step(func, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + _simpson_step(
        func, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
    )


def wallis(m: int) -> float:
    """int_0^pi sin^m(t) dt, via W_m = (m-1)/m * W_(m-2)."""
    if m < 0:
        raise ValueError("exponent must be nonnegative")
    value = math.pi if m % 2 == 0 else 2.0
    for k in range(2 + m % 2, m + 1, 2):
        value *= (k - 1) / k
    return value


def _sin_power(m: int) -> Callable[[float], float]:
    if m == 0:
        return lambda t: 1.0
    if m == 1:
        return math.sin
    return lambda t: math.sin(t) ** m


def sin_power_integral(m: int, a: float, b: float) -> float:
    """int_a^b sin^m(t) dt for 0 <= a <= b <= pi."""
    if isinstance(m, bool) or not isinstance(m, numbers.Integral) or m < 0:
        raise ValueError(f"exponent must be a nonnegative integer, got {m!r}")
    a, b = float(a), float(b)
    if not (0.0 <= a <= b <= math.pi):
        raise ValueError(f"need 0 <= a <= b <= pi, got a={a!r}, b={b!r}")
    if a == 0.0 and b == math.pi:
        return wallis(int(m))
    if m == 0:
        return b - a
    return adaptive_simpson(_sin_power(int(m)), a, b, ABS_TOL, REL_TOL)


@dataclass(frozen=True)
class ModelProfile:
    """Volume profile of the round n-sphere.

    ``total`` is T_n = int_0^pi sin^(n-1).
    """

    dim: int
    tolerance: float = 1e-10
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dim", check_dimension(self.dim))
        object.__setattr__(self, "total", wallis(self.dim - 1))

    def density(self, r: float) -> float:
        """v'(r) = sin^(n-1)(r) / T_n."""
        return math.sin(r) ** (self.dim - 1) / self.total

    def v(self, r: float) -> float:
        return profile_v(self, r)

    def tail(self, r: float) -> float:
        """1 - v(r), accurate near r = pi."""
        r = float(r)
        if not (0.0 <= r <= math.pi):
            raise ValueError(f"radius must lie in [0, pi], got {r!r}")
        return profile_v(self, math.pi - r)

    def inverse(self, y: float) -> float:
        return invert_v(self, y)


def _lower(profile: ModelProfile, r: float) -> float:
    # v(r) for r in [0, pi/2]; v(pi/2) = 1/2 exactly by symmetry
    if r == _HALF_PI:
        return 0.5
    return sin_power_integral(profile.dim - 1, 0.0, r) / profile.total


def profile_v(profile: ModelProfile, r: float) -> float:
    """Fraction of S^n inside a closed geodesic ball of radius ``r``."""
    r = float(r)
    if not (0.0 <= r <= math.pi):
        raise ValueError(f"radius must lie in [0, pi], got {r!r}")
    if r <= _HALF_PI:
        return _lower(profile, r)
    # mirror so the upper tail is computed from a small integral
    return 1.0 - _lower(profile, math.pi - r)


def _solve_lower(profile: ModelProfile, y: float) -> float:
    """r in [0, pi/2] with v(r) = y, for 0 <= y <= 1/2."""
    if y == 0.0:
        return 0.0
    if y == 0.5:
        return _HALF_PI
    target = y * profile.total
    integrand = _sin_power(profile.dim - 1)
    lo, hi = 0.0, _HALF_PI
    mass_lo = 0.0
    # bisection carrying the integral up to ``lo``: each step only integrates
    # over the freshly halved bracket
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        piece = adaptive_simpson(integrand, lo, mid, ABS_TOL, REL_TOL)
        if mass_lo + piece < target:
            lo, mass_lo = mid, mass_lo + piece
        else:
            hi = mid
    return 0.5 * (lo + hi)


def invert_v(profile: ModelProfile, y: float) -> float:
    """The unique r in [0, pi] with v(r) = y, by bisection."""
    y = float(y)
    if not (0.0 <= y <= 1.0):
        raise ValueError(f"profile value must lie in [0, 1], got {y!r}")
    if y == 1.0:
        return math.pi
    if y <= 0.5:
        return _solve_lower(profile, y)
    return math.pi - _solve_lower(profile, 1.0 - y)
