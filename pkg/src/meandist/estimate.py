"""Pair integrals: exact blocked reductions and seeded Monte Carlo on S^n.

Every invariant of the form

    int int k(d(x, y)) dmu(x) dmu(y) / mu(X)^2

goes through :func:`exact_pair_reduction` for finite spaces and
:func:`mc_estimate` for the analytic sphere.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._rng import unit_vectors
from .errors import KernelError
from .mmspace import DiscreteMMSpace, ModelSphere

BLOCK_ROWS = 256
THREADS_ENV = "MEANDIST_THREADS"


def worker_count(n_jobs: int | None = None) -> int:
    """Resolve a worker count: explicit value, then the environment, then all cores."""
    if n_jobs is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        n_jobs = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(n_jobs))


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    n_terms: int
    mode: str
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "std_error": self.std_error,
            "n_terms": self.n_terms,
            "mode": self.mode,
            "seed": self.seed,
        }


def _apply_kernel(kernel, block: np.ndarray, r0: int, c0: int) -> np.ndarray:
    try:
        values = np.asarray(kernel(block), dtype=float)
        if values.shape != block.shape:
            values = np.broadcast_to(values, block.shape)
    except Exception as exc:
        pair = _locate_failure(kernel, block, r0, c0)
        raise KernelError(f"kernel failed at pair {pair}: {exc}", pair) from exc
    bad = ~np.isfinite(values)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        pair = (int(r0 + i), int(c0 + j))
        raise KernelError(f"kernel returned {values[i, j]!r} at pair {pair}", pair)
    return values


def _locate_failure(kernel, block, r0, c0):
    for (i, j), d in np.ndenumerate(block):
        try:
            value = float(kernel(float(d)))
        except Exception:
            return (int(r0 + i), int(c0 + j))
        if not math.isfinite(value):
            return (int(r0 + i), int(c0 + j))
    return None


def _block_sum(space: DiscreteMMSpace, kernel, r0: int, r1: int) -> float:
    """Ordered-pair contribution of rows r0:r1, using d(i, j) = d(j, i).

    Only columns >= r0 are touched: the square diagonal block counts once,
    everything to its right counts twice (its mirror image).
    """
    w = space.weights
    values = _apply_kernel(kernel, space.distance_block(r0, r1, r0), r0, r0)
    width = r1 - r0
    diag = (values[:, :width] * w[r0:r1]).sum(axis=1)
    off = (values[:, width:] * w[r1:]).sum(axis=1)
    rows = w[r0:r1]
    return math.fsum(np.concatenate([rows * diag, 2.0 * rows * off]))


def exact_pair_reduction(
    space: DiscreteMMSpace, kernel: Callable | None = None, n_jobs: int | None = None
) -> Estimate:
    """sum_ij w_i w_j kernel(d_ij) / (sum w)^2 over all ordered pairs.

    Rows are processed in fixed blocks of ``BLOCK_ROWS``; each block is
    summed with ``math.fsum`` (exactly rounded) and the block totals are
    merged in block order, so the value is bit-identical for any worker
    count. ``kernel`` must be vectorized; ``None`` means the identity.
    """
    if kernel is None:
        kernel = _identity
    n = space.n_points
    starts = list(range(0, n, BLOCK_ROWS))
    jobs = worker_count(n_jobs)

    def task(r0):
        return _block_sum(space, kernel, r0, min(r0 + BLOCK_ROWS, n))

    if jobs == 1 or len(starts) == 1:
        partials = [task(r0) for r0 in starts]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            partials = list(pool.map(task, starts))
    total = space.total_weight
    value = math.fsum(partials) / (total * total)
    return Estimate(value=value, std_error=0.0, n_terms=n * n, mode="exact")


def _identity(d):
    return d


def row_reduction(space: DiscreteMMSpace, kernel: Callable | None = None, n_jobs: int | None = None):
    """Per-point means sum_j w_j kernel(d_ij) / sum w, and row maxima of d.

    Returns ``(means, maxima)``; used for pointwise mean distances and
    eccentricities.
    """
    if kernel is None:
        kernel = _identity
    n = space.n_points
    w = space.weights
    total = space.total_weight
    means = np.empty(n)
    maxima = np.empty(n)

    def task(r0):
        r1 = min(r0 + BLOCK_ROWS, n)
        block = space.distance_block(r0, r1)
        values = _apply_kernel(kernel, block, r0, 0)
        for i in range(r1 - r0):
            means[r0 + i] = math.fsum(values[i] * w) / total
        maxima[r0:r1] = block.max(axis=1)

    starts = range(0, n, BLOCK_ROWS)
    jobs = worker_count(n_jobs)
    if jobs == 1:
        for r0 in starts:
            task(r0)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(task, starts))
    return means, maxima


def mc_estimate(model: ModelSphere | int, kernel: Callable | None, samples: int, seed: int) -> Estimate:
    """Average of kernel(d(x, y)) over ``samples`` i.i.d. uniform pairs on S^n.

    ``std_error`` is the sample standard deviation over sqrt(samples).
    """
    if not isinstance(model, ModelSphere):
        model = ModelSphere(model)
    samples = int(samples)
    if samples < 2:
        raise ValueError("need at least 2 samples")
    if kernel is None:
        kernel = _identity
    x = unit_vectors(seed, samples, model.dim, stream=0)
    y = unit_vectors(seed, samples, model.dim, stream=1)
    dot = np.einsum("ij,ij->i", x, y)
    np.clip(dot, -1.0, 1.0, out=dot)
    values = np.asarray(kernel(np.arccos(dot)), dtype=float)
    if not np.all(np.isfinite(values)):
        raise KernelError("kernel returned non-finite values on sampled distances")
    mean = math.fsum(values) / samples
    std = math.sqrt(math.fsum((values - mean) ** 2) / (samples - 1))
    return Estimate(value=mean, std_error=std / math.sqrt(samples), n_terms=samples, mode="monte_carlo", seed=int(seed))
