"""Finite metric measure spaces: construction, generators and validation."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from ._rng import unit_vectors
from .errors import ValidationError
from .quadrature import check_dimension

TRIANGLE_TOL = 1e-9
SYMMETRY_TOL = 1e-12
# above this size the O(N^3) triangle scan only runs on request
TRIANGLE_CHECK_LIMIT = 512


class _DenseDistances:
    def __init__(self, matrix: np.ndarray):
        self.matrix = matrix

    def block(self, r0: int, r1: int, c0: int = 0) -> np.ndarray:
        return self.matrix[r0:r1, c0:]

    def dense(self) -> np.ndarray:
        return self.matrix


class _SphereDistances:
    """Geodesic distances between unit vectors, computed block by block.

    Inner products are accumulated coordinate by coordinate (no BLAS), so
    d(i, j) and d(j, i) are bitwise equal and every block is reproducible
    regardless of how rows are grouped.
    """

    def __init__(self, points: np.ndarray):
        self.points = points
        self._dense = None

    def block(self, r0: int, r1: int, c0: int = 0) -> np.ndarray:
        if self._dense is not None:
            return self._dense[r0:r1, c0:]
        rows = self.points[r0:r1]
        cols = self.points[c0:]
        dot = rows[:, 0, None] * cols[None, :, 0]
        for k in range(1, self.points.shape[1]):
            dot += rows[:, k, None] * cols[None, :, k]
        np.clip(dot, -1.0, 1.0, out=dot)
        out = np.arccos(dot, out=dot)
        for i in range(max(r0, c0), r1):
            out[i - r0, i - c0] = 0.0
        return out

    def dense(self) -> np.ndarray:
        if self._dense is None:
            n = len(self.points)
            full = np.empty((n, n))
            step = 512
            for r0 in range(0, n, step):
                full[r0 : r0 + step] = self.block(r0, min(r0 + step, n))
            full.setflags(write=False)
            self._dense = full
        return self._dense


class DiscreteMMSpace:
    """A finite metric space with strictly positive point weights.

    Instances are immutable. ``dist`` is the symmetric N x N distance
    matrix; spaces sampled from a sphere compute it lazily from their
    points, so reductions can stream row blocks without materializing it.
    """

    def __init__(self, dist, weights="uniform", labels=None, *, check_triangle=None):
        matrix = np.array(dist, dtype=float)
        w = _coerce_weights(weights, len(matrix) if matrix.ndim == 2 else 0)
        report = validate(matrix, w, check_triangle=check_triangle)
        report.raise_for_problems()
        # keep one triangle and mirror it: exact symmetry from here on
        upper = np.triu(matrix)
        matrix = upper + np.triu(matrix, 1).T
        matrix.setflags(write=False)
        self._init(_DenseDistances(matrix), w, labels)

    @classmethod
    def _from_source(cls, source, weights, labels=None, is_sample=False):
        self = cls.__new__(cls)
        self._init(source, weights, labels, is_sample)
        return self

    def _init(self, source, weights, labels, is_sample=False):
        n = len(weights)
        weights = np.array(weights, dtype=float)
        weights.setflags(write=False)
        self._source = source
        self._weights = weights
        self._labels = tuple(range(n)) if labels is None else tuple(labels)
        if len(self._labels) != n:
            raise ValidationError(f"expected {n} labels, got {len(self._labels)}")
        self._is_sample = is_sample

    @property
    def n_points(self) -> int:
        return len(self._weights)

    def __len__(self) -> int:
        return self.n_points

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def labels(self) -> tuple:
        return self._labels

    @property
    def total_weight(self) -> float:
        return math.fsum(self._weights)

    @property
    def normalized_weights(self) -> np.ndarray:
        """The probability weights mu_0 = mu / mu(X)."""
        return self._weights / self.total_weight

    @property
    def is_sample(self) -> bool:
        """True when the space is a random sample of an analytic space."""
        return self._is_sample

    @property
    def points(self):
        return getattr(self._source, "points", None)

    @property
    def dist(self) -> np.ndarray:
        return self._source.dense()

    def distance_block(self, r0: int, r1: int, c0: int = 0) -> np.ndarray:
        """Rows ``r0:r1`` of the distance matrix, columns from ``c0`` on."""
        return self._source.block(r0, r1, c0)

    def row(self, i: int) -> np.ndarray:
        if not 0 <= i < self.n_points:
            raise IndexError(f"point index {i} out of range for {self.n_points} points")
        return self._source.block(i, i + 1)[0]

    def scaled(self, factor: float) -> "DiscreteMMSpace":
        """Same points and weights with every distance multiplied by ``factor``."""
        if not factor > 0:
            raise ValueError("scale factor must be positive")
        matrix = self.dist * factor
        matrix.setflags(write=False)
        return DiscreteMMSpace._from_source(_DenseDistances(matrix), self._weights, self._labels)

    def permuted(self, order: Sequence[int]) -> "DiscreteMMSpace":
        """Relabeled copy: point ``k`` of the result is point ``order[k]`` here."""
        order = np.asarray(order)
        matrix = self.dist[np.ix_(order, order)].copy()
        matrix.setflags(write=False)
        labels = [self._labels[i] for i in order]
        return DiscreteMMSpace._from_source(_DenseDistances(matrix), self._weights[order], labels)

    def __repr__(self) -> str:
        return f"DiscreteMMSpace(n_points={self.n_points})"


@dataclass(frozen=True)
class ModelSphere:
    """The round unit sphere S^dim with its uniform probability measure."""

    dim: int

    def __post_init__(self):
        object.__setattr__(self, "dim", check_dimension(self.dim))

    @staticmethod
    def distance(x, y) -> float:
        dot = float(np.dot(x, y))
        return math.acos(min(1.0, max(-1.0, dot)))


@dataclass(frozen=True)
class ValidationReport:
    symmetric: bool
    zero_diagonal: bool
    triangle_ok: bool | None
    support_ok: bool
    finite: bool = True
    asymmetric_at: tuple | None = None
    nonzero_diagonal_at: int | None = None
    worst_triangle: tuple | None = None
    triangle_excess: float = 0.0
    bad_weight_at: int | None = None
    bad_entry_at: tuple | None = None

    @property
    def triangle_checked(self) -> bool:
        return self.triangle_ok is not None

    @property
    def ok(self) -> bool:
        return (
            self.finite
            and self.symmetric
            and self.zero_diagonal
            and self.triangle_ok is not False
            and self.support_ok
        )

    def raise_for_problems(self) -> None:
        if not self.finite:
            raise ValidationError(
                f"distance entries must be finite and nonnegative; bad entry at {self.bad_entry_at}",
                self.bad_entry_at or (),
            )
        if not self.symmetric:
            raise ValidationError(f"distance matrix asymmetric at {self.asymmetric_at}", self.asymmetric_at)
        if not self.zero_diagonal:
            i = self.nonzero_diagonal_at
            raise ValidationError(f"nonzero diagonal at ({i}, {i})", (i,))
        if self.triangle_ok is False:
            raise ValidationError(
                f"triangle violation {self.worst_triangle}, excess {self.triangle_excess:.17g}",
                self.worst_triangle,
            )
        if not self.support_ok:
            i = self.bad_weight_at
            raise ValidationError(f"weight at point {i} must be strictly positive and finite", (i,))


def _coerce_weights(weights, n: int) -> np.ndarray:
    if isinstance(weights, str):
        if weights != "uniform":
            raise ValueError(f"weights must be 'uniform' or an array, got {weights!r}")
        return np.ones(n)
    w = np.array(weights, dtype=float).reshape(-1)
    if len(w) != n:
        raise ValidationError(f"expected {n} weights, got {len(w)}")
    return w


def _worst_triangle(matrix: np.ndarray):
    n = len(matrix)
    worst, at = -math.inf, None
    for j in range(n):
        # excess[i, k] = d(i, k) - d(i, j) - d(j, k)
        excess = matrix - matrix[:, j, None] - matrix[None, j, :]
        flat = int(np.argmax(excess))
        value = excess.flat[flat]
        if value > worst:
            worst = float(value)
            i, k = divmod(flat, n)
            at = (i, j, k)
    return worst, at


def validate(space, weights=None, *, check_triangle=None, tol: float = TRIANGLE_TOL) -> ValidationReport:
    """Check the metric measure space axioms; problems become report fields.

    ``space`` is a :class:`DiscreteMMSpace` or a raw square matrix (then
    ``weights`` defaults to uniform). The triangle scan is O(N^3) and runs
    by default only below ``TRIANGLE_CHECK_LIMIT`` points.
    """
    if isinstance(space, DiscreteMMSpace):
        matrix = space.dist
        w = space.weights if weights is None else _coerce_weights(weights, space.n_points)
    else:
        matrix = np.asarray(space, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValidationError(f"distance matrix must be square, got shape {matrix.shape}")
        w = _coerce_weights("uniform" if weights is None else weights, len(matrix))
    n = len(matrix)
    if n < 1:
        raise ValidationError("a space needs at least one point")

    fields = {}
    bad = ~np.isfinite(matrix) | (matrix < 0)
    fields["finite"] = not bad.any()
    if not fields["finite"]:
        fields["bad_entry_at"] = tuple(int(v) for v in np.argwhere(bad)[0])

    with np.errstate(invalid="ignore"):
        diff = np.abs(matrix - matrix.T)
    scale = np.maximum(1.0, np.abs(matrix))
    asym = np.argwhere(np.triu(diff > SYMMETRY_TOL * scale, 1))
    fields["symmetric"] = len(asym) == 0
    if len(asym):
        fields["asymmetric_at"] = (int(asym[0][0]), int(asym[0][1]))

    diag = np.flatnonzero(np.diagonal(matrix) != 0)
    fields["zero_diagonal"] = len(diag) == 0
    if len(diag):
        fields["nonzero_diagonal_at"] = int(diag[0])

    support = np.flatnonzero(~(np.isfinite(w) & (w > 0)))
    fields["support_ok"] = len(support) == 0
    if len(support):
        fields["bad_weight_at"] = int(support[0])

    if check_triangle is None:
        check_triangle = n < TRIANGLE_CHECK_LIMIT
    if check_triangle and fields["finite"]:
        excess, at = _worst_triangle(matrix)
        fields["triangle_ok"] = excess <= tol
        fields["triangle_excess"] = max(0.0, excess)
        if excess > tol:
            fields["worst_triangle"] = at
    else:
        fields["triangle_ok"] = None
    return ValidationReport(**fields)


def from_distance_matrix(matrix, weights="uniform", labels=None, *, check_triangle=None) -> DiscreteMMSpace:
    """Build a validated space from a square distance matrix.

    Raises :class:`ValidationError` naming the offending indices on
    asymmetry, nonzero diagonal, triangle violation or nonpositive weight.
    """
    return DiscreteMMSpace(matrix, weights, labels, check_triangle=check_triangle)


def _dijkstra(adjacency: list[list[tuple[int, float]]], source: int) -> list[float]:
    dist = [math.inf] * len(adjacency)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, length in adjacency[u]:
            nd = d + length
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def from_graph(
    edges: Iterable[tuple[Hashable, Hashable, float]],
    weights="uniform",
    nodes: Iterable[Hashable] | None = None,
) -> DiscreteMMSpace:
    """Shortest-path metric of a connected graph with positive edge lengths.

    Node order: ``nodes`` first (if given), then endpoints in order of first
    appearance. ``weights`` is ``"uniform"``, a sequence in node order, or a
    mapping from label to weight (its keys also count as nodes).
    """
    index: dict = {}

    def add(label):
        if label not in index:
            index[label] = len(index)
        return index[label]

    for label in nodes or ():
        add(label)
    if isinstance(weights, dict):
        for label in weights:
            add(label)
    adjacency_map: dict[tuple[int, int], float] = {}
    for edge in edges:
        u, v, length = edge
        length = float(length)
        if not (length > 0 and math.isfinite(length)):
            raise ValidationError(f"edge ({u!r}, {v!r}) has nonpositive or non-finite length {length!r}")
        a, b = add(u), add(v)
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        adjacency_map[key] = min(length, adjacency_map.get(key, math.inf))
    n = len(index)
    if n == 0:
        raise ValidationError("graph has no nodes")
    adjacency: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (a, b), length in adjacency_map.items():
        adjacency[a].append((b, length))
        adjacency[b].append((a, length))

    matrix = np.array([_dijkstra(adjacency, s) for s in range(n)])
    unreachable = np.argwhere(np.isinf(matrix))
    if len(unreachable):
        labels = list(index)
        i, j = unreachable[0]
        raise ValidationError(
            f"graph is disconnected: no path between {labels[i]!r} and {labels[j]!r}", (int(i), int(j))
        )
    labels = list(index)
    if isinstance(weights, dict):
        missing = [label for label in labels if label not in weights]
        if missing:
            raise ValidationError(f"no weight given for node {missing[0]!r}", (index[missing[0]],))
        w = [weights[label] for label in labels]
    else:
        w = weights
    # shortest paths satisfy the triangle inequality by construction
    matrix = np.minimum(matrix, matrix.T)
    return DiscreteMMSpace(matrix, w, labels, check_triangle=False)


def sample_sphere(model: ModelSphere | int, n_points: int, seed: int) -> DiscreteMMSpace:
    """``n_points`` i.i.d. uniform points on S^n with uniform weights.

    Distances are arccos of clamped inner products. Deterministic in
    ``seed``; the matrix is computed lazily in row blocks.
    """
    if not isinstance(model, ModelSphere):
        model = ModelSphere(model)
    n_points = int(n_points)
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    points = unit_vectors(seed, n_points, model.dim)
    points.setflags(write=False)
    return DiscreteMMSpace._from_source(_SphereDistances(points), np.ones(n_points), None, is_sample=True)


def make_suspension(base: DiscreteMMSpace, n_latitudes: int) -> DiscreteMMSpace:
    """Spherical suspension of ``base`` on a grid of latitudes.

    Latitudes are the midpoints s_k = (k + 1/2) pi / L, so every weight
    sin(s_k) * w(x) is positive and no two points collapse at the poles.
    Distances follow the spherical cosine rule
    cos d = cos s cos t + sin s sin t cos(min(d_base, pi)).
    """
    n_latitudes = int(n_latitudes)
    if n_latitudes < 2:
        raise ValueError("n_latitudes must be >= 2")
    db = base.dist
    if db.max(initial=0.0) > math.pi + TRIANGLE_TOL:
        raise ValidationError(f"base diameter {db.max():.17g} exceeds pi")
    s = (np.arange(n_latitudes) + 0.5) * (math.pi / n_latitudes)
    cs, sn = np.cos(s), np.sin(s)
    cb = np.cos(np.minimum(db, math.pi))
    nb = base.n_points
    cos_d = (
        cs[:, None, None, None] * cs[None, None, :, None]
        + sn[:, None, None, None] * sn[None, None, :, None] * cb[None, :, None, :]
    )
    cos_d = cos_d.reshape(n_latitudes * nb, n_latitudes * nb)
    np.clip(cos_d, -1.0, 1.0, out=cos_d)
    matrix = np.arccos(cos_d)
    np.fill_diagonal(matrix, 0.0)
    matrix = np.triu(matrix) + np.triu(matrix, 1).T
    weights = (sn[:, None] * base.weights[None, :]).reshape(-1)
    labels = [(k, label) for k in range(n_latitudes) for label in base.labels]
    return DiscreteMMSpace(matrix, weights, labels, check_triangle=False)
