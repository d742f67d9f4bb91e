"""Distance-matrix CSV, weights and edge-list files.

Distance matrix: N rows of N comma-separated decimals. Companion files sit
next to it: ``<path>.weights`` (one decimal per line) and ``<path>.labels``
(one label per line). Values are written with 17 significant digits, so a
write/read round trip reproduces every float exactly.

Edge list: lines ``u v length``; a line holding a single token declares an
isolated node; ``#`` starts a comment. Weights for graphs are lines
``label weight``.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ValidationError
from .mmspace import DiscreteMMSpace, from_distance_matrix, from_graph

FLOAT_FORMAT = "%.17g"


def weights_path(path) -> Path:
    return Path(f"{path}.weights")


def labels_path(path) -> Path:
    return Path(f"{path}.labels")


def write_space(space: DiscreteMMSpace, path, write_labels: bool | None = None) -> None:
    """Write ``dist`` as CSV plus the ``.weights`` companion.

    Labels are written only when they differ from ``0..N-1`` (or when
    ``write_labels`` is true).
    """
    path = Path(path)
    np.savetxt(path, space.dist, fmt=FLOAT_FORMAT, delimiter=",")
    np.savetxt(weights_path(path), space.weights, fmt=FLOAT_FORMAT)
    if write_labels is None:
        write_labels = space.labels != tuple(range(space.n_points))
    if write_labels:
        labels_path(path).write_text("".join(f"{label}\n" for label in space.labels), encoding="utf-8")


def read_space(path, weights=None, *, check_triangle=None) -> DiscreteMMSpace:
    """Read a distance-matrix CSV; companions are picked up when present."""
    path = Path(path)
    try:
        matrix = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ValidationError(f"{path}: cannot parse distance matrix: {exc}") from None
    if weights is None and weights_path(path).exists():
        weights = weights_path(path)
    if weights is None:
        w = "uniform"
    else:
        w = np.loadtxt(weights, ndmin=1)
    labels = None
    if labels_path(path).exists():
        labels = labels_path(path).read_text(encoding="utf-8").splitlines()
    return from_distance_matrix(matrix, w, labels, check_triangle=check_triangle)


def read_edges(path) -> tuple[list[tuple[str, str, float]], list[str]]:
    edges, nodes = [], []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) == 1:
            nodes.append(tokens[0])
        elif len(tokens) == 3:
            try:
                length = float(tokens[2])
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: bad edge length {tokens[2]!r}") from None
            edges.append((tokens[0], tokens[1], length))
        else:
            raise ValidationError(f"{path}:{lineno}: expected 'u v length', got {raw!r}")
    return edges, nodes


def read_node_weights(path) -> dict[str, float]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ValidationError(f"{path}:{lineno}: expected 'label weight', got {raw!r}")
        out[tokens[0]] = float(tokens[1])
    return out


def read_graph(path, weights_file=None) -> DiscreteMMSpace:
    edges, nodes = read_edges(path)
    weights = read_node_weights(weights_file) if weights_file else "uniform"
    return from_graph(edges, weights, nodes)
