"""scikit-learn style wrappers around the invariants and comparison checks.

``X`` is either a precomputed distance matrix (``metric="precomputed"``),
points on the unit sphere (``metric="sphere"``, geodesic distance), or
plain Euclidean feature vectors (``metric="euclidean"``).
``sample_weight`` plays the role of the measure.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.metrics import pairwise_distances
from sklearn.utils.validation import check_array, check_is_fitted

from .comparison import bishop_gromov_check, default_radius_grid, sphere_proximity_report
from .functions import monotone_function
from .invariants import compute_invariants
from .mmspace import DiscreteMMSpace, from_distance_matrix

_METRICS = ("precomputed", "sphere", "euclidean")


def _sphere_distances(A, B):
    norms_a = np.linalg.norm(A, axis=1)
    norms_b = np.linalg.norm(B, axis=1)
    if np.any(np.abs(norms_a - 1) > 1e-6) or np.any(np.abs(norms_b - 1) > 1e-6):
        raise ValueError("metric='sphere' expects unit vectors")
    dot = np.clip(A @ B.T, -1.0, 1.0)
    return np.arccos(dot)


def _build_space(X, metric: str, sample_weight=None) -> DiscreteMMSpace:
    if metric not in _METRICS:
        raise ValueError(f"metric must be one of {_METRICS}, got {metric!r}")
    X = check_array(X, dtype=float, ensure_min_samples=1)
    if metric == "precomputed":
        if X.shape[0] != X.shape[1]:
            raise ValueError(f"precomputed distances must be square, got shape {X.shape}")
        D = X
    elif metric == "sphere":
        D = _sphere_distances(X, X)
        np.fill_diagonal(D, 0.0)
        D = np.triu(D) + np.triu(D, 1).T
    else:
        D = pairwise_distances(X, metric="euclidean")
        D = np.triu(D) + np.triu(D, 1).T
    weights = "uniform" if sample_weight is None else np.asarray(sample_weight, dtype=float)
    return from_distance_matrix(D, weights)


class MeanDistanceTransformer(TransformerMixin, BaseEstimator):
    """Mean-distance invariants of the fitted sample.

    After ``fit``: ``mean_distance_``, ``radius_``, ``diameter_``,
    ``eccentricity_``, ``pointwise_mean_`` and ``generalized_means_``
    (one entry per tag in ``functions``).

    ``transform`` maps query points to ``[md(q), D(q)]``: the weighted mean
    distance and the largest distance from each query to the fitted points.
    With ``metric="precomputed"`` the queries are rows of distances to the
    fitted points.
    """

    def __init__(self, metric="precomputed", functions=()):
        self.metric = metric
        self.functions = functions

    def fit(self, X, y=None, sample_weight=None):
        space = _build_space(X, self.metric, sample_weight)
        for tag in self.functions:
            monotone_function(tag)
        report = compute_invariants(space, list(self.functions))
        self.space_ = space
        self.mean_distance_ = report.md
        self.radius_ = report.radius
        self.diameter_ = report.diameter
        self.eccentricity_ = report.per_point_eccentricity
        self.pointwise_mean_ = report.per_point_mean
        self.generalized_means_ = dict(report.generalized_means)
        self.n_features_in_ = np.asarray(X).shape[1]
        if self.metric != "precomputed":
            self.fit_X_ = check_array(X, dtype=float)
        return self

    def _query_distances(self, X):
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        if self.metric == "precomputed":
            if np.any(X < 0) or not np.all(np.isfinite(X)):
                raise ValueError("precomputed distances must be finite and nonnegative")
            return X
        if self.metric == "sphere":
            return _sphere_distances(X, self.fit_X_)
        return pairwise_distances(X, self.fit_X_, metric="euclidean")

    def transform(self, X):
        check_is_fitted(self, "space_")
        D = self._query_distances(X)
        w = self.space_.normalized_weights
        return np.column_stack([D @ w, D.max(axis=1)])

    def get_feature_names_out(self, input_features=None):
        return np.array(["mean_distance", "eccentricity"], dtype=object)


class BishopGromovCheck(BaseEstimator):
    """Bishop-Gromov comparison of the fitted sample against S^dim.

    ``fit`` stores ``report_`` (a ComparisonReport), ``violations_`` and
    ``min_slack_``. ``predict`` returns, per fitted point, whether it is the
    worst center of some violated grid pair.
    """

    def __init__(self, dim=2, metric="precomputed", grid_size=64, tol=None, statistical=False):
        self.dim = dim
        self.metric = metric
        self.grid_size = grid_size
        self.tol = tol
        self.statistical = statistical

    def fit(self, X, y=None, sample_weight=None):
        space = _build_space(X, self.metric, sample_weight)
        self.report_ = bishop_gromov_check(
            space, self.dim, default_radius_grid(self.grid_size), tol=self.tol, statistical=self.statistical
        )
        self.violations_ = self.report_.violations
        self.min_slack_ = self.report_.min_slack
        self.n_features_in_ = np.asarray(X).shape[1]
        self.n_points_ = space.n_points
        return self

    def predict(self, X=None):
        check_is_fitted(self, "report_")
        flags = np.zeros(self.n_points_, dtype=bool)
        for v in self.violations_:
            flags[v.center] = True
        return flags

    def score(self, X=None, y=None):
        """Smallest slack over all checked triples (higher is better)."""
        check_is_fitted(self, "report_")
        return self.min_slack_


class SphereProximity(BaseEstimator):
    """Conditional sphere-proximity flags of the fitted sample.

    ``epsilon1`` is required: the flags are only meaningful relative to it.
    """

    def __init__(self, dim=2, epsilon1=None, f=None, metric="precomputed"):
        self.dim = dim
        self.epsilon1 = epsilon1
        self.f = f
        self.metric = metric

    def fit(self, X, y=None, sample_weight=None):
        if self.epsilon1 is None:
            raise ValueError("epsilon1 must be supplied; no default value exists")
        space = _build_space(X, self.metric, sample_weight)
        self.report_ = sphere_proximity_report(space, self.dim, self.epsilon1, self.f)
        self.flags_ = dict(self.report_.thresholds["flags"])
        self.verdict_ = self.report_.thresholds["verdict"]
        self.n_features_in_ = np.asarray(X).shape[1]
        return self
