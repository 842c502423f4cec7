"""scikit-learn style estimators wrapping the Lloyd optimizers.

The training data is a weighted point cloud standing in for the data-rate
density: ``X`` holds sample locations and ``sample_weight`` their density
mass, so a grid from :func:`~tiered_deploy.spatial.build_grid` is fitted
with ``fit(grid.points, sample_weight=grid.weights)``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils import check_array, check_random_state
from sklearn.utils.validation import check_is_fitted

from ._validation import (
    check_count,
    check_nonnegative,
    check_points,
    check_sample_weight,
    random_points,
)
from .lloyd import LloydConfig, otl, regular_lloyd, ttl
from .partition import pointwise_cost, squared_distances
from .spatial import Grid


class _Base(ClusterMixin, TransformerMixin, BaseEstimator):

    def _validate_X(self, X, reset: bool):
        X = check_array(X, dtype=np.float64)
        if reset:
            self.n_features_in_ = X.shape[1]
        elif X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, but {type(self).__name__} "
                f"is expecting {self.n_features_in_} features as input")
        return X

    def _config(self) -> LloydConfig:
        return LloydConfig(max_iterations=check_count(self.max_iter, "max_iter"),
                           rel_tolerance=check_nonnegative(self.tol, "tol"))


class RegularLloyd(_Base):
    """Weighted Lloyd quantizer (k-means on a density).

    Parameters
    ----------
    n_clusters : int, default=8
        Number of reproduction points.
    init : array-like of shape (n_clusters, n_features), default=None
        Starting points; drawn uniformly from the bounding box of ``X``
        when omitted.
    max_iter : int, default=100
    tol : float, default=1e-9
        Relative distortion decrease below which iteration stops.
    random_state : int, RandomState instance or None, default=None

    Attributes
    ----------
    cluster_centers_ : ndarray of shape (n_clusters, n_features)
    labels_ : ndarray of shape (n_samples,)
    inertia_ : float
        Weighted squared-error distortion at convergence.
    trace_ : list of float
    n_iter_ : int
    """

    def __init__(self, n_clusters=8, init=None, max_iter=100, tol=1e-9, random_state=None):
        self.n_clusters = n_clusters
        self.init = init
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def fit(self, X, y=None, sample_weight=None):
        X = self._validate_X(X, reset=True)
        sw = check_sample_weight(sample_weight, X)
        k = check_count(self.n_clusters, "n_clusters")
        if self.init is None:
            init = random_points(X, k, check_random_state(self.random_state))
        else:
            init = check_points(self.init, k, X.shape[1], "init")
        result = regular_lloyd(Grid.from_samples(X, sw), k, init, self._config())
        self.cluster_centers_ = result.points
        self.labels_ = result.partition.assign
        self.inertia_ = result.trace[-1]
        self.trace_ = result.trace
        self.n_iter_ = result.iterations
        return self

    def transform(self, X):
        """Squared distance from every sample to every center."""
        check_is_fitted(self)
        return squared_distances(self._validate_X(X, reset=False), self.cluster_centers_)

    def predict(self, X):
        return np.argmin(self.transform(X), axis=1)

    def score(self, X, y=None, sample_weight=None):
        X = self._validate_X(X, reset=False)
        sw = check_sample_weight(sample_weight, X)
        return -float(sw @ np.min(self.transform(X), axis=1))


class _TwoTier(_Base):

    _algorithm = None

    def __init__(self, n_aps=20, n_bss=1, beta=1.0, init_aps=None, init_bss=None,
                 max_iter=100, tol=1e-9, random_state=None):
        self.n_aps = n_aps
        self.n_bss = n_bss
        self.beta = beta
        self.init_aps = init_aps
        self.init_bss = init_bss
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def _initial(self, X):
        n = check_count(self.n_aps, "n_aps")
        m = check_count(self.n_bss, "n_bss")
        rng = check_random_state(self.random_state)
        d = X.shape[1]
        P = (random_points(X, n, rng) if self.init_aps is None
             else check_points(self.init_aps, n, d, "init_aps"))
        Q = (random_points(X, m, rng) if self.init_bss is None
             else check_points(self.init_bss, m, d, "init_bss"))
        return n, m, P, Q

    def fit(self, X, y=None, sample_weight=None):
        """Optimize AP and BS positions for the weighted samples ``X``."""
        X = self._validate_X(X, reset=True)
        sw = check_sample_weight(sample_weight, X)
        beta = check_nonnegative(self.beta, "beta")
        n, m, P, Q = self._initial(X)
        run = type(self)._algorithm
        sol = run(Grid.from_samples(X, sw), n, m, beta, P, Q, self._config())
        self.solution_ = sol
        self.aps_ = sol.deployment.aps
        self.bss_ = sol.deployment.bss
        self.index_map_ = sol.deployment.index_map
        self.labels_ = sol.partition.assign
        self.cell_masses_ = sol.partition.volumes
        self.distortion_ = sol.report.total
        self.trace_ = sol.trace
        self.n_iter_ = sol.iterations
        return self

    def transform(self, X):
        """Two-tier cost ``||p_n - w||**2 + beta ||p_n - q_T(n)||**2`` of serving
        each sample by each AP, shape (n_samples, n_aps)."""
        check_is_fitted(self)
        X = self._validate_X(X, reset=False)
        return pointwise_cost(X, self.aps_, self.bss_, self.index_map_, float(self.beta))

    def predict(self, X):
        """Index of the AP serving each sample."""
        return np.argmin(self.transform(X), axis=1)

    def score(self, X, y=None, sample_weight=None):
        """Negated weighted distortion of the fitted deployment on ``X``."""
        X = self._validate_X(X, reset=False)
        sw = check_sample_weight(sample_weight, X)
        cost = self.transform(X)
        return -float(sw @ cost[np.arange(len(X)), self._serving(X, cost)])

    def _serving(self, X, cost):
        return np.argmin(cost, axis=1)


class TwoTieredLloyd(_TwoTier):
    """Jointly optimize access points and base stations with the two-tiered
    Lloyd iteration.

    Parameters
    ----------
    n_aps, n_bss : int
        Number of access points and base stations.
    beta : float, default=1.0
        Weight of AP transmit power relative to sensor transmit power.
    init_aps, init_bss : array-like, default=None
        Starting positions; drawn uniformly from the bounding box of ``X``
        when omitted.
    max_iter : int, default=100
        Maximum number of four-step sweeps.
    tol : float, default=1e-9
    random_state : int, RandomState instance or None, default=None

    Attributes
    ----------
    aps_, bss_ : ndarray
        Optimized positions.
    index_map_ : ndarray of shape (n_aps,)
        BS each AP forwards to.
    labels_ : ndarray of shape (n_samples,)
        Serving AP of each training sample (energy Voronoi cell).
    distortion_ : float
    trace_ : list of float
    solution_ : Solution
    """

    _algorithm = staticmethod(ttl)


class OneTieredLloyd(_TwoTier):
    """Place BSs and APs with two independent Lloyd quantizers, then pull each
    AP toward its nearest BS.

    Parameters and fitted attributes are those of :class:`TwoTieredLloyd`.
    ``labels_`` and :meth:`predict` use the nearest-quantizer-point partition,
    which is the partition this method optimizes. Requires
    ``n_aps >= n_bss``.
    """

    _algorithm = staticmethod(otl)

    def fit(self, X, y=None, sample_weight=None):
        super().fit(X, y, sample_weight)
        self.reproduction_points_ = self.solution_.reproduction_points
        return self

    def _serving(self, X, cost):
        return np.argmin(squared_distances(X, self.reproduction_points_), axis=1)

    def predict(self, X):
        check_is_fitted(self)
        X = self._validate_X(X, reset=False)
        return np.argmin(squared_distances(X, self.reproduction_points_), axis=1)
