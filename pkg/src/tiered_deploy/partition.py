"""Index maps, energy Voronoi partitions and the two-tier distortion.

An AP partition is stored extensionally: every grid point carries the index
of the AP that serves it. Cell "volumes" are density masses, not areas.
All indices are zero-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .exceptions import InconsistentPartition
from .spatial import Grid

_CHUNK = 1 << 15


def _as_points(points, dim=None) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None] if dim in (None, 1) else arr[None, :]
    return arr


@dataclass(eq=False)
class Deployment:
    """AP positions ``aps`` (N, dim), BS positions ``bss`` (M, dim) and
    ``index_map`` giving the BS each AP forwards to."""

    aps: np.ndarray
    bss: np.ndarray
    index_map: np.ndarray

    def __post_init__(self):
        self.aps = _as_points(self.aps)
        self.bss = _as_points(self.bss, self.aps.shape[1])
        self.index_map = np.asarray(self.index_map, dtype=np.intp)
        if len(self.aps) < 1 or len(self.bss) < 1:
            raise ValueError("a deployment needs at least one AP and one BS")
        if self.index_map.shape != (len(self.aps),):
            raise ValueError("index_map must hold one BS index per AP")
        if np.any(self.index_map < 0) or np.any(self.index_map >= len(self.bss)):
            raise ValueError("index_map entries out of range")

    @property
    def n_aps(self) -> int:
        return len(self.aps)

    @property
    def n_bss(self) -> int:
        return len(self.bss)

    def copy(self) -> "Deployment":
        return Deployment(self.aps.copy(), self.bss.copy(), self.index_map.copy())

    def to_dict(self) -> dict:
        return {
            "aps": self.aps.tolist(),
            "bss": self.bss.tolist(),
            "index_map": self.index_map.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Deployment":
        return cls(np.array(data["aps"], dtype=float), np.array(data["bss"], dtype=float),
                   np.array(data["index_map"], dtype=np.intp))

    def __eq__(self, other):
        return (isinstance(other, Deployment)
                and np.array_equal(self.aps, other.aps)
                and np.array_equal(self.bss, other.bss)
                and np.array_equal(self.index_map, other.index_map))


@dataclass(eq=False)
class PartitionState:
    """Grid-point to AP assignment with cached cell masses and centroids.

    ``centroids`` rows are NaN for APs whose cell has zero mass.
    """

    assign: np.ndarray
    volumes: np.ndarray
    centroids: np.ndarray

    @property
    def empty(self) -> np.ndarray:
        return ~(self.volumes > 0)

    def to_dict(self) -> dict:
        return {
            "assign": self.assign.tolist(),
            "volumes": self.volumes.tolist(),
            "centroids": [None if np.isnan(c).any() else c.tolist() for c in self.centroids],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PartitionState":
        volumes = np.array(data["volumes"], dtype=float)
        known = [c for c in data["centroids"] if c is not None]
        dim = len(known[0]) if known else 1
        centroids = np.array([[np.nan] * dim if c is None else c for c in data["centroids"]],
                             dtype=float)
        return cls(np.array(data["assign"], dtype=np.intp), volumes, centroids)

    def __eq__(self, other):
        return (isinstance(other, PartitionState)
                and np.array_equal(self.assign, other.assign)
                and np.array_equal(self.volumes, other.volumes)
                and np.array_equal(self.centroids, other.centroids, equal_nan=True))


@dataclass
class DistortionReport:
    """Total distortion with its sensor/AP split and per-node local terms."""

    total: float
    sensor_term: float
    ap_term: float
    per_ap: np.ndarray
    per_bs: np.ndarray

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "sensor_term": self.sensor_term,
            "ap_term": self.ap_term,
            "per_ap": self.per_ap.tolist(),
            "per_bs": self.per_bs.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DistortionReport":
        return cls(data["total"], data["sensor_term"], data["ap_term"],
                   np.array(data["per_ap"], dtype=float), np.array(data["per_bs"], dtype=float))


def squared_distances(X, Y) -> np.ndarray:
    """Matrix of ``||x_i - y_j||**2`` computed from coordinate differences."""
    return cdist(np.asarray(X, dtype=float), np.asarray(Y, dtype=float), "sqeuclidean")


def best_index_map(aps, bss) -> np.ndarray:
    """Nearest BS for every AP; ties go to the lowest BS index."""
    aps = _as_points(aps)
    bss = _as_points(bss, aps.shape[1])
    return np.argmin(squared_distances(aps, bss), axis=1)


def relay_penalty(aps, bss, index_map, beta: float) -> np.ndarray:
    """Per-AP weighted forwarding cost ``beta * ||p_n - q_T(n)||**2``."""
    diff = np.asarray(aps) - np.asarray(bss)[index_map]
    return beta * np.sum(diff ** 2, axis=1)


def pointwise_cost(points, aps, bss, index_map, beta: float) -> np.ndarray:
    """Cost ``||p_n - w||**2 + beta ||p_n - q_T(n)||**2`` for every (point, AP) pair."""
    return squared_distances(points, aps) + relay_penalty(aps, bss, index_map, beta)[None, :]


def cell_moments(grid: Grid, assign: np.ndarray, n_aps: int) -> tuple[np.ndarray, np.ndarray]:
    """Density mass and centroid of each AP cell."""
    volumes = np.bincount(assign, weights=grid.weights, minlength=n_aps)
    centroids = np.full((n_aps, grid.dim), np.nan)
    filled = volumes > 0
    for axis in range(grid.dim):
        first = np.bincount(assign, weights=grid.weights * grid.points[:, axis], minlength=n_aps)
        centroids[filled, axis] = first[filled] / volumes[filled]
    return volumes, centroids


def partition_from_assignment(grid: Grid, assign, n_aps: int) -> PartitionState:
    assign = np.asarray(assign, dtype=np.intp)
    volumes, centroids = cell_moments(grid, assign, n_aps)
    return PartitionState(assign, volumes, centroids)


def energy_voronoi(grid: Grid, aps, bss, index_map, beta: float) -> PartitionState:
    """Assign each grid point to the AP with least two-tier cost.

    With ``beta == 0`` this is the ordinary nearest-AP Voronoi partition.
    Ties go to the lowest AP index.
    """
    aps = _as_points(aps, grid.dim)
    bss = _as_points(bss, grid.dim)
    penalty = relay_penalty(aps, bss, index_map, beta)
    assign = np.empty(grid.size, dtype=np.intp)
    for start in range(0, grid.size, _CHUNK):
        stop = min(start + _CHUNK, grid.size)
        cost = squared_distances(grid.points[start:stop], aps)
        cost += penalty[None, :]
        assign[start:stop] = np.argmin(cost, axis=1)
    return partition_from_assignment(grid, assign, len(aps))


def voronoi(grid: Grid, points) -> PartitionState:
    """Nearest-point partition of the grid."""
    points = _as_points(points, grid.dim)
    zeros = np.zeros(len(points), dtype=np.intp)
    return energy_voronoi(grid, points, points[:1], zeros, 0.0)


def distortion(grid: Grid, deployment: Deployment, partition: PartitionState,
               beta: float) -> DistortionReport:
    """Evaluate the weighted sensor-plus-AP power of a deployment."""
    assign = partition.assign
    if assign.shape != (grid.size,):
        raise InconsistentPartition(
            f"partition covers {assign.size} points but the grid has {grid.size}")
    n = deployment.n_aps
    if assign.size and (assign.min() < 0 or assign.max() >= n):
        raise InconsistentPartition("partition references APs outside the deployment")

    diff = grid.points - deployment.aps[assign]
    sensor = grid.weights * np.sum(diff ** 2, axis=1)
    sensor_ap = np.bincount(assign, weights=sensor, minlength=n)
    volumes = np.bincount(assign, weights=grid.weights, minlength=n)
    relay_ap = volumes * relay_penalty(deployment.aps, deployment.bss, deployment.index_map, beta)

    per_ap = sensor_ap + relay_ap
    per_bs = np.bincount(deployment.index_map, weights=per_ap, minlength=deployment.n_bss)
    sensor_term = float(np.sum(sensor_ap))
    ap_term = float(np.sum(relay_ap))
    return DistortionReport(sensor_term + ap_term, sensor_term, ap_term, per_ap, per_bs)


def quantizer_distortion(grid: Grid, points, partition: PartitionState) -> float:
    """Single-tier squared-error distortion of reproduction points."""
    points = _as_points(points, grid.dim)
    diff = grid.points - points[partition.assign]
    return float(grid.weights @ np.sum(diff ** 2, axis=1))


def shrink(centroids, bss, index_map, beta: float) -> np.ndarray:
    """Move each point ``beta/(1+beta)`` of the way toward its BS."""
    return (np.asarray(centroids) + beta * np.asarray(bss)[index_map]) / (1.0 + beta)


def fixed_point_residual(grid: Grid, deployment: Deployment, partition: PartitionState,
                         beta: float) -> tuple[float, float]:
    """Distances from the AP and BS necessary-optimality conditions.

    Returns the largest AP displacement from ``(c_n + beta q_T(n)) / (1+beta)``
    over non-empty cells, and the largest BS displacement from the mass-weighted
    centroid of its cluster over BSs with positive cluster mass.
    """
    filled = partition.volumes > 0
    ap_res = 0.0
    if filled.any():
        target = shrink(partition.centroids[filled], deployment.bss,
                        deployment.index_map[filled], beta)
        ap_res = float(np.max(np.linalg.norm(deployment.aps[filled] - target, axis=1)))

    bs_res = 0.0
    T = deployment.index_map
    for m in range(deployment.n_bss):
        members = (T == m) & filled
        mass = partition.volumes[members].sum()
        if not mass > 0:
            continue
        target = partition.volumes[members] @ partition.centroids[members] / mass
        bs_res = max(bs_res, float(np.linalg.norm(deployment.bss[m] - target)))
    return ap_res, bs_res
