"""Closed-form optimal deployments and the brute-force checks behind them.

The 1D formulas assume the uniform probability density ``1 / (t - s)`` on
``[s, t]``, the same normalization :class:`~tiered_deploy.spatial.Uniform`
uses, so grid evaluations and closed forms are directly comparable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgs, TooLarge
from .partition import Deployment, PartitionState, quantizer_distortion, shrink
from .spatial import Grid, region_centroid

BRUTEFORCE_MAX_N = 30
BRUTEFORCE_MAX_M = 6


@dataclass
class Allocation:
    """Number of APs per BS cluster, largest first."""

    sizes: tuple[int, ...]
    value: float
    n_large: int
    n_small: int
    len_large: float
    len_small: float

    @property
    def n_aps(self) -> int:
        return sum(self.sizes)


@dataclass
class Closed1DSolution:
    """Optimal 1D deployment on a uniform interval.

    ``cell_bounds`` has N+1 entries delimiting the AP cells and
    ``cluster_bounds`` has M+1 entries delimiting the BS clusters.
    """

    bss: np.ndarray
    aps: np.ndarray
    cell_bounds: np.ndarray
    cluster_bounds: np.ndarray
    index_map: np.ndarray
    distortion: float
    sizes: tuple[int, ...]
    beta: float

    @property
    def deployment(self) -> Deployment:
        return Deployment(self.aps[:, None], self.bss[:, None], self.index_map)

    def to_dict(self) -> dict:
        out = self.deployment.to_dict()
        out.update(
            cell_bounds=self.cell_bounds.tolist(),
            cluster_bounds=self.cluster_bounds.tolist(),
            sizes=list(self.sizes),
            beta=self.beta,
            distortion=self.distortion,
        )
        return out


@dataclass
class Prop1Solution:
    deployment: Deployment
    partition: PartitionState | None
    distortion: float
    quantizer_distortion: float
    spread: float


def lemma1_bound(N: int, measure: float) -> float:
    """Lower bound ``measure**2 / (12 N**2)`` on the normalized N-level
    quantizer distortion of a set of the given length."""
    if N < 1 or not measure > 0:
        raise InvalidArgs("lemma1_bound needs N >= 1 and measure > 0")
    return measure ** 2 / (12.0 * N ** 2)


def dlb(sizes, beta: float) -> float:
    """``(sum_m (beta + e_m**-2) ** -1/2) ** -2`` for cluster sizes ``e_m``."""
    return sum((beta + 1.0 / e ** 2) ** -0.5 for e in sizes) ** -2


def _check_nm(N: int, M: int):
    if M < 1 or N < M:
        raise InvalidArgs(f"need N >= M >= 1, got N={N}, M={M}")


def lemma2_minimizer(N: int, M: int, beta: float) -> Allocation:
    """Optimal split of N APs over M clusters: sizes differ by at most one."""
    _check_nm(N, M)
    n_large = N % M
    n_small = M - n_large
    big = -(-N // M)
    small = N // M
    len_large = (beta + big ** -2) ** -0.5
    len_small = (beta + small ** -2) ** -0.5
    value = (n_large * len_large + n_small * len_small) ** -2
    sizes = (big,) * n_large + (small,) * n_small
    return Allocation(sizes, value, n_large, n_small, len_large, len_small)


def dlb_bruteforce(N: int, M: int, beta: float) -> Allocation:
    """Minimize :func:`dlb` by enumerating every composition of N into M parts.

    Ties keep the first composition met, and ``sizes`` are reported in
    descending order.
    """
    _check_nm(N, M)
    if N > BRUTEFORCE_MAX_N or M > BRUTEFORCE_MAX_M:
        raise TooLarge(f"enumeration guard is N <= {BRUTEFORCE_MAX_N}, M <= {BRUTEFORCE_MAX_M}")
    best = None
    for cuts in itertools.combinations(range(1, N), M - 1):
        edges = (0,) + cuts + (N,)
        sizes = [b - a for a, b in zip(edges, edges[1:])]
        value = dlb(sizes, beta)
        if best is None or value < best[0]:
            best = (value, sizes)
    value, sizes = best
    sizes = tuple(sorted(sizes, reverse=True))
    big, small = max(sizes), min(sizes)
    n_large = sum(1 for e in sizes if e == big) if big != small else 0
    return Allocation(sizes, value, n_large, M - n_large,
                      (beta + big ** -2) ** -0.5, (beta + small ** -2) ** -0.5)


def theorem1_distortion(s: float, t: float, N: int, M: int, beta: float) -> float:
    """Minimum two-tier distortion for N APs and M BSs on uniform ``[s, t]``."""
    alloc = lemma2_minimizer(N, M, beta)
    span = alloc.n_large * alloc.len_large + alloc.n_small * alloc.len_small
    return (t - s) ** 2 / (12.0 * (1.0 + beta)) * span ** -2


def theorem1_solution(s: float, t: float, N: int, M: int, beta: float) -> Closed1DSolution:
    """Build the optimal deployment on uniform ``[s, t]``.

    Clusters are laid out left to right, larger clusters first. Each cluster
    is split evenly into AP cells, its BS sits at the cluster midpoint and
    each AP sits on the segment from its cell midpoint to the BS.
    """
    if not t > s:
        raise InvalidArgs("need t > s")
    if beta < 0:
        raise InvalidArgs("beta must be nonnegative")
    alloc = lemma2_minimizer(N, M, beta)
    length = t - s
    span = alloc.n_large * alloc.len_large + alloc.n_small * alloc.len_small
    cluster_len = [alloc.len_large] * alloc.n_large + [alloc.len_small] * alloc.n_small
    cluster_bounds = s + length * np.concatenate([[0.0], np.cumsum(cluster_len)]) / span
    cluster_bounds[-1] = t

    cells, index_map = [], []
    for m, size in enumerate(alloc.sizes):
        lo, hi = cluster_bounds[m], cluster_bounds[m + 1]
        edges = lo + (hi - lo) * np.arange(size + 1) / size
        cells.append(edges[:-1])
        index_map += [m] * size
    cell_bounds = np.concatenate(cells + [[t]])
    index_map = np.array(index_map, dtype=np.intp)

    bss = 0.5 * (cluster_bounds[:-1] + cluster_bounds[1:])
    mids = 0.5 * (cell_bounds[:-1] + cell_bounds[1:])
    aps = shrink(mids, bss, index_map, beta)
    return Closed1DSolution(bss, aps, cell_bounds, cluster_bounds, index_map,
                            theorem1_distortion(s, t, N, M, beta), alloc.sizes, beta)


def interval_distortion(aps, bss, index_map, cell_bounds, beta: float) -> float:
    """Exact two-tier distortion of a 1D deployment whose AP cells are the
    consecutive intervals in ``cell_bounds``, under the uniform density.

    Each cell ``[a, b]`` contributes
    ``((p - mid)**2 + (b - a)**2 / 12 + beta (p - q)**2) (b - a) / length``.
    """
    aps = np.ravel(aps)
    bss = np.ravel(bss)
    bounds = np.asarray(cell_bounds, dtype=float)
    length = bounds[-1] - bounds[0]
    widths = np.diff(bounds)
    mids = 0.5 * (bounds[:-1] + bounds[1:])
    local = (aps - mids) ** 2 + widths ** 2 / 12.0 + beta * (aps - bss[index_map]) ** 2
    return float(np.sum(local * widths) / length)


def uniform_quantizer(s: float, t: float, N: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Optimal N-level quantizer of uniform ``[s, t]``: points, cell bounds and
    distortion ``(t - s)**2 / (12 N**2)``."""
    if N < 1 or not t > s:
        raise InvalidArgs("need N >= 1 and t > s")
    bounds = s + (t - s) * np.arange(N + 1) / N
    points = s + (2 * np.arange(1, N + 1) - 1) * (t - s) / (2 * N)
    return points, bounds, lemma1_bound(N, t - s)


def prop1_solution(quantizer_points, quantizer_distortion: float, centroid, spread: float,
                   beta: float, partition: PartitionState | None = None) -> Prop1Solution:
    """Optimal single-BS deployment from an optimal regular quantizer.

    The BS goes to the region centroid and every quantizer point is pulled
    ``beta/(1+beta)`` of the way toward it. ``spread`` is the second moment
    of the density about its centroid. The predicted distortion is
    ``(quantizer_distortion + beta * spread) / (1 + beta)``.
    """
    if beta < 0:
        raise InvalidArgs("beta must be nonnegative")
    x = np.asarray(quantizer_points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    q = np.atleast_1d(np.asarray(centroid, dtype=float))[None, :]
    T = np.zeros(len(x), dtype=np.intp)
    aps = shrink(x, q, T, beta)
    value = (quantizer_distortion + beta * spread) / (1.0 + beta)
    return Prop1Solution(Deployment(aps, q, T), partition, value, quantizer_distortion, spread)


def prop1_from_grid(grid: Grid, quantizer_points, partition: PartitionState,
                    beta: float) -> Prop1Solution:
    """:func:`prop1_solution` with all moments evaluated on the grid."""
    q = region_centroid(grid)
    spread = float(grid.weights @ np.sum((grid.points - q) ** 2, axis=1))
    d_r = quantizer_distortion(grid, quantizer_points, partition)
    return prop1_solution(quantizer_points, d_r, q, spread, beta, partition)


def prop1_uniform_interval(s: float, t: float, N: int, beta: float) -> Prop1Solution:
    """Closed-form single-BS optimum for N APs on uniform ``[s, t]``."""
    points, _, d_r = uniform_quantizer(s, t, N)
    return prop1_solution(points, d_r, 0.5 * (s + t), (t - s) ** 2 / 12.0, beta)

