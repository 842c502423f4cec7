"""Lloyd-type optimizers: the regular quantizer and the one-/two-tiered variants.

Empty cells never move a node: an AP whose cell has zero mass keeps its
position, and a BS whose cluster has zero mass keeps its position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .partition import (
    Deployment,
    DistortionReport,
    PartitionState,
    best_index_map,
    distortion,
    energy_voronoi,
    quantizer_distortion,
    shrink,
    voronoi,
)
from .spatial import Grid, Region

TTL_STEPS = ("move_aps", "partition", "move_bss", "cluster")


@dataclass
class LloydConfig:
    """Stopping rule and bookkeeping options shared by every optimizer.

    A run stops after ``max_iterations`` sweeps, or earlier once a sweep lowers
    the distortion by less than ``rel_tolerance`` times its previous value.
    With ``record_substeps`` the distortion after every sub-step is kept.
    """

    max_iterations: int = 100
    rel_tolerance: float = 1e-9
    record_substeps: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.rel_tolerance < 0:
            raise ValueError("rel_tolerance must be nonnegative")


class QuantizerResult(NamedTuple):
    points: np.ndarray
    partition: PartitionState
    trace: list
    iterations: int
    converged: bool
    substeps: list


@dataclass
class Solution:
    """Outcome of a two-tier optimizer run.

    ``trace[0]`` is the distortion of the initial deployment under its best
    index map and energy Voronoi partition; for TTL each later entry follows
    one full sweep. ``substeps`` holds ``(sweep, step, distortion)`` records
    when requested.
    """

    deployment: Deployment
    partition: PartitionState
    report: DistortionReport
    trace: list
    iterations: int
    converged: bool = False
    algorithm: str = "ttl"
    beta: float = 1.0
    substeps: list = field(default_factory=list)
    inner_traces: dict = field(default_factory=dict)
    trace_terms: list = field(default_factory=list)
    reproduction_points: np.ndarray | None = None

    @property
    def initial_distortion(self) -> float:
        return self.trace[0]

    @property
    def savings_pct(self) -> float:
        return 100.0 * (1.0 - self.report.total / self.trace[0])

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "beta": self.beta,
            "iterations": self.iterations,
            "converged": self.converged,
            "deployment": self.deployment.to_dict(),
            "partition": self.partition.to_dict(),
            "report": self.report.to_dict(),
            "trace": list(self.trace),
            "trace_terms": [list(t) for t in self.trace_terms],
            "substeps": [list(s) for s in self.substeps],
            "inner_traces": {k: list(v) for k, v in self.inner_traces.items()},
            "reproduction_points": (None if self.reproduction_points is None
                                    else self.reproduction_points.tolist()),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Solution":
        return cls(
            deployment=Deployment.from_dict(data["deployment"]),
            partition=PartitionState.from_dict(data["partition"]),
            report=DistortionReport.from_dict(data["report"]),
            trace=list(data["trace"]),
            trace_terms=[tuple(t) for t in data.get("trace_terms", [])],
            iterations=data["iterations"],
            converged=data["converged"],
            algorithm=data["algorithm"],
            beta=data["beta"],
            substeps=[tuple(s) for s in data.get("substeps", [])],
            inner_traces={k: list(v) for k, v in data.get("inner_traces", {}).items()},
            reproduction_points=(None if data.get("reproduction_points") is None
                                 else np.array(data["reproduction_points"], dtype=float)),
        )


def _stalled(previous: float, current: float, tol: float) -> bool:
    return previous - current <= tol * previous


def _check_init(points, k: int, dim: int, what: str) -> np.ndarray:
    arr = np.array(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None] if dim == 1 else arr[None, :]
    if arr.shape != (k, dim):
        raise ValueError(f"{what} must have shape ({k}, {dim}), got {arr.shape}")
    return arr


def regular_lloyd(grid: Grid, K: int, init, config: LloydConfig | None = None) -> QuantizerResult:
    """Classical K-level Lloyd quantizer for the grid density.

    Alternates centroid moves and nearest-point repartitioning; ``trace``
    starts with the distortion of ``init`` under its Voronoi partition.
    """
    config = config or LloydConfig()
    if K < 1:
        raise ValueError("K must be at least 1")
    points = _check_init(init, K, grid.dim, "init")
    part = voronoi(grid, points)
    trace = [quantizer_distortion(grid, points, part)]
    substeps = []
    converged = False
    it = 0
    while it < config.max_iterations:
        it += 1
        filled = part.volumes > 0
        points[filled] = part.centroids[filled]
        if config.record_substeps:
            substeps.append((it, "move", quantizer_distortion(grid, points, part)))
        part = voronoi(grid, points)
        current = quantizer_distortion(grid, points, part)
        if config.record_substeps:
            substeps.append((it, "partition", current))
        trace.append(current)
        if _stalled(trace[-2], current, config.rel_tolerance):
            converged = True
            break
    return QuantizerResult(points, part, trace, it, converged, substeps)


def ttl(grid: Grid, N: int, M: int, beta: float, initP, initQ,
        config: LloydConfig | None = None) -> Solution:
    """Two-tiered Lloyd algorithm.

    Each sweep (i) moves every AP to ``(c_n + beta q_T(n)) / (1 + beta)``,
    (ii) recomputes the energy Voronoi partition and its cell moments,
    (iii) moves every BS to the mass-weighted mean of its APs and
    (iv) reconnects every AP to its nearest BS. None of the four steps can
    increase the distortion.
    """
    config = config or LloydConfig()
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    P = _check_init(initP, N, grid.dim, "initP")
    Q = _check_init(initQ, M, grid.dim, "initQ")
    T = best_index_map(P, Q)
    part = energy_voronoi(grid, P, Q, T, beta)
    report = distortion(grid, Deployment(P, Q, T), part, beta)
    trace = [report.total]
    terms = [(report.sensor_term, report.ap_term)]
    substeps = []

    def record(sweep, step):
        if config.record_substeps:
            d = distortion(grid, Deployment(P, Q, T), part, beta).total
            substeps.append((sweep, step, d))

    converged = False
    sweep = 0
    while sweep < config.max_iterations:
        sweep += 1
        filled = part.volumes > 0
        P[filled] = shrink(part.centroids[filled], Q, T[filled], beta)
        record(sweep, "move_aps")

        part = energy_voronoi(grid, P, Q, T, beta)
        record(sweep, "partition")

        mass = np.bincount(T, weights=part.volumes, minlength=M)
        moved = mass > 0
        for axis in range(grid.dim):
            first = np.bincount(T, weights=part.volumes * P[:, axis], minlength=M)
            Q[moved, axis] = first[moved] / mass[moved]
        record(sweep, "move_bss")

        T = best_index_map(P, Q)
        record(sweep, "cluster")

        report = distortion(grid, Deployment(P, Q, T), part, beta)
        trace.append(report.total)
        terms.append((report.sensor_term, report.ap_term))
        if _stalled(trace[-2], trace[-1], config.rel_tolerance):
            converged = True
            break

    return Solution(Deployment(P, Q, T), part, report, trace, sweep,
                    converged=converged, algorithm="ttl", beta=beta, substeps=substeps,
                    trace_terms=terms)


def otl(grid: Grid, N: int, M: int, beta: float, initP, initQ,
        config: LloydConfig | None = None) -> Solution:
    """One-tiered Lloyd algorithm.

    An M-level quantizer started from ``initQ`` places the BSs; an N-level
    quantizer started from ``initP`` supplies the AP partition and points
    ``p'_n``. Each AP connects to the BS nearest ``p'_n`` and sits at
    ``(p'_n + beta q_T(n)) / (1 + beta)``.

    The returned trace is ``[initial, final]``; the inner quantizer traces
    are kept in ``inner_traces``.
    """
    config = config or LloydConfig()
    if not N >= M >= 1:
        raise ValueError("OTL needs N >= M >= 1")
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    P0 = _check_init(initP, N, grid.dim, "initP")
    Q0 = _check_init(initQ, M, grid.dim, "initQ")
    T0 = best_index_map(P0, Q0)
    initial = distortion(grid, Deployment(P0, Q0, T0), energy_voronoi(grid, P0, Q0, T0, beta), beta)

    bs_q = regular_lloyd(grid, M, Q0, config)
    ap_q = regular_lloyd(grid, N, P0, config)
    Q = bs_q.points
    T = best_index_map(ap_q.points, Q)
    P = shrink(ap_q.points, Q, T, beta)

    deployment = Deployment(P, Q, T)
    report = distortion(grid, deployment, ap_q.partition, beta)
    return Solution(
        deployment, ap_q.partition, report, [initial.total, report.total],
        iterations=max(bs_q.iterations, ap_q.iterations),
        converged=bs_q.converged and ap_q.converged,
        algorithm="otl", beta=beta,
        substeps=[("ap", *s) for s in ap_q.substeps] + [("bs", *s) for s in bs_q.substeps],
        inner_traces={"bs": bs_q.trace, "ap": ap_q.trace},
        trace_terms=[(initial.sensor_term, initial.ap_term), (report.sensor_term, report.ap_term)],
        reproduction_points=ap_q.points,
    )


def random_deployment(region: Region, N: int, M: int, seed=None) -> tuple[np.ndarray, np.ndarray]:
    """Draw N AP and then M BS positions i.i.d. uniform on the region.

    ``seed`` is anything ``numpy.random.default_rng`` accepts (int,
    SeedSequence or Generator); the bit generator is PCG64.
    """
    rng = np.random.default_rng(seed)
    lo, hi = region.lower, region.upper
    aps = rng.uniform(lo, hi, size=(N, region.dim))
    bss = rng.uniform(lo, hi, size=(M, region.dim))
    return aps, bss
