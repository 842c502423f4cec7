"""Random-restart experiments measuring power savings over random deployment.

Every trial draws its initial deployment from its own PCG64 stream, spawned
from ``numpy.random.SeedSequence(seed)``, so trial ``k`` sees the same
initial positions regardless of the trial count or worker scheduling.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .exceptions import ConfigError
from .lloyd import LloydConfig, Solution, otl, random_deployment, ttl
from .partition import Deployment, best_index_map, distortion, energy_voronoi
from .spatial import (
    DensitySpec,
    GaussianComponent,
    GaussianMixture,
    Grid,
    Region,
    build_grid,
    density_from_dict,
)

logger = logging.getLogger(__name__)

THREADS_ENV = "TIERED_DEPLOY_THREADS"
ALGORITHMS = ("otl", "ttl")

#: Five-bump traffic density of the desk-scale experiments, each bump
#: ``5 * exp(-0.5 * r**2)``.
WSN_CENTERS = ((8.0, 1.0), (4.0, 9.0), (7.6, 7.6), (9.4, 5.0), (2.0, 2.0))
WSN_DENSITY = GaussianMixture(tuple(GaussianComponent(5.0, c, 0.5) for c in WSN_CENTERS))
WSN_REGION = Region.rect(0.0, 10.0, 0.0, 10.0)


@dataclass
class ExperimentConfig:
    region: Region
    density: DensitySpec
    N: int
    M: int
    beta: float = 1.0
    trials: int = 50
    maxIterations: int = 100
    resolution: int = 256
    seed: int = 0
    algorithm: str = "both"

    def __post_init__(self):
        if isinstance(self.region, dict):
            self.region = Region.from_dict(self.region)
        if isinstance(self.density, dict):
            self.density = density_from_dict(self.density)
        problems = []
        for name in ("N", "M", "trials", "maxIterations", "resolution"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
                problems.append(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.seed, (int, np.integer)) or isinstance(self.seed, bool) or self.seed < 0:
            problems.append(f"seed must be a nonnegative integer, got {self.seed!r}")
        if not isinstance(self.beta, (int, float)) or isinstance(self.beta, bool) or self.beta < 0:
            problems.append(f"beta must be a nonnegative number, got {self.beta!r}")
        if self.algorithm not in ALGORITHMS + ("both",):
            problems.append(f"algorithm must be otl, ttl or both, got {self.algorithm!r}")
        if not problems and self.algorithm in ("otl", "both") and self.N < self.M:
            problems.append("OTL needs N >= M")
        if problems:
            raise ConfigError("; ".join(problems))
        self.beta = float(self.beta)

    @property
    def algorithms(self) -> tuple[str, ...]:
        return ALGORITHMS if self.algorithm == "both" else (self.algorithm,)

    def to_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["region"] = self.region.to_dict()
        out["density"] = self.density.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
        missing = sorted(n for n in ("region", "density", "N", "M") if n not in data)
        if missing:
            raise ConfigError(f"missing config fields: {', '.join(missing)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def preset(name: str, **overrides) -> ExperimentConfig:
    """``wsn1`` (20 APs, 1 BS) or ``wsn2`` (20 APs, 4 BSs) on ``[0, 10]**2``."""
    bss = {"wsn1": 1, "wsn2": 4}
    if name not in bss:
        raise ConfigError(f"unknown preset {name!r}; choose wsn1 or wsn2")
    params = dict(region=WSN_REGION, density=WSN_DENSITY, N=20, M=bss[name], beta=1.0)
    params.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**params)


@dataclass
class TrialResult:
    trial: int
    initial: float
    final: dict
    solutions: dict = field(repr=False, default_factory=dict)

    def savings(self, algorithm: str) -> float:
        return 100.0 * (1.0 - self.final[algorithm] / self.initial)


@dataclass
class SavingsReport:
    """Per-trial initial/final distortions and mean savings per algorithm."""

    config: ExperimentConfig
    trials: list

    @property
    def algorithms(self) -> tuple[str, ...]:
        return self.config.algorithms

    def per_trial(self, algorithm: str) -> list[tuple[float, float, float]]:
        return [(t.initial, t.final[algorithm], t.savings(algorithm)) for t in self.trials]

    def mean_savings(self, algorithm: str) -> float:
        return float(np.mean([t.savings(algorithm) for t in self.trials]))

    def best(self, algorithm: str) -> TrialResult:
        return min(self.trials, key=lambda t: t.final[algorithm])

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "mean_savings_pct": {a: self.mean_savings(a) for a in self.algorithms},
            "per_trial": {
                a: [
                    {"trial": t.trial, "initial": i, "final": f, "savings_pct": s}
                    for t, (i, f, s) in zip(self.trials, self.per_trial(a))
                ]
                for a in self.algorithms
            },
        }


def baseline_distortion(grid: Grid, aps, bss, beta: float) -> float:
    """Distortion of a deployment under its best index map and EVD partition."""
    T = best_index_map(aps, bss)
    part = energy_voronoi(grid, aps, bss, T, beta)
    return distortion(grid, Deployment(aps, bss, T), part, beta).total


def _worker_count() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def run_trial(grid: Grid, config: ExperimentConfig, trial: int, seed_seq,
              keep_solutions: bool = True) -> TrialResult:
    aps, bss = random_deployment(config.region, config.N, config.M, seed_seq)
    initial = baseline_distortion(grid, aps, bss, config.beta)
    lloyd_config = LloydConfig(max_iterations=config.maxIterations)
    run = {"otl": otl, "ttl": ttl}
    final, solutions = {}, {}
    for name in config.algorithms:
        sol: Solution = run[name](grid, config.N, config.M, config.beta, aps, bss, lloyd_config)
        final[name] = sol.report.total
        if keep_solutions:
            solutions[name] = sol
    return TrialResult(trial, initial, final, solutions)


def run_experiment(config: ExperimentConfig, grid: Grid | None = None,
                   keep_solutions: bool = True, workers: int | None = None) -> SavingsReport:
    """Run ``config.trials`` random restarts of the configured algorithm(s).

    Trials run on a thread pool capped by ``TIERED_DEPLOY_THREADS``; results
    are ordered by trial index.
    """
    if grid is None:
        grid = build_grid(config.region, config.density, config.resolution)
    streams = np.random.SeedSequence(config.seed).spawn(config.trials)
    workers = workers or min(_worker_count(), config.trials)
    logger.info("running %d trials of %s on %d worker(s)", config.trials,
                "+".join(config.algorithms), workers)
    args = [(grid, config, k, s, keep_solutions) for k, s in enumerate(streams)]
    if workers == 1:
        trials = [run_trial(*a) for a in args]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trials = list(pool.map(lambda a: run_trial(*a), args))
    return SavingsReport(config, trials)
