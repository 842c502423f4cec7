"""Energy-efficient deployment of access points and base stations in
two-tiered wireless sensor networks."""

from .analytic import (
    dlb_bruteforce,
    lemma1_bound,
    lemma2_minimizer,
    prop1_from_grid,
    prop1_solution,
    prop1_uniform_interval,
    theorem1_distortion,
    theorem1_solution,
)
from .estimators import OneTieredLloyd, RegularLloyd, TwoTieredLloyd
from .exceptions import ConfigError, InconsistentPartition, InvalidArgs, TooLarge, ZeroMass
from .experiment import ExperimentConfig, SavingsReport, preset, run_experiment
from .lloyd import LloydConfig, Solution, otl, random_deployment, regular_lloyd, ttl
from .partition import (
    Deployment,
    DistortionReport,
    PartitionState,
    best_index_map,
    distortion,
    energy_voronoi,
    fixed_point_residual,
)
from .spatial import (
    GaussianComponent,
    GaussianMixture,
    Grid,
    GridTable,
    Region,
    Uniform,
    build_grid,
    region_centroid,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Deployment",
    "DistortionReport",
    "ExperimentConfig",
    "GaussianComponent",
    "GaussianMixture",
    "Grid",
    "GridTable",
    "InconsistentPartition",
    "InvalidArgs",
    "LloydConfig",
    "OneTieredLloyd",
    "PartitionState",
    "Region",
    "RegularLloyd",
    "SavingsReport",
    "Solution",
    "TooLarge",
    "TwoTieredLloyd",
    "Uniform",
    "ZeroMass",
    "best_index_map",
    "build_grid",
    "distortion",
    "dlb_bruteforce",
    "energy_voronoi",
    "fixed_point_residual",
    "lemma1_bound",
    "lemma2_minimizer",
    "otl",
    "preset",
    "prop1_from_grid",
    "prop1_solution",
    "prop1_uniform_interval",
    "random_deployment",
    "region_centroid",
    "regular_lloyd",
    "run_experiment",
    "theorem1_distortion",
    "theorem1_solution",
    "ttl",
]
