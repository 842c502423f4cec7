"""Target regions, data-rate densities and the midpoint-rule grid.

Every integral over the sensing field is evaluated as a weighted sum over
the cell centres of a regular grid: ``int g(w) f(w) dw ~ sum_k g(w_k) f(w_k) |cell|``.
The grid weights therefore carry both the density and the cell area.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence, Union

import numpy as np

from .exceptions import ConfigError, ZeroMass

DEFAULT_RESOLUTION = {1: 4096, 2: 256}


@dataclass(frozen=True)
class Region:
    """An interval ``[s, t]`` or an axis-aligned rectangle.

    ``bounds`` holds one ``(lo, hi)`` pair per axis.
    """

    kind: str
    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.kind not in ("interval", "rect"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if len(bounds) != (1 if self.kind == "interval" else 2):
            raise ValueError(f"{self.kind} region needs {self.dim} axis bounds")
        for lo, hi in bounds:
            if not hi > lo:
                raise ValueError(f"region bounds must have positive length, got ({lo}, {hi})")
        object.__setattr__(self, "bounds", bounds)

    @classmethod
    def interval(cls, s: float, t: float) -> "Region":
        return cls("interval", ((s, t),))

    @classmethod
    def rect(cls, x0: float, x1: float, y0: float, y1: float) -> "Region":
        return cls("rect", ((x0, x1), (y0, y1)))

    @property
    def dim(self) -> int:
        return 1 if self.kind == "interval" else 2

    @property
    def lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.bounds])

    @property
    def upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.bounds])

    @property
    def measure(self) -> float:
        return float(np.prod(self.upper - self.lower))

    def contains(self, points, atol: float = 0.0) -> np.ndarray:
        points = np.atleast_2d(points)
        return np.all((points >= self.lower - atol) & (points <= self.upper + atol), axis=1)

    def to_dict(self) -> dict:
        if self.kind == "interval":
            return {"kind": "interval", "bounds": list(self.bounds[0])}
        return {"kind": "rect", "bounds": [list(b) for b in self.bounds]}

    @classmethod
    def from_dict(cls, data: dict) -> "Region":
        try:
            kind = data["kind"]
            bounds = data["bounds"]
            if kind == "interval":
                return cls.interval(*bounds)
            return cls(kind, tuple(tuple(b) for b in bounds))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid region {data!r}: {exc}") from exc


class Uniform:
    """Constant density normalized to unit mass over the region."""

    kind = "uniform"

    def evaluate(self, points: np.ndarray, region: Region) -> np.ndarray:
        return np.full(len(points), 1.0 / region.measure)

    def to_dict(self) -> dict:
        return {"kind": self.kind}

    def __eq__(self, other):
        return isinstance(other, Uniform)

    def __repr__(self):
        return "Uniform()"


@dataclass(frozen=True)
class GaussianComponent:
    amp: float
    center: tuple[float, ...]
    inv_scale: float

    def __post_init__(self):
        if not (self.amp > 0 and self.inv_scale > 0):
            raise ValueError("Gaussian components need amp > 0 and inv_scale > 0")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))


@dataclass(frozen=True)
class GaussianMixture:
    """Sum of ``amp * exp(-inv_scale * ||w - center||**2)`` terms.

    The mixture is neither truncated to the region nor normalized.
    """

    components: tuple[GaussianComponent, ...]
    kind: str = field(default="gaussian_mixture", init=False)

    def __post_init__(self):
        comps = tuple(
            c if isinstance(c, GaussianComponent) else GaussianComponent(**c)
            for c in self.components
        )
        if not comps:
            raise ValueError("a Gaussian mixture needs at least one component")
        object.__setattr__(self, "components", comps)

    def evaluate(self, points: np.ndarray, region: Region | None = None) -> np.ndarray:
        points = np.atleast_2d(points)
        out = np.zeros(len(points))
        for c in self.components:
            r2 = np.sum((points - np.asarray(c.center)) ** 2, axis=1)
            out += c.amp * np.exp(-c.inv_scale * r2)
        return out

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "components": [
                {"amp": c.amp, "center": list(c.center), "inv_scale": c.inv_scale}
                for c in self.components
            ],
        }


@dataclass(frozen=True, eq=False)
class GridTable:
    """Explicit nonnegative density values, one per grid point in grid order."""

    values: np.ndarray
    kind: str = field(default="grid_table", init=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("grid table values must be finite and nonnegative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def evaluate(self, points: np.ndarray, region: Region | None = None) -> np.ndarray:
        if len(points) != len(self.values):
            raise ValueError(
                f"grid table has {len(self.values)} values but the grid has {len(points)} points"
            )
        return self.values.copy()

    def to_dict(self) -> dict:
        return {"kind": self.kind, "values": self.values.tolist()}

    def __eq__(self, other):
        return isinstance(other, GridTable) and np.array_equal(self.values, other.values)


DensitySpec = Union[Uniform, GaussianMixture, GridTable]


def density_from_dict(data: dict) -> DensitySpec:
    """Parse the JSON form of a density specification."""
    try:
        kind = data["kind"]
        if kind == "uniform":
            return Uniform()
        if kind == "gaussian_mixture":
            return GaussianMixture(tuple(GaussianComponent(**c) for c in data["components"]))
        if kind == "grid_table":
            return GridTable(data["values"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid density {data!r}: {exc}") from exc
    raise ConfigError(f"unknown density kind {kind!r}")


@dataclass(frozen=True, eq=False)
class Grid:
    """Quadrature points and weights for integrals against the density.

    Attributes
    ----------
    points : ndarray of shape (n_points, dim)
        Cell centres. In 2D the x index varies slowest.
    weights : ndarray of shape (n_points,)
        ``f(point) * cell_area``, i.e. the density mass of each cell.
    cell_widths : ndarray of shape (dim,)
        Side lengths of one grid cell; NaN when the grid was built from
        arbitrary weighted samples.
    """

    points: np.ndarray
    weights: np.ndarray
    cell_widths: np.ndarray
    region: Region | None = None
    resolution: tuple[int, ...] | None = None
    density: Any = None

    def __post_init__(self):
        for name in ("points", "weights", "cell_widths"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_samples(cls, X, sample_weight=None) -> "Grid":
        """Wrap weighted sample points, e.g. a user-supplied discretization."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        w = np.ones(len(X)) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        if w.sum() <= 0:
            raise ZeroMass("sample weights sum to zero")
        return cls(X, w, np.full(X.shape[1], np.nan))

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def cell_width(self) -> float:
        """Largest cell side, the natural resolution limit of grid results."""
        return float(np.max(self.cell_widths))


def _resolution_tuple(resolution, dim: int) -> tuple[int, ...]:
    if resolution is None:
        resolution = DEFAULT_RESOLUTION[dim]
    if np.isscalar(resolution):
        resolution = (int(resolution),) * dim
    resolution = tuple(int(r) for r in resolution)
    if len(resolution) != dim or any(r < 1 for r in resolution):
        raise ValueError(f"resolution must be {dim} positive integers, got {resolution}")
    return resolution


def build_grid(region: Region, density: DensitySpec,
               resolution: Union[int, Sequence[int], None] = None) -> Grid:
    """Midpoint-rule grid over ``region`` with density-mass weights.

    Raises
    ------
    ZeroMass
        If the density vanishes on every grid point.
    """
    res = _resolution_tuple(resolution, region.dim)
    widths = (region.upper - region.lower) / np.array(res)
    axes = [lo + (np.arange(n) + 0.5) * h for (lo, _), n, h in zip(region.bounds, res, widths)]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.column_stack([m.ravel() for m in mesh])
    cell_area = float(np.prod(widths))

    f = np.asarray(density.evaluate(points, region), dtype=float)
    if np.any(f < 0):
        raise ValueError("density must be nonnegative")
    weights = f * cell_area
    if not np.any(weights > 0):
        raise ZeroMass("density is zero on every grid point")
    return Grid(points, weights, widths, region=region, resolution=res, density=density)


def region_centroid(grid: Grid) -> np.ndarray:
    """Density-weighted centroid of the whole region."""
    mass = grid.mass
    if not mass > 0:
        raise ZeroMass("grid has no mass")
    return grid.weights @ grid.points / mass
