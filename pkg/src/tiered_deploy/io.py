"""JSON and CSV export of solutions, traces and plotting data."""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

from .lloyd import Solution
from .spatial import Grid, Region, build_grid, density_from_dict


def grid_spec(grid: Grid) -> dict | None:
    """JSON description sufficient to rebuild a grid, or None for sample grids."""
    if grid.region is None or grid.density is None:
        return None
    return {
        "region": grid.region.to_dict(),
        "density": grid.density.to_dict(),
        "resolution": list(grid.resolution),
    }


def grid_from_spec(spec: dict) -> Grid:
    return build_grid(Region.from_dict(spec["region"]), density_from_dict(spec["density"]),
                      spec["resolution"])


def solution_document(solution: Solution, grid: Grid | None = None) -> dict:
    doc = {"solution": solution.to_dict()}
    if grid is not None:
        doc["grid"] = grid_spec(grid)
    return doc


def dump_json(data, path) -> Path:
    path = Path(path)
    try:
        with open(path, "w") as fh:
            json.dump(data, fh, indent=1, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def write_solution(solution: Solution, path, grid: Grid | None = None) -> Path:
    return dump_json(solution_document(solution, grid), path)


def read_solution(path) -> tuple[Solution, Grid | None]:
    """Load a solution file; the grid is rebuilt when the file describes one."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc
    grid = grid_from_spec(doc["grid"]) if doc.get("grid") else None
    return Solution.from_dict(doc["solution"]), grid


def _write_rows(path, header, rows) -> Path:
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def _axes(dim: int) -> list[str]:
    return ["x", "y"][:dim]


def write_trace_csv(solution: Solution, path) -> Path:
    """One row per trace entry: iteration, distortion, sensor_term, ap_term."""
    terms = solution.trace_terms or [("", "")] * len(solution.trace)
    rows = [(i, d, s, a) for i, (d, (s, a)) in enumerate(zip(solution.trace, terms))]
    return _write_rows(path, ["iteration", "distortion", "sensor_term", "ap_term"], rows)


def write_assignment_csv(solution: Solution, grid: Grid, path) -> Path:
    """One row per grid point: coordinates, serving AP and that AP's BS."""
    assign = solution.partition.assign
    if len(assign) != grid.size:
        raise ValueError(f"solution covers {len(assign)} points but the grid has {grid.size}")
    bs = solution.deployment.index_map[assign]
    rows = (list(p) + [int(a), int(b)] for p, a, b in zip(grid.points.tolist(), assign, bs))
    return _write_rows(path, _axes(grid.dim) + ["ap_index", "bs_index"], rows)


def write_nodes_csv(solution: Solution, path) -> Path:
    """AP, BS and AP-cell-centroid positions labelled by cluster (BS index)."""
    dep, part = solution.deployment, solution.partition
    dim = dep.aps.shape[1]
    rows = []
    for n, p in enumerate(dep.aps.tolist()):
        rows.append(["ap", n] + p + [int(dep.index_map[n]), float(part.volumes[n])])
    for m, q in enumerate(dep.bss.tolist()):
        rows.append(["bs", m] + q + [m, ""])
    for n, c in enumerate(part.centroids.tolist()):
        if part.volumes[n] > 0:
            rows.append(["centroid", n] + c + [int(dep.index_map[n]), float(part.volumes[n])])
    return _write_rows(path, ["kind", "index"] + _axes(dim) + ["cluster", "mass"], rows)


def export(solution: Solution, fmt: str, out_dir, grid: Grid | None = None,
           stem: str = "solution") -> list[Path]:
    """Write ``solution`` in one of the formats ``json``, ``csv`` or ``plotdata``.

    ``csv`` writes the trace and, when a grid is available, the assignment
    raster. ``plotdata`` adds the node table so deployment plots can be drawn
    by external tools.
    """
    out_dir = Path(out_dir)
    os.makedirs(out_dir, exist_ok=True)
    if fmt == "json":
        return [write_solution(solution, out_dir / f"{stem}.json", grid)]
    if fmt not in ("csv", "plotdata"):
        raise ValueError(f"unknown export format {fmt!r}")
    written = [write_trace_csv(solution, out_dir / f"{stem}_trace.csv")]
    if grid is not None:
        written.append(write_assignment_csv(solution, grid, out_dir / f"{stem}_raster.csv"))
    if fmt == "plotdata":
        written.append(write_nodes_csv(solution, out_dir / f"{stem}_nodes.csv"))
    return written
