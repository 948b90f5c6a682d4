"""Rectangular parameter sweeps of the maximal violation.

Every grid node is an independent maximization (settings re-optimized
from scratch, no warm starts, so contour shapes are unbiased near optimum
switches); nodes may therefore run in parallel.  Per-node seeds derive
from the base seed and the node position, making grids bit-reproducible
at any worker count.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bell import BellFunctional
from .optim import OptimOptions, maximize
from .scenarios import Scenario


@dataclass(frozen=True)
class ScanGrid:
    """A rectangular sweep of maximal CH values with run metadata."""

    x_name: str
    y_name: str
    x_values: np.ndarray
    y_values: np.ndarray
    values: np.ndarray  # shape (ny, nx); values[iy, ix] at (x[ix], y[iy])
    metadata: dict

    def __post_init__(self):
        x = np.asarray(self.x_values, dtype=float)
        y = np.asarray(self.y_values, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (y.size, x.size):
            raise ValueError(f"values shape {v.shape} does not match axes ({y.size}, {x.size})")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid values must be finite")
        for arr in (x, y, v):
            arr.setflags(write=False)
        object.__setattr__(self, "x_values", x)
        object.__setattr__(self, "y_values", y)
        object.__setattr__(self, "values", v)


def _node_seed(base_seed: int, iy: int, ix: int) -> int:
    return int(np.random.SeedSequence((int(base_seed), iy, ix)).generate_state(1)[0])


def _axis(rng, n: int) -> np.ndarray:
    lo, hi = (float(v) for v in rng)
    if n < 2 or not lo < hi:
        raise ValueError(f"bad axis range {rng!r} with resolution {n}")
    return np.linspace(lo, hi, n)


_WORKER_CTX = {}


def _eval_ab_node(args):
    (iy, ix), (a, b) = args
    sc, f, eta, opts = _WORKER_CTX["job"]
    o = opts.replace(rng_seed=_node_seed(opts.rng_seed, iy, ix))
    return iy, ix, maximize(sc, f, eta=eta, fix_params=(a, b), opts=o).total


def _eval_eta_a_node(args):
    (iy, ix), (eta, a) = args
    sc, f, _, opts = _WORKER_CTX["job"]
    o = opts.replace(rng_seed=_node_seed(opts.rng_seed, iy, ix))
    return iy, ix, maximize(sc, f, eta=eta, fix_params=(a,), opts=o).total


def _init_worker(job):
    _WORKER_CTX["job"] = job


def _run_nodes(eval_fn, jobs, job_ctx, shape, threads):
    values = np.empty(shape)
    if threads and threads > 1:
        with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker,
                                 initargs=(job_ctx,)) as pool:
            for iy, ix, v in pool.map(eval_fn, jobs, chunksize=8):
                values[iy, ix] = v
    else:
        _init_worker(job_ctx)
        for job in jobs:
            iy, ix, v = eval_fn(job)
            values[iy, ix] = v
    return values


def _metadata(sc: Scenario, f: BellFunctional, eta, noise, opts: OptimOptions) -> dict:
    return {
        "scenario": sc.kind,
        "outcome_pair": sc.outcome_pair,
        "functional": f.name,
        "eta": eta,
        "noise": noise,
        "multistarts": opts.multistarts,
        "seed": opts.rng_seed,
        "function_tolerance": opts.function_tolerance,
        "max_iterations": opts.max_iterations,
    }


def scan_ab(sc: Scenario, f: BellFunctional, eta: float, a_range, b_range,
            resolution=41, opts: OptimOptions = OptimOptions(), threads: int = 1) -> ScanGrid:
    """Maximal CH over settings at every (a, b) node of a qutrit scenario."""
    if sc.local_dim != 3:
        raise ValueError("scan_ab requires a qutrit scenario")
    nx, ny = (resolution, resolution) if np.isscalar(resolution) else resolution
    xs, ys = _axis(a_range, nx), _axis(b_range, ny)
    jobs = [((iy, ix), (xs[ix], ys[iy])) for iy in range(ny) for ix in range(nx)]
    values = _run_nodes(_eval_ab_node, jobs, (sc, f, eta, opts), (ny, nx), threads)
    md = _metadata(sc, f, eta, 0.0, opts)
    return ScanGrid("a", "b", xs, ys, values, md)


def scan_eta_a(sc: Scenario, f: BellFunctional, eta_range, a_range,
               resolution=41, opts: OptimOptions = OptimOptions(), threads: int = 1) -> ScanGrid:
    """Maximal CH over settings on an (eta, a) grid for the qubit scenario."""
    if sc.kind != "qubit":
        raise ValueError("scan_eta_a requires the qubit scenario")
    nx, ny = (resolution, resolution) if np.isscalar(resolution) else resolution
    xs, ys = _axis(eta_range, nx), _axis(a_range, ny)
    jobs = [((iy, ix), (xs[ix], ys[iy])) for iy in range(ny) for ix in range(nx)]
    values = _run_nodes(_eval_eta_a_node, jobs, (sc, f, None, opts), (ny, nx), threads)
    md = _metadata(sc, f, None, 0.0, opts)
    return ScanGrid("eta", "a", xs, ys, values, md)


# --- export / import ----------------------------------------------------

def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def export_grid(grid: ScanGrid, fmt: str, path) -> None:
    """Write a grid as CSV (`x,y,value` per node) or JSON with metadata."""
    if fmt == "csv":
        lines = [f"{grid.x_name},{grid.y_name},ch"]
        for iy, y in enumerate(grid.y_values):
            for ix, x in enumerate(grid.x_values):
                lines.append(f"{_fmt(x)},{_fmt(y)},{_fmt(grid.values[iy, ix])}")
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        doc = {
            "x_name": grid.x_name,
            "y_name": grid.y_name,
            "x_values": [float(v) for v in grid.x_values],
            "y_values": [float(v) for v in grid.y_values],
            "values": [[float(v) for v in row] for row in grid.values],
            "metadata": grid.metadata,
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOError(f"cannot write grid to {path}: {exc}") from exc


def load_grid_json(path) -> ScanGrid:
    with open(path) as fh:
        doc = json.load(fh)
    return ScanGrid(doc["x_name"], doc["y_name"],
                    np.array(doc["x_values"]), np.array(doc["y_values"]),
                    np.array(doc["values"]), doc["metadata"])
