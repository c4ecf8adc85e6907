"""JSON, CSV and binary encodings for the package's data types.

* Real 4x4 matrices: flat list of 16 floats, row-major.
* Complex matrices: nested rows of ``[re, im]`` pairs, row-major.
* Spectra: CSV with header ``index,eigenvalue``.
* Trajectories: raw little-endian float64 (interleaved re, im; shape
  ``(steps + 1, size, 4)`` in C order) plus a JSON sidecar.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .clifford import GammaSet
from .dynamics import Grid, Trajectory
from .hermitize import Definiteness, HermitizingPair
from .metric import AffineMap, Metric, validate_metric

TRAJECTORY_FORMAT = "tensordirac-trajectory/1"


def real_matrix_to_json(X) -> list[float]:
    return [float(v) for v in np.asarray(X, dtype=float).ravel()]


def complex_matrix_to_json(X) -> list:
    X = np.asarray(X, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in X]


def complex_matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValueError("complex matrix must be nested rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def metric_to_json(m: Metric) -> list[float]:
    return m.to_list()


def metric_from_json(data) -> Metric:
    if len(data) != 16:
        raise ValueError("metric must have 16 entries")
    return validate_metric(data)


def affine_map_to_json(a: AffineMap) -> dict:
    return {"L": real_matrix_to_json(a.L), "M": real_matrix_to_json(a.M)}


def affine_map_from_json(data) -> AffineMap:
    amap = AffineMap.from_matrix(np.asarray(data["L"], dtype=float).reshape(4, 4))
    if "M" in data and np.max(np.abs(np.asarray(data["M"]).reshape(4, 4) @ amap.L - np.eye(4))) > 1e-9:
        raise ValueError("stored M is not the inverse of L")
    return amap


def gamma_set_to_json(gs: GammaSet) -> dict:
    return {"metric": metric_to_json(gs.metric), "gammas": [complex_matrix_to_json(g) for g in gs.gammas]}


def gamma_set_from_json(data) -> GammaSet:
    gammas = np.array([complex_matrix_from_json(g) for g in data["gammas"]])
    return GammaSet(gammas, metric_from_json(data["metric"]))


def hermitizing_pair_to_json(pair: HermitizingPair) -> dict:
    return {
        "A": complex_matrix_to_json(pair.A),
        "B": complex_matrix_to_json(pair.B),
        "nullspace_dim": pair.nullspace_dim,
        "definiteness": pair.definiteness.value,
        "eigenvalues": list(pair.eigenvalues),
        "normalization": dict(pair.normalization),
    }


def hermitizing_pair_from_json(data) -> HermitizingPair:
    return HermitizingPair(
        A=complex_matrix_from_json(data["A"]),
        B=complex_matrix_from_json(data["B"]),
        nullspace_dim=int(data["nullspace_dim"]),
        definiteness=Definiteness(data["definiteness"]),
        eigenvalues=tuple(data["eigenvalues"]),
        normalization=dict(data.get("normalization", {})),
    )


def write_spectrum_csv(path, eigenvalues) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "eigenvalue"])
        for i, e in enumerate(eigenvalues):
            w.writerow([i, repr(float(e))])


def read_spectrum_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return np.array([float(r["eigenvalue"]) for r in rows])


def write_trajectory(path, traj: Trajectory) -> tuple[Path, Path]:
    """Write ``<path>.bin`` and ``<path>.json``; returns both paths."""
    base = Path(path)
    bin_path = base.with_suffix(".bin")
    meta_path = base.with_suffix(".json")
    data = np.ascontiguousarray(traj.states, dtype="<c16")
    bin_path.write_bytes(data.tobytes())
    meta = {
        "format": TRAJECTORY_FORMAT,
        "dtype": "float64-le interleaved complex",
        "shape": [traj.steps + 1, traj.grid.size, 4],
        "grid": traj.grid.to_json(),
        "dt": traj.dt,
        "steps": traj.steps,
    }
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return bin_path, meta_path


def read_trajectory(path) -> Trajectory:
    base = Path(path)
    meta = json.loads(base.with_suffix(".json").read_text())
    if meta.get("format") != TRAJECTORY_FORMAT:
        raise ValueError("unrecognized trajectory format")
    raw = np.frombuffer(base.with_suffix(".bin").read_bytes(), dtype="<c16")
    states = raw.reshape(meta["shape"]).astype(complex)
    grid = Grid(tuple(meta["grid"]["points"]), float(meta["grid"]["spacing"]))
    return Trajectory(states, float(meta["dt"]), grid)
