"""The ``verify``, ``spectrum`` and ``evolve`` commands as library functions."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .._linalg import max_abs
from ..clifford import alpha_from_gamma, random_similarity, similarity_transform
from ..dynamics import (
    DynamicsConfig,
    GridField,
    Grid,
    build_hamiltonian,
    check_current_conservation,
    conservation_ladder,
    discrete_inner,
    evolve,
    observed_orders,
    plane_wave,
    smooth_potential,
    spectrum,
    symbol_spectrum_1d,
    wave_packet,
)
from ..errors import DiracError
from ..hermitize import transport_hermitizing
from ..metric import ETA
from ..serialize import write_spectrum_csv, write_trajectory
from .report import build_report, dumps
from .scenario import DynamicsSpec, Scenario
from .suites import FAIL, PASS, Check, Context, _bounded, run_checks


def run_verify(sc: Scenario, tol_scale: float = 1.0) -> dict:
    ctx = Context(sc)
    return build_report("verify", sc, run_checks(ctx, sc.checks), tol_scale)


def _config(spec: DynamicsSpec) -> DynamicsConfig:
    grid = Grid(spec.points, spec.spacing)
    pot = None
    if grid.dims == 1 and any(spec.amplitudes):
        pot = smooth_potential(grid.coordinates()[:, 0], grid.extent[0], spec.amplitudes)
    return DynamicsConfig(spec.mass, grid, spec.charge, pot)


def _error_check(name: str, exc: DiracError) -> Check:
    return Check(name, FAIL, details={"error": type(exc).__name__, "message": str(exc)})


def run_spectrum(sc: Scenario, out: Path | None = None, tol_scale: float = 1.0) -> dict:
    """Spectrum of the configured operator and of a random-similarity twin."""
    spec = sc.dynamics or DynamicsSpec()
    ctx = Context(sc)
    checks, artifacts = [], {}
    try:
        gs, pair = ctx.gs, ctx.pair
        cfg = _config(spec)
        als = alpha_from_gamma(gs)
        op = build_hamiltonian(als, cfg, pair.B)
        eig = spectrum(op)
        s = random_similarity(ctx.rng("spectrum_twin"), max_condition=spec.twin_condition)
        twin_op = build_hamiltonian(
            alpha_from_gamma(similarity_transform(gs, s)), cfg, transport_hermitizing(pair.B, s)
        )
        eig_twin = spectrum(twin_op)
    except DiracError as exc:
        return build_report("spectrum", sc, [_error_check("spectrum", exc)], tol_scale)

    checks.append(_bounded("hermiticity", op.hermiticity_residual(), sc.tol("hermiticity")))
    checks.append(
        _bounded(
            "twin_agreement",
            max_abs(eig - eig_twin),
            sc.tol("invariance") * s.condition,
            condition=s.condition,
        )
    )
    free = cfg.potential is None or cfg.charge == 0.0
    if free and cfg.grid.dims == 1:
        oracle = symbol_spectrum_1d(als, spec.mass, cfg.grid, pair.B)
        checks.append(_bounded("symbol_oracle", max_abs(eig - oracle), sc.tol("oracle")))
        checks.append(_bounded("plus_minus_pairs", max_abs(eig + eig[::-1]), sc.tol("oracle")))
    if spec.mass == 0.0:
        checks.append(_bounded("zero_mode", float(np.min(np.abs(eig))), sc.tol("oracle")))

    if out is not None:
        write_spectrum_csv(out / "spectrum.csv", eig)
        write_spectrum_csv(out / "spectrum_twin.csv", eig_twin)
        artifacts.update({"spectrum": "spectrum.csv", "spectrum_twin": "spectrum_twin.csv"})
    extra = {
        "certificates": {
            "eigenvalue_count": int(eig.size),
            "min_eigenvalue": float(eig[0]),
            "max_eigenvalue": float(eig[-1]),
            "twin_condition": s.condition,
            "B_eigenvalues": list(pair.eigenvalues),
        }
    }
    if artifacts:
        extra["artifacts"] = artifacts
    return build_report("spectrum", sc, checks, tol_scale, extra)


def _initial_field(sc: Scenario, spec: DynamicsSpec, grid: Grid, gs, B) -> tuple[GridField, float | None]:
    init = spec.initial
    if init.kind == "plane_wave":
        if grid.dims != 1 or max_abs(gs.metric.g_inv - ETA) > 1e-12:
            raise DiracError("plane-wave initial state needs a 1D grid over the Minkowski metric")
        p = 2.0 * np.pi * init.mode / grid.extent[0]
        pw = plane_wave(spec.mass, [p, 0.0, 0.0], init.branch, gs, spin=init.spin, spacing=grid.spacing, B=B)
        return pw.sample(grid), pw.energy
    center = [0.5 * e for e in grid.extent]
    momentum = [init.momentum] + [0.0] * (grid.dims - 1)
    return wave_packet(grid, init.spinor, center, init.width, momentum), None


def run_evolve(sc: Scenario, out: Path | None = None, tol_scale: float = 1.0) -> dict:
    """Crank-Nicolson run, conservation report and optional refinement ladder."""
    spec = sc.dynamics or DynamicsSpec()
    ctx = Context(sc)
    checks, artifacts, extra = [], {}, {}
    try:
        gs, pair = ctx.gs, ctx.pair
        cfg = _config(spec)
        op = build_hamiltonian(alpha_from_gamma(gs), cfg, pair.B)
        psi0, energy = _initial_field(sc, spec, cfg.grid, gs, pair.B)
        norm0 = discrete_inner(psi0, psi0, op).real
        psi0 = GridField(psi0.values / np.sqrt(norm0), cfg.grid)
        traj = evolve(psi0, op, spec.dt, spec.steps)
        cons = check_current_conservation(traj, gs, pair.A)
    except DiracError as exc:
        return build_report("evolve", sc, [_error_check("evolve", exc)], tol_scale)

    norms = np.array([discrete_inner(traj.field(k), traj.field(k), op).real for k in (0, traj.steps)])
    checks.append(_bounded("norm_drift", abs(norms[1] - norms[0]), sc.tol("norm_drift")))
    if energy is not None:
        checks.append(_bounded("current_conservation", cons.max_residual, sc.tol("conservation")))
        factor = ((1 - 0.5j * energy * spec.dt) / (1 + 0.5j * energy * spec.dt)) ** spec.steps
        gap = max_abs(traj.states[-1] - factor * psi0.values) / max_abs(psi0.values)
        checks.append(_bounded("eigenmode_phase", gap, 1e-8, energy=energy))
    else:
        checks.append(
            Check(
                "current_conservation",
                PASS,
                cons.max_residual,
                None,
                {"note": "discretization error of a single run; refinement order is the acceptance measure"},
            )
        )

    if spec.ladder:
        ladders = {"with_potential": spec.amplitudes}
        if spec.compare_without_potential and any(spec.amplitudes):
            ladders["without_potential"] = (0.0, 0.0, 0.0, 0.0)
        rows = []
        for label, amps in ladders.items():
            try:
                levels = conservation_ladder(
                    gs,
                    spec.ladder,
                    spec.length,
                    mass=spec.mass,
                    charge=spec.charge,
                    amplitudes=amps,
                    spinor=spec.initial.spinor,
                    width=spec.initial.width,
                    momentum=spec.initial.momentum,
                    courant=spec.dt / spec.spacing,
                    t_final=spec.dt * spec.steps,
                )
            except DiracError as exc:
                checks.append(_error_check(f"convergence_order.{label}", exc))
                continue
            orders = observed_orders(levels)
            for lv in levels:
                rows.append({"ladder": label, **lv.to_json()})
            chk = Check(
                f"convergence_order.{label}",
                PASS if min(orders) >= sc.tol("order") else FAIL,
                min(orders),
                sc.tol("order"),
                {"orders": orders, "comparison": ">="},
            )
            checks.append(chk)
        extra["refinement"] = rows

    if out is not None:
        write_trajectory(out / "trajectory", traj)
        (out / "conservation.json").write_text(json.dumps(cons.to_json(), indent=2, sort_keys=True) + "\n")
        artifacts.update(
            {"trajectory": "trajectory.bin", "trajectory_meta": "trajectory.json", "conservation": "conservation.json"}
        )
        extra["artifacts"] = artifacts
    extra["certificates"] = {"initial_norm": float(norms[0]), "final_norm": float(norms[1]), "steps": spec.steps}
    return build_report("evolve", sc, checks, tol_scale, extra)


__all__ = ["run_verify", "run_spectrum", "run_evolve", "dumps"]
