"""Registry of named verification checks run by ``tensordirac verify``.

Every check takes a :class:`Context` and returns a :class:`Check`. Failures
inside the library (``DiracError``) turn into a failed check rather than an
exception. Randomized checks draw from a generator seeded with the scenario
seed and the check name, so results do not depend on which other checks run.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .._linalg import max_abs
from ..clifford import (
    alpha_anticommutator_metric,
    alpha_from_gamma,
    build_gamma_for_metric,
    check_anticommutation,
    chiral_representation,
    dirac_representation,
    random_similarity,
    similarity_transform,
    tensor_transform,
)
from ..dynamics import DynamicsConfig, Grid, build_hamiltonian, smooth_potential, spectrum
from ..errors import DiracError, NotGaussian
from ..hermitize import (
    Definiteness,
    entrywise_ratio,
    hermitizing_via_construction,
    pair_residuals,
    solve_hermitizing,
    tensor_transport_A,
    transport_hermitizing,
)
from ..metric import ETA, AffineMap, eta_to_g_map, is_admissible, lemma_residual, random_affine_map
from ..observables import current, gamma5, hestenes_fields, inner_a, solve_charge_conjugation
from .scenario import DynamicsSpec, Scenario

PASS, FAIL, WARN = "pass", "fail", "warn"
RANDOM_TRIALS = 10


@dataclass
class Check:
    name: str
    status: str
    residual: float | None = None
    tolerance: float | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "details": self.details,
        }


def _bounded(name, residual, tol, **details) -> Check:
    return Check(name, PASS if residual <= tol else FAIL, float(residual), float(tol), details)


class Context:
    """Lazily computed objects shared by the checks of one scenario."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario

    @cached_property
    def gs(self):
        return self.scenario.gamma_set()

    @cached_property
    def metric(self):
        return self.gs.metric

    @cached_property
    def admissible(self):
        return is_admissible(self.metric)

    @cached_property
    def pair(self):
        return solve_hermitizing(self.gs)

    def rng(self, name: str) -> np.random.Generator:
        return np.random.default_rng([self.scenario.seed, zlib.crc32(name.encode())])

    def tol(self, key: str) -> float:
        return self.scenario.tol(key)

    @property
    def dynamics(self) -> DynamicsSpec:
        return self.scenario.dynamics or DynamicsSpec()

    def reduction_map(self) -> AffineMap | None:
        """Real map whose index transform takes the gammas to the Minkowski metric."""
        if max_abs(self.metric.g_inv - ETA) <= 1e-12:
            return None
        if self.scenario.factor is not None:
            return AffineMap.from_matrix(np.linalg.inv(self.scenario.factor))
        if self.admissible.admissible:
            return eta_to_g_map(self.metric)
        return None


def check_anticommutation_suite(ctx: Context) -> Check:
    scale = max(1.0, max_abs(ctx.metric.g_inv))
    return _bounded("anticommutation", check_anticommutation(ctx.gs), ctx.tol("anticommutation") * scale)


def check_admissibility(ctx: Context) -> Check:
    cert = ctx.admissible
    details = {
        "admissible": cert.admissible,
        "g00": cert.g00,
        "spatial_eigenvalues": list(cert.spatial_eigenvalues),
        "borderline": cert.borderline,
    }
    return Check("admissibility", PASS if cert.admissible else WARN, details=details)


def check_hermitizing_uniqueness(ctx: Context) -> Check:
    pair = ctx.pair
    tol = ctx.tol("hermitizing")
    res = pair_residuals(ctx.gs, pair)["A_gamma"] / max(1.0, max_abs(pair.A))
    details = {"nullspace_dim": pair.nullspace_dim, "A_gamma": res, "normalization": pair.normalization}
    status = PASS if pair.nullspace_dim == 1 and res <= tol else FAIL
    if ctx.scenario.gamma_file is None:
        amap = ctx.reduction_map()
        if amap is not None or max_abs(ctx.metric.g_inv - ETA) <= 1e-12:
            A_built = hermitizing_via_construction(ctx.gs, amap=amap)
            ratio = entrywise_ratio(pair.A, A_built)
            details["construction_ratio"] = {"re": ratio["ratio"].real, "im": ratio["ratio"].imag}
            details["ratio_imag"] = ratio["imag"]
            details["ratio_spread"] = ratio["spread"]
            rtol = ctx.tol("ratio")
            if max(ratio["imag"], ratio["spread"], ratio["off_support"]) > rtol:
                status = FAIL
    return Check("hermitizing_uniqueness", status, res, tol, details)


def check_definiteness(ctx: Context) -> Check:
    pair = ctx.pair
    details = {"kind": pair.definiteness.value, "eigenvalues": list(pair.eigenvalues)}
    if ctx.admissible.admissible:
        status = PASS if pair.definiteness is Definiteness.POSITIVE else FAIL
    else:
        # no definiteness guarantee outside admissible coordinates; report what was found
        status = WARN
    return Check("definiteness", status, min(pair.eigenvalues), None, details)


def check_alpha_hermitizing(ctx: Context) -> Check:
    res = pair_residuals(ctx.gs, ctx.pair)
    scale = max(1.0, max_abs(ctx.pair.B), max_abs(ctx.pair.A))
    worst = max(res["B_alpha"], res["A_from_B_gamma"], res["A_from_B_minus_A"], res["B_minus_A_gamma0"]) / scale
    return _bounded("alpha_hermitizing", worst, ctx.tol("hermitizing"), **res)


def check_alpha_anticommutation(ctx: Context) -> Check:
    als = alpha_from_gamma(ctx.gs)
    tol = ctx.tol("alpha_metric")
    try:
        am = alpha_anticommutator_metric(als)
    except NotGaussian as exc:
        return _bounded(
            "alpha_anticommutation",
            exc.expected_residual,
            tol,
            gaussian=False,
            rejected=True,
            g0j=[float(v) for v in exc.g0j],
        )
    return _bounded(
        "alpha_anticommutation",
        am.residual,
        tol,
        gaussian=True,
        h=[float(v) for v in am.h.ravel()],
        h_positive_definite=am.positive_definite,
    )


def check_lemma_map(ctx: Context) -> Check:
    if not ctx.admissible.admissible:
        return Check("lemma_map", WARN, details={"reason": "metric is not admissible"})
    amap = eta_to_g_map(ctx.metric)
    res = lemma_residual(ctx.metric, amap)
    ok_block = bool(np.all(amap.M[0, 1:] == 0.0) and amap.M[0, 0] > 0)
    chk = _bounded("lemma_map", res, ctx.tol("lemma"), M00=float(amap.M[0, 0]), block_triangular=ok_block)
    if not ok_block:
        chk.status = FAIL
    return chk


def _operator_spectrum(gs, B, spec: DynamicsSpec) -> np.ndarray:
    grid = Grid(spec.points, spec.spacing)
    x = grid.coordinates()[:, 0]
    pot = smooth_potential(x, grid.extent[0], spec.amplitudes) if grid.dims == 1 else None
    cfg = DynamicsConfig(spec.mass, grid, spec.charge, pot)
    return spectrum(build_hamiltonian(alpha_from_gamma(gs), cfg, B))


def check_constructor_equivalence(ctx: Context) -> Check:
    sc = ctx.scenario
    if sc.gamma_file is not None or not ctx.admissible.admissible:
        return Check("constructor_equivalence", WARN, details={"reason": "needs admissible metric and a built set"})
    base = chiral_representation() if sc.representation == "chiral" else dirac_representation()
    sets = {s: build_gamma_for_metric(ctx.metric, base=base, scheme=s, factor=sc.factor) for s in ("index", "tensor")}
    eigs = {s: _operator_spectrum(g, solve_hermitizing(g).B, ctx.dynamics) for s, g in sets.items()}
    gap = max_abs(eigs["index"] - eigs["tensor"])
    anti = max(check_anticommutation(g) for g in sets.values())
    return _bounded("constructor_equivalence", gap, ctx.tol("invariance"), anticommutation=anti)


def check_current_invariance(ctx: Context) -> Check:
    rng = ctx.rng("current_invariance")
    A = ctx.pair.A
    worst, worst_ratio, conds = 0.0, 0.0, []
    for _ in range(RANDOM_TRIALS):
        s = random_similarity(rng, max_condition=100.0)
        twin = similarity_transform(ctx.gs, s)
        A_t = transport_hermitizing(A, s)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        phi = rng.normal(size=4) + 1j * rng.normal(size=4)
        j = current(psi, ctx.gs, A).j
        j_t = current(s.S @ psi, twin, A_t).j
        ip = inner_a(psi, phi, A)
        ip_t = inner_a(s.S @ psi, s.S @ phi, A_t)
        scale = max(1.0, max_abs(j), abs(ip))
        r = max(max_abs(j - j_t), abs(ip - ip_t)) / scale
        worst = max(worst, r)
        worst_ratio = max(worst_ratio, r / s.condition)
        conds.append(s.condition)
    tol = ctx.tol("invariance")
    return Check(
        "current_invariance",
        PASS if worst_ratio <= tol else FAIL,
        float(worst),
        float(tol * max(conds)),
        {"trials": RANDOM_TRIALS, "max_condition": max(conds), "residual_over_condition": worst_ratio},
    )


def check_spectrum_invariance(ctx: Context) -> Check:
    if not ctx.admissible.admissible:
        return Check("spectrum_invariance", WARN, details={"reason": "metric is not admissible"})
    rng = ctx.rng("spectrum_invariance")
    spec = ctx.dynamics
    ref = _operator_spectrum(ctx.gs, ctx.pair.B, spec)
    worst_ratio, worst, conds = 0.0, 0.0, []
    for _ in range(3):
        s = random_similarity(rng, max_condition=spec.twin_condition)
        twin = similarity_transform(ctx.gs, s)
        eig = _operator_spectrum(twin, transport_hermitizing(ctx.pair.B, s), spec)
        r = max_abs(eig - ref)
        worst = max(worst, r)
        worst_ratio = max(worst_ratio, r / s.condition)
        conds.append(s.condition)
    tol = ctx.tol("invariance")
    return Check(
        "spectrum_invariance",
        PASS if worst_ratio <= tol else FAIL,
        float(worst),
        float(tol * max(conds)),
        {"twins": 3, "max_condition": max(conds), "grid_points": list(spec.points)},
    )


def check_gamma5(ctx: Context) -> Check:
    g5 = gamma5(ctx.gs)
    sq = max_abs(g5 @ g5 - np.eye(4))
    anti = max(max_abs(g5 @ g + g @ g5) for g in ctx.gs.gammas) / max(1.0, max_abs(ctx.gs.gammas))
    details = {"square_minus_identity": sq, "anticommutator": anti}
    worst = max(sq, anti)
    if max_abs(ctx.metric.g - ETA) <= 1e-12:
        g = ctx.gs.gammas
        details["minkowski_product_gap"] = max_abs(g5 - 1j * g[0] @ g[1] @ g[2] @ g[3])
        worst = max(worst, details["minkowski_product_gap"])
    return _bounded("gamma5", worst, ctx.tol("gamma5"), **details)


def check_charge_conjugation(ctx: Context) -> Check:
    cc = solve_charge_conjugation(ctx.gs)
    chk = _bounded("charge_conjugation", cc.residual, ctx.tol("charge_conjugation"), solution_dim=cc.solution_dim)
    if cc.solution_dim != 1:
        chk.status = WARN if chk.status == PASS else chk.status
    return chk


def check_hestenes_covariance(ctx: Context) -> Check:
    rng = ctx.rng("hestenes_covariance")
    gs, A = ctx.gs, ctx.pair.A
    C = solve_charge_conjugation(gs).C
    g5 = gamma5(gs)
    worst_s = worst_j = worst_j0 = 0.0
    for _ in range(RANDOM_TRIALS):
        amap = random_affine_map(rng, orientation=1)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        f = hestenes_fields(psi, gs, A, C, g5)
        primed = tensor_transform(gs, amap)
        f_p = hestenes_fields(amap.L @ psi, primed, tensor_transport_A(A, amap), amap.L @ C @ amap.M, gamma5(primed))
        scale = max(1.0, abs(f.s), max_abs(f.J))
        worst_s = max(worst_s, abs(f_p.s - f.s) / scale)
        worst_j = max(worst_j, max_abs(f_p.J - f.J @ amap.L.T) / scale)
        worst_j0 = max(worst_j0, max_abs(f.J[0] - current(psi, gs, A).j) / scale)
    tol = ctx.tol("hestenes")
    chk = _bounded("hestenes_covariance", max(worst_s, worst_j), tol, scalar=worst_s, tetrad=worst_j, j0_gap=worst_j0)
    if worst_j0 > ctx.tol("gamma5"):
        chk.status = FAIL
    return chk


REGISTRY = {
    "admissibility": check_admissibility,
    "alpha_anticommutation": check_alpha_anticommutation,
    "alpha_hermitizing": check_alpha_hermitizing,
    "anticommutation": check_anticommutation_suite,
    "charge_conjugation": check_charge_conjugation,
    "constructor_equivalence": check_constructor_equivalence,
    "current_invariance": check_current_invariance,
    "definiteness": check_definiteness,
    "gamma5": check_gamma5,
    "hermitizing_uniqueness": check_hermitizing_uniqueness,
    "hestenes_covariance": check_hestenes_covariance,
    "lemma_map": check_lemma_map,
    "spectrum_invariance": check_spectrum_invariance,
}

RANDOMIZED = {"current_invariance", "spectrum_invariance", "hestenes_covariance"}


def run_checks(ctx: Context, names) -> list[Check]:
    out = []
    for name in sorted(set(names)):
        try:
            out.append(REGISTRY[name](ctx))
        except DiracError as exc:
            out.append(Check(name, FAIL, details={"error": type(exc).__name__, "message": str(exc)}))
    return out
