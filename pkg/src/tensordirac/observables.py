"""Bilinear observables: inner products, the probability current, charge
conjugation, gamma-five and the Hestenes scalar/tetrad fields."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from ._linalg import frozen, left_mult, max_abs, normalize_by_largest, nullspace, right_mult
from .clifford import GammaSet, tensor_transform
from .errors import (
    ImaginaryResidue,
    NoSolution,
    SolutionDimensionWarning,
    WrongSignature,
    ZeroScalar,
)
from .metric import AffineMap

REALITY_TOL = 1e-12
ZERO_SCALAR_RTOL = 1e-12


def _spinor(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex).reshape(4)
    if not np.all(np.isfinite(u)):
        raise ValueError("spinor components must be finite")
    return u


def inner_a(u, v, A) -> complex:
    """``u^dag A v``."""
    return complex(np.vdot(_spinor(u), np.asarray(A) @ _spinor(v)))


def inner_b(u, v, B) -> complex:
    """``u^dag B v``; positive on ``u != 0`` when ``B`` is positive definite."""
    return complex(np.vdot(_spinor(u), np.asarray(B) @ _spinor(v)))


@dataclass(frozen=True)
class CurrentVector:
    j: np.ndarray
    imag_residue: float

    def to_json(self) -> dict:
        return {"labels": ["j0", "j1", "j2", "j3"], "values": [float(x) for x in self.j]}


def current(psi, gs: GammaSet, A, tol: float = REALITY_TOL) -> CurrentVector:
    """``j^mu = psi^dag A gamma^mu psi``.

    Raises ``ImaginaryResidue`` when ``|Im j| > tol * |psi|^2 |A gamma|``,
    which means ``A`` does not hermitize ``gs``.
    """
    psi = _spinor(psi)
    A = np.asarray(A)
    j = np.array([np.vdot(psi, A @ g @ psi) for g in gs.gammas])
    scale = max(np.vdot(psi, psi).real * max(max_abs(A @ g) for g in gs.gammas), np.finfo(float).tiny)
    residue = float(np.max(np.abs(j.imag)) / scale)
    if residue > tol:
        raise ImaginaryResidue(f"current has imaginary part {residue:.3e} (relative)")
    return CurrentVector(frozen(j.real), residue)


@dataclass(frozen=True)
class ChargeConjugation:
    C: np.ndarray
    solution_dim: int
    residual: float
    transform_residual: float | None = None


def charge_conjugation_residual(C: np.ndarray, gammas: np.ndarray) -> float:
    return max(max_abs(C @ g.conj() + g @ C) for g in gammas)


def solve_charge_conjugation(gs: GammaSet, amap: AffineMap | None = None, rtol: float = 1e-10) -> ChargeConjugation:
    """Nonzero ``C`` with ``C gamma^mu* = -gamma^mu C`` for every mu.

    ``C`` is scaled so its first largest-magnitude entry equals 1. A solution
    space of dimension other than one only triggers a
    :class:`SolutionDimensionWarning`. With ``amap``, the tensor-transformed
    ``L C L^{-1}`` is checked against the tensor-transformed gamma set and its
    residual reported.
    """
    system = np.vstack([right_mult(g.conj()) + left_mult(g) for g in gs.gammas])
    basis, _ = nullspace(system, rtol)
    dim = basis.shape[0]
    if dim == 0:
        raise NoSolution("no charge-conjugation matrix exists for this set")
    if dim != 1:
        warnings.warn(f"charge-conjugation solution space has dimension {dim}", SolutionDimensionWarning, stacklevel=2)
    C = normalize_by_largest(basis[0].reshape(4, 4))
    transform_residual = None
    if amap is not None:
        primed = tensor_transform(gs, amap)
        transform_residual = charge_conjugation_residual(amap.L @ C @ amap.M, primed.gammas)
    return ChargeConjugation(frozen(C), dim, charge_conjugation_residual(C, gs.gammas), transform_residual)


def _permutation_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def levi_civita_tensor(g: np.ndarray) -> np.ndarray:
    """``e_{mu nu rho sigma} = sqrt|det g| eps_{mu nu rho sigma}`` with ``eps_{0123} = +1``."""
    e = np.zeros((4, 4, 4, 4))
    root = np.sqrt(abs(np.linalg.det(g)))
    for p in itertools.permutations(range(4)):
        e[p] = _permutation_sign(p) * root
    return e


def gamma5(gs: GammaSet) -> np.ndarray:
    """``(i/24) e_{mu nu rho sigma} gamma^mu gamma^nu gamma^rho gamma^sigma``.

    Only permutations of (0, 1, 2, 3) contribute. Reduces to
    ``i gamma^0 gamma^1 gamma^2 gamma^3`` for the Minkowski metric.
    """
    det = np.linalg.det(gs.metric.g)
    if det >= 0:
        raise WrongSignature(f"gamma-five needs det(g) < 0, got {det:.3e}")
    e = levi_civita_tensor(gs.metric.g)
    g = gs.gammas
    total = np.einsum("mnrs,mab,nbc,rcd,sde->ae", e, g, g, g, g, optimize=True)
    return frozen(1j * total / 24.0)


def tau(k: int, psi, C, g5) -> np.ndarray:
    """The four operations ``tau_K``: ``-i psi``, ``i C psi*``, ``C psi*``, ``i gamma5 psi``."""
    psi = _spinor(psi)
    if k == 0:
        return -1j * psi
    if k == 1:
        return 1j * (C @ psi.conj())
    if k == 2:
        return C @ psi.conj()
    if k == 3:
        return 1j * (g5 @ psi)
    raise ValueError("K must be 0, 1, 2 or 3")


@dataclass(frozen=True)
class HestenesFields:
    """Scalar ``s``, currents ``J[K, mu]`` and tetrad ``e[K, mu]``.

    ``s`` is complex: ``(psi, gamma5 psi)`` is not real in general, so the
    value is kept as computed and ``s_is_real`` records whether its imaginary
    part is negligible. ``e`` is ``None`` when ``|s|`` vanishes.
    """

    s: complex
    J: np.ndarray
    e: np.ndarray | None
    s_is_real: bool

    @property
    def tetrad_defined(self) -> bool:
        return self.e is not None

    def to_json(self) -> dict:
        labels = ["s.re", "s.im"] + [f"J{k}^{mu}" for k in range(4) for mu in range(4)]
        values = [self.s.real, self.s.imag] + [float(x) for x in self.J.ravel()]
        if self.e is not None:
            labels += [f"e{k}^{mu}" for k in range(4) for mu in range(4)]
            values += [float(x) for x in self.e.ravel()]
        return {"labels": labels, "values": values, "tetrad_defined": self.tetrad_defined}


def hestenes_fields(psi, gs: GammaSet, A, C, g5, strict: bool = False) -> HestenesFields:
    """Hestenes scalar and tetrad of ``psi`` under the product ``(u, v) = u^dag A v``.

    ``s = (psi, psi) - (psi, gamma5 psi)``, ``J_K^mu = Re (psi, i gamma^mu tau_K psi)``
    and ``e_K = J_K / |s|``. When ``|s| <= 1e-12 |psi|^2 |A|`` the tetrad is
    left undefined, or ``ZeroScalar`` is raised if ``strict``.
    """
    psi = _spinor(psi)
    A = np.asarray(A)
    s = inner_a(psi, psi, A) - inner_a(psi, g5 @ psi, A)
    J = np.empty((4, 4))
    for k in range(4):
        t = tau(k, psi, C, g5)
        for mu in range(4):
            J[k, mu] = inner_a(psi, 1j * (gs.gammas[mu] @ t), A).real
    scale = np.vdot(psi, psi).real * max_abs(A)
    small = abs(s) <= ZERO_SCALAR_RTOL * max(scale, np.finfo(float).tiny)
    if small and strict:
        raise ZeroScalar("Hestenes scalar vanishes; tetrad undefined")
    e = None if small else frozen(J / abs(s))
    return HestenesFields(complex(s), frozen(J), e, abs(s.imag) <= REALITY_TOL * max(scale, 1e-300))
