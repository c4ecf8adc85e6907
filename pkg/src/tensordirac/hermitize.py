"""Hermitizing matrices for gamma and alpha sets.

A Hermitian ``A`` is hermitizing for a gamma set when every ``A gamma^mu`` is
Hermitian; ``B = A gamma^0`` then does the same job for the alphas. Both are
fixed up to a real factor, and ``B`` is definite in admissible coordinates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ._linalg import complex_to_real_rows, frozen, hermitian_basis, max_abs, nullspace
from .clifford import (
    GammaSet,
    Similarity,
    alpha_from_gamma,
    check_anticommutation,
    dirac_representation,
    solve_intertwiner,
)
from .errors import DimensionNotOne, NotDefinite, NotHermitian, NotIntertwiner, SingularA, SingularS
from .metric import ETA, IDENTITY_MAP, AffineMap, eta_to_g_map, is_admissible

NULLSPACE_RTOL = 1e-10
DEFINITENESS_RTOL = 1e-10
HERMITIAN_RTOL = 1e-10
MAX_A_CONDITION = 1e10

_HERMITIAN_BASIS = hermitian_basis(4)


class Definiteness(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    INDEFINITE = "indefinite"
    NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class DefinitenessCertificate:
    kind: Definiteness
    eigenvalues: tuple[float, ...]


@dataclass(frozen=True)
class HermitizingPair:
    A: np.ndarray
    B: np.ndarray
    nullspace_dim: int
    definiteness: Definiteness
    eigenvalues: tuple[float, ...]
    normalization: dict = field(default_factory=dict)
    singular_values: tuple[float, ...] = ()


def hermitizing_residual(X: np.ndarray, mats) -> float:
    """Max of ``|X - X^dag|`` and ``|(X m)^dag - X m|`` over ``mats``."""
    res = max_abs(X - X.conj().T)
    for m in mats:
        xm = X @ m
        res = max(res, max_abs(xm - xm.conj().T))
    return res


def hermitizing_system(gammas: np.ndarray) -> np.ndarray:
    """Real 128x16 matrix of ``x -> {gamma^mu^dag A - A gamma^mu}`` over Hermitian ``A``.

    Column k is the stacked (real, imaginary) residual for the k-th element of
    the real Hermitian basis.
    """
    cols = []
    for e in _HERMITIAN_BASIS:
        blocks = [(g.conj().T @ e - e @ g).ravel() for g in gammas]
        cols.append(np.concatenate(blocks))
    return complex_to_real_rows(np.array(cols).T)


def check_definiteness(B: np.ndarray, rtol: float = DEFINITENESS_RTOL) -> DefinitenessCertificate:
    """Classify a Hermitian matrix by the signs of its eigenvalues.

    Raises
    ------
    NotHermitian
        If ``B`` is not Hermitian to ``1e-10`` relative.
    NotDefinite
        If some eigenvalue lies within ``rtol * max|eig|`` of zero.
    """
    B = np.asarray(B, dtype=complex)
    scale = max(max_abs(B), np.finfo(float).tiny)
    if max_abs(B - B.conj().T) > HERMITIAN_RTOL * scale:
        raise NotHermitian("matrix is not Hermitian")
    eig = np.linalg.eigvalsh(0.5 * (B + B.conj().T))
    band = rtol * max(np.max(np.abs(eig)), np.finfo(float).tiny)
    values = tuple(float(e) for e in eig)
    if np.any(np.abs(eig) <= band):
        raise NotDefinite(f"eigenvalue within {band:.3e} of zero: {values}")
    if np.all(eig > 0):
        return DefinitenessCertificate(Definiteness.POSITIVE, values)
    if np.all(eig < 0):
        return DefinitenessCertificate(Definiteness.NEGATIVE, values)
    return DefinitenessCertificate(Definiteness.INDEFINITE, values)


def _sign_of_largest(A: np.ndarray) -> float:
    flat = A.ravel()
    z = flat[int(np.argmax(np.abs(flat)))]
    key = z.real if abs(z.real) >= abs(z.imag) else z.imag
    return 1.0 if key >= 0 else -1.0


def solve_hermitizing(gs: GammaSet, rtol: float = NULLSPACE_RTOL) -> HermitizingPair:
    """Hermitizing pair of ``gs`` from the real nullspace of the hermitizing system.

    Normalization: in admissible coordinates the sign makes ``B`` positive
    definite and the scale makes ``trace(B) = 4``. Otherwise the largest
    ``|A_ij|`` is scaled to 1 with non-negative dominant part.

    Raises
    ------
    DimensionNotOne
        If the real solution space is not one-dimensional.
    SingularA
        If the solution is singular.
    NotDefinite
        If the metric is admissible but ``B`` is not definite.
    """
    basis, sv = nullspace(hermitizing_system(gs.gammas), rtol)
    dim = basis.shape[0]
    if dim != 1:
        raise DimensionNotOne(f"hermitizing solution space has real dimension {dim}", dim)
    A = np.einsum("k,kab->ab", basis[0].real, _HERMITIAN_BASIS)
    if np.linalg.cond(A) > MAX_A_CONDITION:
        raise SingularA("hermitizing solution is singular")
    B = A @ gs.gammas[0]

    if is_admissible(gs.metric).admissible:
        cert = check_definiteness(B)
        if cert.kind is Definiteness.INDEFINITE:
            raise NotDefinite(f"admissible metric but B is indefinite: {cert.eigenvalues}")
        scale = 4.0 / np.trace(B).real
        normalization = {"rule": "trace(B)=4, B positive", "scale": float(scale)}
    else:
        scale = _sign_of_largest(A) / max_abs(A)
        normalization = {"rule": "max|A|=1", "scale": float(scale)}
    A = A * scale
    B = B * scale
    try:
        cert = check_definiteness(B)
        kind, eig = cert.kind, cert.eigenvalues
    except NotDefinite:
        kind, eig = Definiteness.NOT_APPLICABLE, tuple(float(e) for e in np.linalg.eigvalsh(0.5 * (B + B.conj().T)))
    return HermitizingPair(
        A=frozen(A),
        B=frozen(B),
        nullspace_dim=dim,
        definiteness=kind,
        eigenvalues=eig,
        normalization=normalization,
        singular_values=tuple(float(s) for s in sv),
    )


def hermitizing_via_construction(
    gs: GammaSet,
    s: Similarity | None = None,
    amap: AffineMap | None = None,
    tol: float = 1e-9,
) -> np.ndarray:
    """Hermitizing ``A = S^dag gamma_dirac^0 S`` built without the nullspace solve.

    ``amap`` is a real coordinate map whose index transform
    ``L^mu_nu gamma^nu`` brings ``gs`` to the Minkowski metric; it defaults to
    the identity over Minkowski and to :func:`eta_to_g_map` for admissible
    metrics. ``s`` must take that reduced set to the Dirac representation;
    when omitted it is solved for.
    """
    dirac = dirac_representation()
    if amap is None:
        if max_abs(gs.metric.g_inv - ETA) <= tol:
            amap = IDENTITY_MAP
        elif is_admissible(gs.metric).admissible:
            amap = eta_to_g_map(gs.metric)
        else:
            raise NotIntertwiner("inadmissible metric needs an explicit coordinate map")
    reduced = GammaSet(np.einsum("mn,nab->mab", amap.L, gs.gammas), dirac.metric)
    if check_anticommutation(reduced) > tol * max(1.0, max_abs(reduced.gammas)) ** 2:
        raise NotIntertwiner("coordinate map does not bring the set to the Minkowski metric")
    if s is None:
        s = solve_intertwiner(reduced, dirac).similarity
    mapped = np.einsum("ab,mbc,cd->mad", s.S, reduced.gammas, s.S_inv)
    if max_abs(mapped - dirac.gammas) > tol * s.condition:
        raise NotIntertwiner("similarity does not take the set to the Dirac representation")
    return s.S.conj().T @ dirac.gammas[0] @ s.S


def transport_hermitizing(X: np.ndarray, s: Similarity) -> np.ndarray:
    """``(S^dag)^{-1} X S^{-1}``: hermitizing matrix after ``gamma -> S gamma S^{-1}``.

    The same law carries ``A`` for the gammas and ``B`` for the alphas.
    """
    if max_abs(s.S @ s.S_inv - np.eye(4)) > 1e-8:
        raise SingularS("similarity and its inverse are inconsistent")
    return s.S_inv.conj().T @ X @ s.S_inv


transport_A = transport_hermitizing
transport_B = transport_hermitizing


def tensor_transport_A(A: np.ndarray, amap: AffineMap) -> np.ndarray:
    """``A' = (L^{-1})^T A L^{-1}``: hermitizing matrix after a tensor transform by ``amap``."""
    return amap.M.T @ A @ amap.M


def pair_residuals(gs: GammaSet, pair: HermitizingPair) -> dict:
    """Hermitizing residuals of A (gammas) and B (alphas), plus the converse A = B alpha^0."""
    alphas = alpha_from_gamma(gs)
    A_back = pair.B @ alphas.alphas[0]
    return {
        "A_gamma": hermitizing_residual(pair.A, gs.gammas),
        "B_alpha": hermitizing_residual(pair.B, alphas.alphas),
        "B_minus_A_gamma0": max_abs(pair.B - pair.A @ gs.gammas[0]),
        "A_from_B_gamma": hermitizing_residual(A_back, gs.gammas),
        "A_from_B_minus_A": max_abs(A_back - pair.A),
    }


def real_ratio(X: np.ndarray, Y: np.ndarray) -> tuple[float, float]:
    """Best real ``c`` with ``X ~ c Y`` and the relative misfit ``max|X - cY| / max|X|``.

    Matching up to a real factor is equivalent to a constant, real
    entrywise ratio on the support of ``Y``.
    """
    y = Y.ravel()
    x = X.ravel()
    c = np.vdot(y, x) / np.vdot(y, y)
    misfit = max_abs(x - c.real * y) / max(max_abs(x), np.finfo(float).tiny)
    return float(c.real), max(float(misfit), float(abs(c.imag) / max(abs(c), np.finfo(float).tiny)))


def entrywise_ratio(X: np.ndarray, Y: np.ndarray, support_rtol: float = 1e-4) -> dict:
    """Entrywise ``X / Y`` on entries with ``|Y| > support_rtol * max|Y|``.

    Returns the mean ratio, its worst relative imaginary part and its worst
    relative spread. Entries outside the support are too small for a stable
    ratio; ``off_support`` is their largest ``|X - ratio * Y|`` relative to
    ``max|X|``.
    """
    x = np.asarray(X).ravel()
    y = np.asarray(Y).ravel()
    support = np.abs(y) > support_rtol * max_abs(y)
    r = x[support] / y[support]
    mean = r.mean()
    mag = max(abs(mean), np.finfo(float).tiny)
    return {
        "ratio": complex(mean),
        "imag": float(np.max(np.abs(r.imag)) / mag),
        "spread": float(np.max(np.abs(r - mean)) / mag),
        "off_support": float(max_abs(x[~support] - mean * y[~support]) / max(max_abs(x), np.finfo(float).tiny)),
    }
