"""Gamma- and alpha-matrix sets: construction, transformation and checks.

Representation conventions (the single source of truth for this package):

* Pauli matrices ``sigma_1 = [[0, 1], [1, 0]]``, ``sigma_2 = [[0, -i], [i, 0]]``,
  ``sigma_3 = [[1, 0], [0, -1]]``.
* Dirac representation: ``gamma^0 = diag(1, 1, -1, -1)``,
  ``gamma^j = [[0, sigma_j], [-sigma_j, 0]]``.
* Chiral representation: ``gamma^0 = [[0, 1], [1, 0]]`` (2x2 blocks),
  ``gamma^j`` as in the Dirac representation.
* ``DIRAC_TO_CHIRAL = [[1, -1], [1, 1]] / sqrt(2)`` (2x2 blocks) satisfies
  ``S gamma_dirac^mu S^{-1} = gamma_chiral^mu``.

A gamma set is stored as an array of shape ``(4, 4, 4)``: ``gammas[mu]`` is
the matrix ``gamma^mu`` with row index ``rho`` and column index ``nu`` of
``(gamma^mu)^rho_nu``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._linalg import frozen, left_mult, max_abs, normalize_by_largest, nullspace, right_mult
from .errors import (
    DimensionNotOne,
    NoEtaFactorization,
    NoIntertwiner,
    NotGaussian,
    RelaxedCondition,
    SingularMap,
    SingularS,
    ZeroG00,
)
from .metric import ETA, MINKOWSKI, AffineMap, Metric, eta_to_g_map, is_admissible

ANTICOMMUTATION_TOL = 1e-12
MAX_SIMILARITY_CONDITION = 1e10

I2 = np.eye(2, dtype=complex)
Z2 = np.zeros((2, 2), dtype=complex)
PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def _blocks(a, b, c, d) -> np.ndarray:
    return np.block([[a, b], [c, d]])


@dataclass(frozen=True)
class GammaSet:
    """Four 4x4 complex matrices tied to the metric they anticommute with."""

    gammas: np.ndarray
    metric: Metric

    def __post_init__(self):
        g = np.asarray(self.gammas)
        if g.shape != (4, 4, 4):
            raise ValueError(f"gamma set must have shape (4, 4, 4), got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise ValueError("gamma matrices must be finite")
        object.__setattr__(self, "gammas", frozen(g, complex))

    def __getitem__(self, mu: int) -> np.ndarray:
        return self.gammas[mu]


@dataclass(frozen=True)
class AlphaSet:
    alphas: np.ndarray
    metric: Metric

    def __getitem__(self, mu: int) -> np.ndarray:
        return self.alphas[mu]


@dataclass(frozen=True)
class Similarity:
    """Invertible complex 4x4 change of representation."""

    S: np.ndarray
    S_inv: np.ndarray
    condition: float

    @classmethod
    def from_matrix(cls, S, max_condition: float = MAX_SIMILARITY_CONDITION) -> "Similarity":
        S = np.asarray(S, dtype=complex).reshape(4, 4)
        cond = float(np.linalg.cond(S)) if np.all(np.isfinite(S)) else np.inf
        if not np.isfinite(cond) or cond > max_condition:
            raise SingularS(f"similarity matrix is singular (condition {cond:.3e})")
        return cls(frozen(S), frozen(np.linalg.inv(S)), cond)

    def inverse(self) -> "Similarity":
        return Similarity(self.S_inv, self.S, self.condition)


IDENTITY_SIMILARITY = Similarity(frozen(np.eye(4, dtype=complex)), frozen(np.eye(4, dtype=complex)), 1.0)


def anticommutators(gammas: np.ndarray) -> np.ndarray:
    """All ``g^mu g^nu + g^nu g^mu`` as an array of shape (4, 4, 4, 4)."""
    prod = np.einsum("mab,nbc->mnac", gammas, gammas)
    return prod + prod.transpose(1, 0, 2, 3)


def check_anticommutation(gs: GammaSet, inverse_metric: np.ndarray | None = None) -> float:
    """Max entrywise residual of ``g^mu g^nu + g^nu g^mu - 2 g^{mu nu} 1``."""
    g_inv = gs.metric.g_inv if inverse_metric is None else inverse_metric
    target = 2.0 * np.einsum("mn,ab->mnab", g_inv, np.eye(4))
    return max_abs(anticommutators(gs.gammas) - target)


def dirac_representation() -> GammaSet:
    gammas = [_blocks(I2, Z2, Z2, -I2)] + [_blocks(Z2, s, -s, Z2) for s in PAULI]
    return GammaSet(np.array(gammas), MINKOWSKI)


def chiral_representation() -> GammaSet:
    gammas = [_blocks(Z2, I2, I2, Z2)] + [_blocks(Z2, s, -s, Z2) for s in PAULI]
    return GammaSet(np.array(gammas), MINKOWSKI)


DIRAC_TO_CHIRAL = frozen(_blocks(I2, -I2, I2, I2) / np.sqrt(2.0))


def _check_factor(m: Metric, M: np.ndarray, tol: float) -> None:
    residual = max_abs(M @ ETA @ M.T - m.g_inv) / max_abs(m.g_inv)
    if residual > tol:
        raise NoEtaFactorization(f"supplied factor does not satisfy g^(..) = M eta M^T (residual {residual:.3e})")


def index_transform(gs: GammaSet, amap: AffineMap) -> GammaSet:
    """``gamma'^mu = L^mu_nu gamma^nu`` with the pushed-forward metric."""
    gammas = np.einsum("mn,nab->mab", amap.L, gs.gammas)
    return GammaSet(gammas, amap.push_metric(gs.metric))


def tensor_transform(gs: GammaSet, amap: AffineMap) -> GammaSet:
    """``gamma'^mu = L^mu_nu L gamma^nu L^{-1}`` with the pushed-forward metric.

    The wave function transforms as ``psi' = L psi``; that part is left to the
    caller.
    """
    if not np.all(np.isfinite(amap.M)) or max_abs(amap.L @ amap.M - np.eye(4)) > 1e-8:
        raise SingularMap("affine map and its inverse are inconsistent")
    conj = np.einsum("ab,nbc,cd->nad", amap.L, gs.gammas, amap.M)
    gammas = np.einsum("mn,nab->mab", amap.L, conj)
    return GammaSet(gammas, amap.push_metric(gs.metric))


def build_gamma_for_metric(
    m: Metric,
    base: GammaSet | None = None,
    scheme: str = "index",
    factor: np.ndarray | None = None,
    tol: float = 1e-10,
) -> GammaSet:
    """Gamma set for ``m`` obtained from a Minkowski set ``base``.

    ``factor`` is a real ``M`` with ``g^{..} = M eta M^T``. When omitted it is
    taken from :func:`eta_to_g_map` (admissible metrics only). ``scheme``
    selects ``"index"`` (``gamma'^mu = M^mu_nu gamma^nu``) or ``"tensor"``
    (``gamma'^mu = M^mu_nu M gamma^nu M^{-1}``).
    """
    base = dirac_representation() if base is None else base
    if max_abs(base.metric.g_inv - ETA) > tol:
        raise ValueError("base gamma set must be defined over the Minkowski metric")
    if factor is None:
        if not is_admissible(m).admissible:
            raise NoEtaFactorization("metric is not admissible and no real factor was supplied")
        M = eta_to_g_map(m).M
    else:
        M = np.asarray(factor, dtype=float).reshape(4, 4)
        _check_factor(m, M, tol)
    if scheme == "index":
        gammas = np.einsum("mn,nab->mab", M, base.gammas)
    elif scheme == "tensor":
        M_inv = np.linalg.inv(M)
        gammas = np.einsum("mn,ab,nbc,cd->mad", M, M, base.gammas, M_inv)
    else:
        raise ValueError(f"unknown scheme {scheme!r}; expected 'index' or 'tensor'")
    return GammaSet(gammas, m)


def similarity_transform(gs: GammaSet, s: Similarity) -> GammaSet:
    """``S gamma^mu S^{-1}``; the metric is unchanged."""
    if max_abs(s.S @ s.S_inv - np.eye(4)) > 1e-8:
        raise SingularS("similarity and its inverse are inconsistent")
    return GammaSet(np.einsum("ab,mbc,cd->mad", s.S, gs.gammas, s.S_inv), gs.metric)


@dataclass(frozen=True)
class Intertwiner:
    similarity: Similarity
    dimension: int
    residual: float


def solve_intertwiner(a: GammaSet, b: GammaSet, rtol: float = 1e-10) -> Intertwiner:
    """Find ``S`` with ``S gamma_a^mu S^{-1} = gamma_b^mu`` for all mu.

    Solves the 64x16 complex system ``gamma_b S - S gamma_a = 0``; the
    solution space must be one-dimensional. The null vector is scaled so its
    first largest-magnitude entry equals 1.
    """
    if max_abs(a.metric.g_inv - b.metric.g_inv) > 1e-10 * max(max_abs(a.metric.g_inv), 1.0):
        raise NoIntertwiner("gamma sets are defined over different metrics")
    system = np.vstack([left_mult(b.gammas[mu]) - right_mult(a.gammas[mu]) for mu in range(4)])
    basis, _ = nullspace(system, rtol)
    dim = basis.shape[0]
    if dim == 0:
        raise NoIntertwiner("no nonzero intertwiner exists")
    if dim != 1:
        raise DimensionNotOne(f"intertwiner space has dimension {dim}", dim)
    S = normalize_by_largest(basis[0].reshape(4, 4))
    try:
        sim = Similarity.from_matrix(S)
    except SingularS as exc:
        raise NoIntertwiner("intertwiner solution is singular") from exc
    transformed = similarity_transform(a, sim)
    return Intertwiner(sim, dim, max_abs(transformed.gammas - b.gammas))


def alpha_from_gamma(gs: GammaSet, tol: float = 1e-12) -> AlphaSet:
    """``alpha^0 = gamma^0 / g^00``, ``alpha^j = gamma^0 gamma^j / g^00``."""
    g00 = gs.metric.g_inv[0, 0]
    if abs(g00) <= tol * max(max_abs(gs.metric.g_inv), 1.0):
        raise ZeroG00("g^00 vanishes")
    g0 = gs.gammas[0]
    alphas = [g0 / g00] + [g0 @ gs.gammas[j] / g00 for j in range(1, 4)]
    return AlphaSet(frozen(np.array(alphas), complex), gs.metric)


def raw_alpha_anticommutators(als: AlphaSet) -> np.ndarray:
    """Anticommutators of ``alpha'^mu = g^00 alpha^mu``, shape (4, 4, 4, 4)."""
    scaled = als.alphas * als.metric.g_inv[0, 0]
    return anticommutators(scaled)


@dataclass(frozen=True)
class AlphaMetric:
    h: np.ndarray
    residual: float
    positive_definite: bool | None


def alpha_anticommutator_metric(als: AlphaSet, tol: float = 1e-12) -> AlphaMetric:
    """Scalar anticommutator metric ``h`` of the alphas, defined only for ``g^{0j} = 0``.

    Returns ``h^00 = 1/g^00``, ``h^0j = 0``, ``h^jk = -g^jk / g^00`` and the
    measured residual of ``alpha^mu alpha^nu + alpha^nu alpha^mu - 2 h^{mu nu} 1``.
    ``positive_definite`` is reported for admissible metrics and ``None``
    otherwise.

    Raises
    ------
    NotGaussian
        When some ``g^0j`` is nonzero; the exception carries the raw
        anticommutators ``alpha'^0 alpha'^j + alpha'^j alpha'^0`` and their
        deviation from ``2 g^0j gamma^0``.
    """
    g_inv = als.metric.g_inv
    g00 = g_inv[0, 0]
    g0j = g_inv[0, 1:]
    scale = max(max_abs(g_inv), 1.0)
    if np.any(np.abs(g0j) > tol * scale):
        raw = raw_alpha_anticommutators(als)
        gamma0 = als.alphas[0] * g00
        mixed = np.array([raw[0, j] for j in range(1, 4)])
        expected = np.array([2.0 * g0j[j - 1] * gamma0 for j in range(1, 4)])
        raise NotGaussian(
            f"alpha matrices have no scalar anticommutator: g^0j = {g0j}",
            g0j=g0j.copy(),
            raw=mixed,
            expected_residual=max_abs(mixed - expected),
        )
    h = np.zeros((4, 4))
    h[0, 0] = 1.0 / g00
    h[1:, 1:] = -g_inv[1:, 1:] / g00
    target = 2.0 * np.einsum("mn,ab->mnab", h, np.eye(4))
    residual = max_abs(anticommutators(als.alphas) - target)
    pd = None
    if is_admissible(als.metric).admissible:
        pd = bool(np.all(np.linalg.eigvalsh(h) > 0))
    return AlphaMetric(frozen(h), residual, pd)


def random_similarity(seed: int, max_condition: float = 100.0, max_tries: int = 10_000) -> Similarity:
    """Seeded random complex 4x4 matrix with condition number <= ``max_condition``.

    Entries are ``U(-1, 1) + i U(-1, 1)`` from ``numpy.random.default_rng(seed)``;
    draws are rejected until the 2-norm condition bound holds. After
    ``max_tries`` rejections the best draw is returned with a
    :class:`RelaxedCondition` warning.
    """
    if max_condition <= 1.0:
        raise ValueError("max_condition must exceed 1")
    rng = np.random.default_rng(seed)
    best, best_cond = None, np.inf
    for _ in range(max_tries):
        S = rng.uniform(-1.0, 1.0, (4, 4)) + 1j * rng.uniform(-1.0, 1.0, (4, 4))
        cond = np.linalg.cond(S)
        if cond <= max_condition:
            return Similarity.from_matrix(S)
        if cond < best_cond:
            best, best_cond = S, cond
    warnings.warn(
        f"condition bound {max_condition} not met after {max_tries} draws; returning condition {best_cond:.3g}",
        RelaxedCondition,
        stacklevel=2,
    )
    return Similarity.from_matrix(best)
