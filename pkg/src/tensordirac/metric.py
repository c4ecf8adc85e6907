"""Constant spacetime metrics and the affine maps relating them to Minkowski.

Conventions
-----------
All 4x4 arrays are row-major. For a coordinate map ``x' = L x`` the array
``L[mu, nu]`` holds ``L^mu_nu``: the row is the upper index. Index 0 is time,
the signature convention is ``(+, -, -, -)``.

``g`` holds ``g_{mu nu}`` and ``g_inv`` holds ``g^{mu nu}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._linalg import frozen, max_abs
from .errors import NoEtaFactorization, NotAdmissible, NotSymmetric, Singular, SingularMap, ZeroG00

ETA = frozen(np.diag([1.0, -1.0, -1.0, -1.0]))

SYMMETRY_TOL = 1e-12
CLASSIFY_TOL = 1e-10
CONSTRUCT_RTOL = 1e-12
MAX_MAP_CONDITION = 1e12


@dataclass(frozen=True)
class Metric:
    """Validated constant metric with its cached inverse.

    Build instances through :func:`validate_metric` or :meth:`from_inverse`;
    the raw constructor performs no checks.
    """

    g: np.ndarray
    g_inv: np.ndarray

    @classmethod
    def from_inverse(cls, g_inv, tol: float = SYMMETRY_TOL) -> "Metric":
        g_inv = np.asarray(g_inv, dtype=float)
        try:
            g = np.linalg.inv(0.5 * (g_inv + g_inv.T))
        except np.linalg.LinAlgError as exc:
            raise Singular("inverse metric is singular") from exc
        return validate_metric(g, tol=tol)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.g))

    def is_gaussian(self, tol: float = CLASSIFY_TOL) -> bool:
        """True when ``g^{0j} = 0`` for j = 1..3 (within ``tol`` relative)."""
        scale = max(max_abs(self.g_inv), 1.0)
        return bool(np.all(np.abs(self.g_inv[0, 1:]) <= tol * scale))

    def to_list(self) -> list[float]:
        return [float(v) for v in self.g.ravel()]


MINKOWSKI = Metric(ETA, ETA)


def validate_metric(entries, tol: float = SYMMETRY_TOL) -> Metric:
    """Check 16 real entries (row-major) and return a :class:`Metric`.

    Raises
    ------
    NotSymmetric
        If ``|g - g.T| > tol * max|g|`` anywhere.
    Singular
        If ``|det g|`` is below ``tol`` times the natural scale ``max|g|**4``.
    ZeroG00
        If ``|g^{00}|`` is below ``tol * max|g_inv|``.
    """
    g = np.array(entries, dtype=float).reshape(4, 4)
    if not np.all(np.isfinite(g)):
        raise NotSymmetric("metric entries must be finite")
    scale = max(max_abs(g), np.finfo(float).tiny)
    if max_abs(g - g.T) > tol * scale:
        raise NotSymmetric(f"metric is not symmetric (max asymmetry {max_abs(g - g.T):.3e})")
    # one value per unordered index pair
    upper = np.triu(g)
    g = upper + np.triu(g, 1).T
    det = np.linalg.det(g)
    if abs(det) <= tol * scale**4:
        raise Singular(f"metric is singular (det = {det:.3e})")
    g_inv = np.linalg.inv(g)
    g_inv = np.triu(g_inv) + np.triu(g_inv, 1).T
    if abs(g_inv[0, 0]) <= tol * max_abs(g_inv):
        raise ZeroG00("g^00 vanishes; the Schrodinger form needs g^00 != 0")
    return Metric(frozen(g), frozen(g_inv))


@dataclass(frozen=True)
class AdmissibilityCertificate:
    admissible: bool
    g00: float
    spatial_eigenvalues: tuple[float, float, float]
    borderline: bool = False

    def __bool__(self) -> bool:
        return self.admissible


def is_admissible(m: Metric, tol: float = CLASSIFY_TOL) -> AdmissibilityCertificate:
    """Classify ``m``: admissible iff ``g_00 > 0`` and ``(g_jk)`` is negative definite.

    Values within ``tol * max|g|`` of zero are treated as failing and flagged
    ``borderline``.
    """
    band = tol * max(max_abs(m.g), 1.0)
    g00 = float(m.g[0, 0])
    eig = np.linalg.eigvalsh(m.g[1:, 1:])
    borderline = abs(g00) <= band or bool(np.any(np.abs(eig) <= band))
    ok = g00 > band and bool(np.all(eig < -band))
    return AdmissibilityCertificate(ok, g00, tuple(float(e) for e in eig), borderline)


@dataclass(frozen=True)
class AffineMap:
    """Invertible real coordinate map ``x' = L x`` with ``M = L^{-1}``."""

    L: np.ndarray
    M: np.ndarray

    @classmethod
    def from_matrix(cls, L, max_condition: float = MAX_MAP_CONDITION) -> "AffineMap":
        L = np.asarray(L, dtype=float).reshape(4, 4)
        if not np.all(np.isfinite(L)) or np.linalg.cond(L) > max_condition:
            raise SingularMap("coordinate map is singular or too ill-conditioned")
        return cls(frozen(L), frozen(np.linalg.inv(L)))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.L))

    def inverse(self) -> "AffineMap":
        return AffineMap(self.M, self.L)

    def compose(self, first: "AffineMap") -> "AffineMap":
        """The map ``self o first`` (apply ``first``, then ``self``)."""
        return AffineMap(frozen(self.L @ first.L), frozen(first.M @ self.M))

    def push_metric(self, m: Metric) -> Metric:
        """Metric in the primed coordinates: ``g'^{..} = L g^{..} L^T``."""
        return Metric.from_inverse(self.L @ m.g_inv @ self.L.T)


IDENTITY_MAP = AffineMap(frozen(np.eye(4)), frozen(np.eye(4)))


def eta_to_g_map(m: Metric, tol: float = CLASSIFY_TOL) -> AffineMap:
    """Block-triangular ``L`` with ``g = L^T eta L`` and ``L^0_k = 0``, ``L^0_0 > 0``.

    The spatial block ``l`` is the transposed lower Cholesky factor of
    ``-(g_jk)`` (so ``l`` is upper triangular with positive diagonal). The
    inverse ``M`` is assembled in closed form, so ``M^0_k`` is exactly zero
    and ``M^0_0 = 1/lambda``.
    """
    cert = is_admissible(m, tol)
    if not cert.admissible:
        raise NotAdmissible(
            f"metric is not admissible (g_00={cert.g00:.3e}, spatial eigenvalues={cert.spatial_eigenvalues})"
        )
    g = m.g
    chol = np.linalg.cholesky(-g[1:, 1:])
    l = chol.T
    # g_j0 = -sum_k l[k, j] lam_k  <=>  l^T lam = -g_j0
    lam_vec = scipy.linalg.solve_triangular(chol, -g[1:, 0], lower=True)
    lam = float(np.sqrt(g[0, 0] + lam_vec @ lam_vec))

    L = np.zeros((4, 4))
    L[0, 0] = lam
    L[1:, 0] = lam_vec
    L[1:, 1:] = l

    l_inv = scipy.linalg.solve_triangular(l, np.eye(3), lower=False)
    M = np.zeros((4, 4))
    M[0, 0] = 1.0 / lam
    M[1:, 0] = -(l_inv @ lam_vec) / lam
    M[1:, 1:] = l_inv
    return AffineMap(frozen(L), frozen(M))


def lemma_residual(m: Metric, amap: AffineMap) -> float:
    """``max|L^T eta L - g| / max|g|``."""
    return max_abs(amap.L.T @ ETA @ amap.L - m.g) / max_abs(m.g)


def lorentzian_factor(m: Metric) -> np.ndarray:
    """A real ``M`` with ``g^{..} = M eta M^T`` for any metric of signature (+,-,-,-).

    Unlike :func:`eta_to_g_map` this does not need admissibility; it diagonalises
    ``g^{..}`` and puts the single positive direction in column 0. The result
    can be passed as a user-supplied factor to the gamma constructors.
    """
    w, v = np.linalg.eigh(m.g_inv)
    pos = np.flatnonzero(w > 0)
    if pos.size != 1:
        raise NoEtaFactorization(f"signature is not (+,-,-,-): eigenvalues {w}")
    order = [int(pos[0])] + [k for k in range(4) if k != pos[0]]
    return v[:, order] * np.sqrt(np.abs(w[order]))


def random_admissible_metric(seed, gaussian: bool = False) -> Metric:
    """Seeded random admissible metric; ``gaussian=True`` forces ``g_0j = 0``.

    ``g_00`` is uniform on [0.5, 2], the spatial block is ``-(0.5 I + R R^T + D)``
    with R uniform on [-0.5, 0.5] and D a random non-negative diagonal, and the
    mixed components are uniform on [-0.5, 0.5]. A block-diagonal ``g`` has a
    block-diagonal inverse, so Gaussian here also means ``g^{0j} = 0``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    r = rng.uniform(-0.5, 0.5, (3, 3))
    g = np.zeros((4, 4))
    g[0, 0] = rng.uniform(0.5, 2.0)
    g[1:, 1:] = -(0.5 * np.eye(3) + r @ r.T + np.diag(rng.uniform(0.0, 0.5, 3)))
    g0j = rng.uniform(-0.5, 0.5, 3)
    if not gaussian:
        g[0, 1:] = g0j
        g[1:, 0] = g0j
    return validate_metric(g)


def random_affine_map(seed, max_condition: float = 20.0, orientation: int = 1) -> AffineMap:
    """Seeded random invertible map near the identity with a sign-fixed determinant."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for _ in range(1000):
        L = np.eye(4) + rng.uniform(-0.6, 0.6, (4, 4))
        if np.linalg.cond(L) > max_condition:
            continue
        if orientation and np.sign(np.linalg.det(L)) != np.sign(orientation):
            L[:, 0] *= -1.0
        return AffineMap.from_matrix(L)
    raise SingularMap("could not draw a well-conditioned map")
