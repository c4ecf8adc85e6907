"""Dirac Hamiltonian on a periodic spatial grid in affine coordinates.

State vectors are flattened point-major: entry ``4 * n + a`` is spinor
component ``a`` at grid point ``n`` (C order over the grid shape). Grid axis
``k`` carries the spatial coordinate ``x^(k+1)``; a 1D grid therefore
resolves ``x^1`` only.

The discrete inner product is ``(psi || phi) = sum_n h^d psi_n^dag B phi_n``;
its Gram matrix is ``G = h^d (1_N kron B)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._linalg import frozen, max_abs
from .clifford import AlphaSet, GammaSet, alpha_from_gamma
from .errors import (
    GramNotPositive,
    GridMismatch,
    NonRealPotential,
    NotAdmissible,
    SolveFailure,
    TooFewSteps,
)
from .hermitize import solve_hermitizing
from .metric import ETA, is_admissible

MIN_POINTS = 4


@dataclass(frozen=True)
class Grid:
    """Periodic grid with ``points[k]`` nodes of spacing ``spacing`` along each axis."""

    points: tuple[int, ...]
    spacing: float

    def __post_init__(self):
        pts = tuple(int(n) for n in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) not in (1, 3):
            raise ValueError("grid must have 1 or 3 active axes")
        if any(n != 1 and n < MIN_POINTS for n in pts):
            raise ValueError(f"each axis needs at least {MIN_POINTS} points (or exactly 1)")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")

    @property
    def dims(self) -> int:
        return len(self.points)

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dims

    @property
    def extent(self) -> tuple[float, ...]:
        return tuple(n * self.spacing for n in self.points)

    def coordinates(self) -> np.ndarray:
        """Spatial coordinates ``x^1..x^3`` of every node, shape ``(size, 3)``.

        Inactive axes sit at 0.
        """
        axes = [np.arange(n) * self.spacing for n in self.points]
        mesh = np.meshgrid(*axes, indexing="ij")
        x = np.zeros((self.size, 3))
        for k, a in enumerate(mesh):
            x[:, k] = a.ravel()
        return x

    def to_json(self) -> dict:
        return {"points": list(self.points), "spacing": self.spacing}


def central_difference(n: int, h: float) -> np.ndarray:
    """Periodic ``(f[i+1] - f[i-1]) / 2h`` as a dense real antisymmetric matrix."""
    eye = np.eye(n)
    return (np.roll(eye, 1, axis=1) - np.roll(eye, -1, axis=1)) / (2.0 * h)


def axis_derivative(grid: Grid, axis: int) -> np.ndarray:
    """Central difference along one grid axis, as a (size x size) matrix."""
    mats = [np.eye(n) for n in grid.points]
    mats[axis] = central_difference(grid.points[axis], grid.spacing)
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


@dataclass(frozen=True)
class DynamicsConfig:
    """Mass, charge, grid and real potential ``A_mu`` (shape ``(4, size)``, lower index)."""

    mass: float
    grid: Grid
    charge: float = 0.0
    potential: np.ndarray | None = None

    def __post_init__(self):
        if self.mass < 0:
            raise ValueError("mass must be non-negative")
        if self.potential is not None:
            pot = np.asarray(self.potential)
            if pot.shape != (4, self.grid.size):
                raise ValueError(f"potential must have shape (4, {self.grid.size})")
            if np.iscomplexobj(pot):
                if max_abs(pot.imag) > 0:
                    raise NonRealPotential("electromagnetic potential must be real")
                pot = pot.real
            object.__setattr__(self, "potential", frozen(pot, float))


@dataclass(frozen=True)
class GridOperator:
    H: np.ndarray
    G: np.ndarray
    B: np.ndarray
    grid: Grid

    def hermiticity_residual(self) -> float:
        """``max|GH - (GH)^dag| / max|GH|``."""
        gh = self.G @ self.H
        return max_abs(gh - gh.conj().T) / max(max_abs(gh), np.finfo(float).tiny)


@dataclass(frozen=True)
class GridField:
    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.size, 4):
            vals = vals.reshape(self.grid.size, 4)
        object.__setattr__(self, "values", frozen(vals))

    @property
    def vector(self) -> np.ndarray:
        return self.values.ravel()


def gammas_from_alphas(als: AlphaSet) -> np.ndarray:
    """Invert ``alpha^0 = gamma^0/g^00``, ``alpha^j = gamma^0 gamma^j/g^00``."""
    g00 = als.metric.g_inv[0, 0]
    g0 = g00 * als.alphas[0]
    # (gamma^0)^{-1} = alpha^0
    rest = [g00 * (als.alphas[0] @ als.alphas[j]) for j in range(1, 4)]
    return np.array([g0] + rest)


def build_hamiltonian(als: AlphaSet, cfg: DynamicsConfig, B: np.ndarray | None = None) -> GridOperator:
    """Assemble ``H = m a^0 + a^j (-i d_j) + q (A_0 + a^j A_j)`` and its Gram matrix.

    ``B`` is the hermitizing matrix of the alphas; if omitted it is solved
    for from the parent gamma set. Derivatives are periodic central
    differences, so ``G H`` is Hermitian to rounding for any real potential.
    """
    if not is_admissible(als.metric).admissible:
        raise NotAdmissible("the Hamiltonian needs admissible coordinates")
    if B is None:
        B = solve_hermitizing(GammaSet(gammas_from_alphas(als), als.metric)).B
    B = np.asarray(B, dtype=complex)
    grid = cfg.grid
    n = grid.size
    eye_n = np.eye(n)
    a = als.alphas
    H = cfg.mass * np.kron(eye_n, a[0])
    for axis in range(grid.dims):
        H = H + np.kron(-1j * axis_derivative(grid, axis), a[axis + 1])
    if cfg.potential is not None and cfg.charge != 0.0:
        pot = cfg.potential
        H = H + cfg.charge * np.kron(np.diag(pot[0]), np.eye(4))
        for j in range(1, 4):
            H = H + cfg.charge * np.kron(np.diag(pot[j]), a[j])
    G = grid.cell_volume * np.kron(eye_n, B)
    return GridOperator(frozen(H), frozen(G), frozen(B), grid)


def _gram_factor(G: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.cholesky(G, lower=False)
    except np.linalg.LinAlgError as exc:
        raise GramNotPositive("Gram matrix is not positive definite") from exc


def symmetrized_operator(op: GridOperator) -> tuple[np.ndarray, float]:
    """``R^{-dag} (GH) R^{-1}`` with ``G = R^dag R``, plus its relative non-Hermiticity."""
    R = _gram_factor(op.G)
    W = op.G @ op.H
    Z = scipy.linalg.solve_triangular(R, W, trans="C", lower=False)
    K = scipy.linalg.solve_triangular(R, Z.conj().T, trans="C", lower=False).conj().T
    skew = max_abs(K - K.conj().T) / max(max_abs(K), np.finfo(float).tiny)
    return 0.5 * (K + K.conj().T), skew


def spectrum(op: GridOperator, k: int | None = None) -> np.ndarray:
    """Sorted real eigenvalues of ``H x = lambda x`` in the ``G`` inner product.

    With ``k``, returns the ``k`` smallest.
    """
    K, _ = symmetrized_operator(op)
    eig = np.linalg.eigvalsh(K)
    return eig if k is None else eig[:k]


def discrete_inner(psi: GridField, phi: GridField, op: GridOperator) -> complex:
    """``sum_n h^d psi_n^dag B phi_n``."""
    if psi.grid != phi.grid or psi.grid != op.grid:
        raise GridMismatch("fields and operator live on different grids")
    return complex(op.grid.cell_volume * np.einsum("na,ab,nb->", psi.values.conj(), op.B, phi.values))


@dataclass(frozen=True)
class Trajectory:
    """Snapshots ``states[t]`` of shape ``(size, 4)`` at times ``t * dt``."""

    states: np.ndarray
    dt: float
    grid: Grid

    @property
    def steps(self) -> int:
        return self.states.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.states.shape[0]) * self.dt

    def field(self, t: int) -> GridField:
        return GridField(self.states[t], self.grid)


def crank_nicolson_factor(op: GridOperator, dt: float):
    """LU factor of ``1 + i dt/2 H`` and the explicit matrix ``1 - i dt/2 H``."""
    n = op.H.shape[0]
    lhs = np.eye(n) + 0.5j * dt * op.H
    rhs = np.eye(n) - 0.5j * dt * op.H
    with warnings.catch_warnings():
        warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
        try:
            lu = scipy.linalg.lu_factor(lhs)
        except (scipy.linalg.LinAlgWarning, ValueError, np.linalg.LinAlgError) as exc:
            raise SolveFailure("Crank-Nicolson system is singular") from exc
    return lu, rhs


def evolve(psi0: GridField, op: GridOperator, dt: float, steps: int) -> Trajectory:
    """Crank-Nicolson steps ``(1 + i dt/2 H) psi_{n+1} = (1 - i dt/2 H) psi_n``."""
    if psi0.grid != op.grid:
        raise GridMismatch("initial field and operator live on different grids")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    lu, rhs = crank_nicolson_factor(op, dt)
    out = np.empty((steps + 1, op.H.shape[0]), complex)
    out[0] = psi0.vector
    for n in range(steps):
        out[n + 1] = scipy.linalg.lu_solve(lu, rhs @ out[n])
    if not np.all(np.isfinite(out)):
        raise SolveFailure("non-finite values during time stepping")
    return Trajectory(frozen(out.reshape(steps + 1, op.grid.size, 4)), float(dt), op.grid)


def current_density(states: np.ndarray, gs: GammaSet, A) -> np.ndarray:
    """``psi^dag A gamma^mu psi`` at every snapshot and node, shape ``(T, size, 4)`` (complex)."""
    ag = np.einsum("ab,mbc->mac", np.asarray(A), gs.gammas)
    return np.einsum("tna,mab,tnb->tnm", states.conj(), ag, states)


@dataclass(frozen=True)
class ConservationReport:
    max_residual: float
    residual_by_time: np.ndarray
    max_imag: float
    scale: float

    def to_json(self) -> dict:
        return {
            "max_residual": self.max_residual,
            "max_imag": self.max_imag,
            "current_scale": self.scale,
            "residual_by_time": [float(r) for r in self.residual_by_time],
        }


def check_current_conservation(
    trajectory: Trajectory, gs: GammaSet, A, dt: float | None = None, h: float | None = None
) -> ConservationReport:
    """Max over interior snapshots and nodes of the discrete divergence ``|d_mu j^mu|``.

    ``d_0 j^0`` uses central differences between stored snapshots;
    ``d_k j^k`` uses periodic central differences on each active axis.
    """
    states = trajectory.states
    if states.shape[0] < 3:
        raise TooFewSteps("need at least three time levels")
    dt = trajectory.dt if dt is None else dt
    h = trajectory.grid.spacing if h is None else h
    grid = trajectory.grid
    jc = current_density(states, gs, A)
    max_imag = max_abs(jc.imag)
    j = jc.real.reshape((states.shape[0],) + grid.points + (4,))
    div = (j[2:, ..., 0] - j[:-2, ..., 0]) / (2.0 * dt)
    inner = j[1:-1]
    for axis in range(grid.dims):
        comp = inner[..., axis + 1]
        ax = axis + 1  # time is array axis 0
        div = div + (np.roll(comp, -1, axis=ax) - np.roll(comp, 1, axis=ax)) / (2.0 * h)
    by_time = np.abs(div).reshape(div.shape[0], -1).max(axis=1)
    return ConservationReport(float(by_time.max()), frozen(by_time), max_imag, max_abs(j))


@dataclass(frozen=True)
class PlaneWave:
    """``psi(t, x) = u exp(i (p . x - E t))`` with signed energy ``E``."""

    mass: float
    p: np.ndarray
    energy: float
    u: np.ndarray
    gammas: GammaSet

    def __call__(self, t, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        phase = np.exp(1j * (x @ self.p - self.energy * t))
        return phase[:, None] * self.u[None, :]

    def dirac_residual(self, t, x) -> float:
        """Max of ``|i gamma^mu d_mu psi - m psi|`` at the given points, derivatives taken analytically."""
        psi = self(t, x)
        g = self.gammas.gammas
        op = self.energy * g[0] - np.einsum("j,jab->ab", self.p, g[1:]) - self.mass * np.eye(4)
        return max_abs(psi @ op.T)

    def sample(self, grid: Grid, t: float = 0.0) -> GridField:
        return GridField(self(t, grid.coordinates()), grid)


def _b_orthonormal(cands, B, count):
    basis = []
    for v in cands:
        w = v.astype(complex)
        for b in basis:
            w = w - np.vdot(b, B @ w) * b
        nrm = np.vdot(w, B @ w).real
        if nrm > 1e-8:
            basis.append(w / np.sqrt(nrm))
        if len(basis) == count:
            break
    return basis


def plane_wave(
    m: float,
    p,
    branch: int,
    gs: GammaSet,
    spin: int = 0,
    spacing: float | None = None,
    B: np.ndarray | None = None,
) -> PlaneWave:
    """Free plane-wave solution over the Minkowski metric.

    ``u`` spans the ``branch * E`` eigenspace (``branch`` is +1 or -1) of the
    symbol ``m a^0 + a^j k_j`` and is normalized to ``u^dag B u = 1``. With
    ``spacing``, ``k_j = sin(p_j h)/h`` (the central-difference symbol), so the
    sampled field is an exact eigenvector of the grid Hamiltonian; otherwise
    ``k = p`` and the field solves the continuum equation.
    """
    if max_abs(gs.metric.g_inv - ETA) > 1e-12:
        raise ValueError("plane waves are provided in Cartesian coordinates only")
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    p = np.asarray(p, dtype=float).reshape(3)
    kappa = p if spacing is None else np.sin(p * spacing) / spacing
    g = gs.gammas
    a0 = g[0]
    alphas = [a0 @ g[j] for j in range(1, 4)]
    symbol = m * a0 + sum(k * a for k, a in zip(kappa, alphas))
    E = float(np.sqrt(m * m + kappa @ kappa))
    if B is None:
        B = solve_hermitizing(gs).B
    eye = np.eye(4)
    if E > 0:
        proj = 0.5 * (eye + branch * symbol / E)
        cands = [proj[:, k] for k in range(4)]
    else:
        cands = [eye[:, k] for k in ((0, 1, 2, 3) if branch > 0 else (2, 3, 0, 1))]
    basis = _b_orthonormal(cands, B, 2)
    u = basis[spin]
    return PlaneWave(float(m), frozen(p), branch * E, frozen(u), gs)


def wave_packet(grid: Grid, u, center, width: float, momentum) -> GridField:
    """Smooth periodic packet ``u f(x) exp(i p . x)`` sampled on the grid.

    The envelope is ``exp(c (cos(2 pi (x - x0)/L) - 1))`` per active axis with
    ``c = (L / (2 pi w))**2``; near ``x0`` it is a Gaussian of width ``w``, and
    unlike a truncated Gaussian it is analytic across the periodic seam.
    Each momentum component is rounded to the nearest multiple of ``2 pi / L``
    so the phase is periodic too. ``center``, ``width`` targets and
    ``momentum`` have one entry per active axis.
    """
    x = grid.coordinates()[:, : grid.dims]
    ext = np.array(grid.extent)
    x0 = np.asarray(center, dtype=float).reshape(grid.dims)
    k0 = 2.0 * np.pi / ext
    p0 = np.round(np.asarray(momentum, dtype=float).reshape(grid.dims) / k0) * k0
    c = (ext / (2.0 * np.pi * width)) ** 2
    env = np.exp(np.sum(c * (np.cos(k0 * (x - x0)) - 1.0), axis=1) + 1j * (x @ p0))
    return GridField(env[:, None] * np.asarray(u, dtype=complex)[None, :], grid)


def symbol_spectrum_1d(als: AlphaSet, mass: float, grid: Grid, B=None) -> np.ndarray:
    """Free 1D spectrum from the 4x4 momentum-space symbols ``m a^0 + a^1 sin(k h)/h``.

    ``k_n = 2 pi n / (N h)`` for ``n = 0..N-1``. Each symbol is diagonalised
    independently (generalized Hermitian with weight ``B`` when given, plain
    eigenvalues otherwise); the results are pooled and sorted.
    """
    if grid.dims != 1:
        raise ValueError("symbol oracle is for 1D grids")
    n_pts = grid.points[0]
    h = grid.spacing
    k = 2.0 * np.pi * np.arange(n_pts) / (n_pts * h)
    kappa = np.sin(k * h) / h
    out = []
    for kap in kappa:
        sym = mass * als.alphas[0] + kap * als.alphas[1]
        if B is None:
            out.extend(np.linalg.eigvals(sym).real)
        else:
            out.extend(scipy.linalg.eigh(B @ sym, B, eigvals_only=True))
    return np.sort(np.array(out))


@dataclass(frozen=True)
class RefinementLevel:
    points: int
    spacing: float
    dt: float
    steps: int
    residual: float

    def to_json(self) -> dict:
        return {"points": self.points, "h": self.spacing, "dt": self.dt, "steps": self.steps, "residual": self.residual}


def smooth_potential(x: np.ndarray, length: float, amplitudes) -> np.ndarray:
    """Real periodic potential ``A_mu(x) = a_mu cos(2 pi x / L + mu)`` on 1D nodes ``x``."""
    amps = np.asarray(amplitudes, dtype=float).reshape(4)
    phase = 2.0 * np.pi * np.asarray(x) / length
    return np.array([amps[mu] * np.cos(phase + mu) for mu in range(4)])


def conservation_ladder(
    gs: GammaSet,
    points,
    length: float,
    mass: float = 1.0,
    charge: float = 0.0,
    amplitudes=(0.0, 0.0, 0.0, 0.0),
    spinor=(1.0, 0.0, 0.3, 0.2j),
    width: float = 2.5,
    momentum: float = 0.5,
    courant: float = 0.5,
    t_final: float = 1.0,
) -> list[RefinementLevel]:
    """Current-conservation residual of an evolved 1D packet on successively refined grids.

    Each level uses ``h = length / N`` and ``dt = courant * h``, evolves to
    ``t_final`` and records the max divergence residual.
    """
    pair = solve_hermitizing(gs)
    als = alpha_from_gamma(gs)
    levels = []
    for n in points:
        h = length / n
        grid = Grid((int(n),), h)
        pot = smooth_potential(np.arange(n) * h, length, amplitudes)
        op = build_hamiltonian(als, DynamicsConfig(mass, grid, charge, pot), pair.B)
        psi0 = wave_packet(grid, spinor, [0.5 * length], width, [momentum])
        dt = courant * h
        steps = max(int(round(t_final / dt)), 2)
        traj = evolve(psi0, op, dt, steps)
        rep = check_current_conservation(traj, gs, pair.A)
        levels.append(RefinementLevel(int(n), h, dt, steps, rep.max_residual))
    return levels


def observed_orders(levels) -> list[float]:
    """``log(r_i / r_{i+1}) / log(h_i / h_{i+1})`` between consecutive levels."""
    return [float(np.log(a.residual / b.residual) / np.log(a.spacing / b.spacing)) for a, b in zip(levels, levels[1:])]
