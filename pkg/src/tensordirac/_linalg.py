"""Small dense kernels shared by the solver modules.

Matrices are row-major; ``vec`` flattens in C order, so that
``vec(X @ S @ Y) == kron(X, Y.T) @ vec(S)``.
"""

from __future__ import annotations

import numpy as np

NULLSPACE_RTOL = 1e-10


def max_abs(a) -> float:
    """Entrywise infinity norm (0.0 for empty input)."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def nullspace(matrix: np.ndarray, rtol: float = NULLSPACE_RTOL):
    """Return ``(basis, singular_values)`` of the numerical nullspace.

    Singular values at or below ``rtol * s_max`` count as zero. ``basis`` has
    one null vector per row.
    """
    matrix = np.asarray(matrix)
    n = matrix.shape[1]
    _, s, vh = np.linalg.svd(matrix, full_matrices=True)
    full = np.zeros(n)
    full[: s.size] = s
    cutoff = rtol * (full[0] if n else 0.0)
    null = full <= cutoff
    return vh[null].conj(), full


def left_mult(x: np.ndarray) -> np.ndarray:
    """Matrix of ``S -> X @ S`` acting on ``vec(S)``."""
    return np.kron(x, np.eye(x.shape[1]))


def right_mult(y: np.ndarray) -> np.ndarray:
    """Matrix of ``S -> S @ Y`` acting on ``vec(S)``."""
    return np.kron(np.eye(y.shape[0]), y.T)


def hermitian_basis(n: int = 4) -> np.ndarray:
    """Real basis of the n*n Hermitian matrices, shape ``(n*n, n, n)``.

    Order: diagonal units, then symmetric real pairs, then antisymmetric
    imaginary pairs (upper-triangle order).
    """
    basis = []
    for k in range(n):
        e = np.zeros((n, n), complex)
        e[k, k] = 1.0
        basis.append(e)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        e = np.zeros((n, n), complex)
        e[i, j] = e[j, i] = 1.0
        basis.append(e)
    for i, j in pairs:
        e = np.zeros((n, n), complex)
        e[i, j] = 1j
        e[j, i] = -1j
        basis.append(e)
    return np.array(basis)


def complex_to_real_rows(blocks: np.ndarray) -> np.ndarray:
    """Stack real and imaginary parts of a complex system as real rows."""
    return np.vstack([blocks.real, blocks.imag])


def normalize_by_largest(x: np.ndarray) -> np.ndarray:
    """Divide by the first largest-magnitude entry, making it exactly 1."""
    flat = x.ravel()
    k = int(np.argmax(np.abs(flat)))
    out = x / flat[k]
    out.ravel()[k] = 1.0
    return out


def frozen(a: np.ndarray, dtype=None) -> np.ndarray:
    """Copy into a read-only array."""
    out = np.array(a, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out
