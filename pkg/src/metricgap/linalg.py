"""Dense symmetric linear algebra sized for matrices up to a few hundred rows.

Distance-power matrices have a zero diagonal and are indefinite, so the
workhorse factorization is a pivoted LDL^T (Bunch-Kaufman with 1x1 and 2x2
diagonal blocks) rather than Cholesky.  Singularity is a reported state of
the factorization, not an exception; it only becomes an error when a solve
is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import AsymmetricInput, DimensionMismatch, SingularSystem

# Pivot magnitudes below this fraction of the largest entry flag the matrix
# as numerically singular.
DEFAULT_PIVOT_TOL = 1e-10


class SymMatrix:
    """A real symmetric matrix, checked and frozen at construction.

    Entry pairs within ``sym_tol * max(1, max|a|)`` of each other are
    averaged; anything worse raises AsymmetricInput.  The backing array is
    marked read-only so downstream code can share it without copying.
    """

    __slots__ = ("a",)

    def __init__(self, entries, sym_tol: float = 1e-12):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise DimensionMismatch("matrix must have at least one row")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        scale = float(np.max(np.abs(a)))
        gap = float(np.max(np.abs(a - a.T)))
        if gap > sym_tol * max(scale, 1.0):
            i, j = np.unravel_index(int(np.argmax(np.abs(a - a.T))), a.shape)
            raise AsymmetricInput(
                f"entries ({i},{j}) and ({j},{i}) differ by {gap:.3e}"
            )
        a = (a + a.T) / 2.0
        a.setflags(write=False)
        self.a = a

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.a)))

    def __getitem__(self, idx):
        return self.a[idx]

    def __array__(self, dtype=None, copy=None):
        if copy:
            return np.array(self.a, dtype=dtype)
        return np.asarray(self.a, dtype=dtype)

    def __repr__(self) -> str:
        return f"SymMatrix(n={self.n}, max_abs={self.max_abs:.6g})"


@dataclass(frozen=True, eq=False)
class Factorization:
    """Pivoted LDL^T factorization of a symmetric matrix.

    ``lower[permutation]`` is unit lower triangular and ``block_diag`` is
    block diagonal with 1x1 and 2x2 blocks, so that
    ``a = lower @ block_diag @ lower.T`` up to rounding.
    """

    lower: np.ndarray
    block_diag: np.ndarray
    permutation: np.ndarray
    singular_flag: bool
    min_pivot_ratio: float

    @property
    def n(self) -> int:
        return self.lower.shape[0]


def _pivot_magnitudes(block_diag: np.ndarray) -> np.ndarray:
    """Magnitudes of the factorization pivots.

    A 2x2 block contributes the magnitudes of both its eigenvalues, so a
    nonsingular block with tiny diagonal (the usual shape for zero-diagonal
    inputs) is not mistaken for a near-zero pivot.
    """
    n = block_diag.shape[0]
    mags = []
    i = 0
    while i < n:
        if i + 1 < n and block_diag[i + 1, i] != 0.0:
            block = block_diag[i : i + 2, i : i + 2]
            mags.extend(np.abs(np.linalg.eigvalsh(block)).tolist())
            i += 2
        else:
            mags.append(abs(float(block_diag[i, i])))
            i += 1
    return np.array(mags)


def factor(m: SymMatrix, tol: float = DEFAULT_PIVOT_TOL) -> Factorization:
    """Factor a symmetric matrix, reporting near-singularity instead of raising.

    The singular flag is set when the smallest pivot magnitude falls below
    ``tol * max|m|``.  An all-zero matrix is singular by convention.
    """
    a = m.a
    lower, block_diag, perm = scipy.linalg.ldl(a)
    pivots = _pivot_magnitudes(block_diag)
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        return Factorization(lower, block_diag, perm, True, 0.0)
    ratio = float(pivots.min()) / scale
    return Factorization(lower, block_diag, perm, bool(ratio < tol), ratio)


def _solve_block_diag(block_diag: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = block_diag.shape[0]
    out = np.empty_like(y)
    i = 0
    while i < n:
        if i + 1 < n and block_diag[i + 1, i] != 0.0:
            out[i : i + 2] = np.linalg.solve(block_diag[i : i + 2, i : i + 2], y[i : i + 2])
            i += 2
        else:
            out[i] = y[i] / block_diag[i, i]
            i += 1
    return out


def solve(f: Factorization, b) -> np.ndarray:
    """Solve ``a @ x = b`` through the factorization.

    ``b`` may be a vector or a matrix of stacked right-hand sides.
    """
    if f.singular_flag:
        raise SingularSystem(
            f"matrix flagged singular (min pivot ratio {f.min_pivot_ratio:.3e})"
        )
    b = np.asarray(b, dtype=float)
    if b.shape[0] != f.n:
        raise DimensionMismatch(f"right-hand side has {b.shape[0]} rows, expected {f.n}")
    tri = f.lower[f.permutation]
    y = scipy.linalg.solve_triangular(tri, b[f.permutation], lower=True, unit_diagonal=True)
    v = _solve_block_diag(f.block_diag, y)
    w = scipy.linalg.solve_triangular(tri.T, v, lower=False, unit_diagonal=True)
    x = np.empty_like(w)
    x[f.permutation] = w
    return x


def invert(f: Factorization) -> SymMatrix:
    """Full inverse through the factorization.

    The raw solve of the identity is symmetric only to rounding, so the
    result is symmetrized before freezing.
    """
    x = solve(f, np.eye(f.n))
    return SymMatrix((x + x.T) / 2.0, sym_tol=1e-8)


def eigenvalues_sym(m: SymMatrix) -> np.ndarray:
    """All eigenvalues, ascending."""
    return np.linalg.eigvalsh(m.a)


def quad_form(m: SymMatrix, x, y) -> float:
    """The bilinear value (m @ y | x)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (m.n,) or y.shape != (m.n,):
        raise DimensionMismatch(
            f"vectors of shape {x.shape} and {y.shape} against matrix of size {m.n}"
        )
    return float(x @ m.a @ y)
