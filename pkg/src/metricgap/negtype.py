"""Sign classification of the constrained quadratic form, and the matrices
that carry the gap computation.

Everything here works with a symmetric matrix A and a nonzero functional u.
The form (A x | x) is examined on the hyperplane F of vectors orthogonal to
u.  Three verdicts are possible:

  * NotNegativeType        the form is positive somewhere on F
  * NegativeTypeNonStrict  nonpositive on F, but vanishing on some x != 0
  * StrictNegativeType     negative on all of F except the origin

In the strict case, provided the form is positive somewhere off F, the
constrained maximum M = sup {(A x | x) : x in F_1} is finite and equals
1 / (A^{-1} u | u), attained up to sign at z = M A^{-1} u, where F_1 is the
set of x in F with unit-oscillation image A x.  The rank-one corrections

    C = M u u^T - A          (positive semidefinite, kernel spanned by z)
    B = (1/M) z z^T - A^{-1} (positive semidefinite, kernel spanned by u)

convert the constrained problem into an unconstrained maximum of (B x | x)
over sign vectors; that enumeration lives in the gap module.

Matrices built from a validated metric (NegTypeMatrix with from_metric set)
are positive in some direction whenever n >= 2, so that hypothesis is only
verified for raw inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NotStrict,
    PositiveDirectionMissing,
    ZeroFunctional,
)
from .linalg import (
    Factorization,
    SymMatrix,
    eigenvalues_sym,
    factor,
    invert,
    solve,
)
from .metric import NegTypeMatrix

NOT_NEGATIVE_TYPE = "NotNegativeType"
NEGATIVE_TYPE_NON_STRICT = "NegativeTypeNonStrict"
STRICT_NEGATIVE_TYPE = "StrictNegativeType"


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances for the zero tests in classification.

    Each is scaled by the natural magnitude of the quantity it guards:
    factorization pivots by max|A|, projected eigenvalues by max|A|, and
    the strictness test on (A^{-1} u | u) by max|A^{-1}| times the squared
    1-norm of u.  Quantities within ``marginal_factor`` times their
    tolerance set the marginal flag on the report.
    """

    factor_pivot: float = 1e-10
    eig: float = 1e-9
    strict: float = 1e-9
    marginal_factor: float = 10.0


@dataclass(frozen=True, eq=False)
class NegTypeReport:
    """Outcome of classification, with the intermediate quantities that
    downstream steps reuse.  Fields past ``has_positive_direction`` are None
    whenever the verdict makes them meaningless."""

    verdict: str
    projected_spectrum: np.ndarray
    has_positive_direction: bool
    marginal: bool
    notes: tuple[str, ...]
    ainv_u: np.ndarray | None = None
    ainv_u_dot_u: float | None = None
    M: float | None = None
    z: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class GapMatrices:
    """The strict-case matrices feeding the sign-vector maximization."""

    B: SymMatrix
    C: SymMatrix
    M: float
    z: np.ndarray
    u: np.ndarray


def project_to_F(a: SymMatrix, u) -> SymMatrix:
    """Compress A to an orthonormal basis of the hyperplane orthogonal to u.

    The basis is the trailing n-1 columns of the Householder reflection
    sending u to a multiple of the first coordinate axis, so the output is
    (n-1) x (n-1) and its spectrum is the spectrum of A restricted to F.
    """
    u = np.asarray(u, dtype=float)
    n = a.n
    if u.shape != (n,):
        raise ZeroFunctional(f"functional of shape {u.shape} against matrix of size {n}")
    norm = float(np.linalg.norm(u))
    if norm == 0.0:
        raise ZeroFunctional("functional is identically zero")
    if n < 2:
        raise ValueError("projection needs n >= 2")
    unit = u / norm
    v = unit.copy()
    sign = 1.0 if unit[0] >= 0.0 else -1.0
    v[0] += sign
    v /= np.linalg.norm(v)
    h = np.eye(n) - 2.0 * np.outer(v, v)
    q = h[:, 1:]
    return SymMatrix(q.T @ a.a @ q, sym_tol=1e-10)


def oscillation(x, u) -> float:
    """Oscillation of x relative to u.

    On the support of u this is the largest normalized cross difference
    |u_i x_j - u_j x_i| / (|u_i| + |u_j|); off the support it is |x_i|.
    For the all-ones functional it reduces to half the spread of x.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if x.shape != u.shape:
        raise ZeroFunctional(f"shapes {x.shape} and {u.shape} differ")
    supp = u != 0.0
    if not np.any(supp):
        raise ZeroFunctional("functional is identically zero")
    us, xs = u[supp], x[supp]
    num = np.abs(np.outer(us, xs) - np.outer(xs, us))
    den = np.abs(us)[:, None] + np.abs(us)[None, :]
    best = float(np.max(num / den))
    if np.any(~supp):
        best = max(best, float(np.max(np.abs(x[~supp]))))
    return best


@dataclass(frozen=True, eq=False)
class _Analysis:
    """Internal bundle shared by classify, compute_M_z, and build_B."""

    a: SymMatrix
    u: np.ndarray
    report: NegTypeReport
    factorization: Factorization | None
    a_inv: SymMatrix | None


def _analyze(a: SymMatrix, u: np.ndarray, from_metric: bool, tols: Tolerances) -> _Analysis:
    n = a.n
    if n < 2:
        raise PositiveDirectionMissing(
            "a single point admits no direction of positive quadratic form"
        )
    scale = max(a.max_abs, 0.0)
    eig_tol = tols.eig * max(scale, 1e-300)
    notes: list[str] = []

    spectrum = eigenvalues_sym(project_to_F(a, u))
    top = float(spectrum[-1])
    not_negative = top > eig_tol
    if abs(top) <= tols.marginal_factor * eig_tol:
        notes.append("largest projected eigenvalue within marginal band of zero")

    if from_metric:
        has_positive = True
    else:
        full_top = float(eigenvalues_sym(a)[-1])
        has_positive = full_top > eig_tol
        if abs(full_top) <= tols.marginal_factor * eig_tol:
            notes.append("largest unconstrained eigenvalue within marginal band of zero")

    if not_negative:
        report = NegTypeReport(
            verdict=NOT_NEGATIVE_TYPE,
            projected_spectrum=spectrum,
            has_positive_direction=has_positive,
            marginal=bool(notes),
            notes=tuple(notes),
        )
        return _Analysis(a, u, report, None, None)

    if not has_positive:
        raise PositiveDirectionMissing(
            "quadratic form is nonpositive in every direction; "
            "the constrained maximum is not defined"
        )

    f = factor(a, tols.factor_pivot)
    if not f.singular_flag and f.min_pivot_ratio <= tols.marginal_factor * tols.factor_pivot:
        notes.append("smallest pivot within marginal band of the singularity cutoff")

    if f.singular_flag:
        report = NegTypeReport(
            verdict=NEGATIVE_TYPE_NON_STRICT,
            projected_spectrum=spectrum,
            has_positive_direction=has_positive,
            marginal=bool(notes),
            notes=tuple(notes),
        )
        return _Analysis(a, u, report, f, None)

    a_inv = invert(f)
    ainv_u = solve(f, u)
    aud = float(ainv_u @ u)
    strict_tol = tols.strict * a_inv.max_abs * float(np.sum(np.abs(u))) ** 2
    if abs(aud) <= tols.marginal_factor * strict_tol:
        notes.append("(A^-1 u | u) within marginal band of zero")

    if abs(aud) <= strict_tol:
        report = NegTypeReport(
            verdict=NEGATIVE_TYPE_NON_STRICT,
            projected_spectrum=spectrum,
            has_positive_direction=has_positive,
            marginal=bool(notes),
            notes=tuple(notes),
            ainv_u=ainv_u,
            ainv_u_dot_u=aud,
        )
        return _Analysis(a, u, report, f, a_inv)

    m_val = 1.0 / aud
    z = m_val * ainv_u
    report = NegTypeReport(
        verdict=STRICT_NEGATIVE_TYPE,
        projected_spectrum=spectrum,
        has_positive_direction=has_positive,
        marginal=bool(notes),
        notes=tuple(notes),
        ainv_u=ainv_u,
        ainv_u_dot_u=aud,
        M=m_val,
        z=z,
    )
    return _Analysis(a, u, report, f, a_inv)


def _dispatch(x, u) -> tuple[SymMatrix, np.ndarray, bool]:
    if isinstance(x, NegTypeMatrix):
        if u is not None:
            raise ValueError("functional is fixed by the NegTypeMatrix; do not pass u")
        return x.A, x.u, x.from_metric
    a = x if isinstance(x, SymMatrix) else SymMatrix(x)
    u = np.ones(a.n) if u is None else np.asarray(u, dtype=float)
    return a, u, False


def classify(x, u=None, tols: Tolerances | None = None) -> NegTypeReport:
    """Classify the quadratic form of x on the hyperplane orthogonal to u.

    x may be a NegTypeMatrix (which carries its own functional) or a bare
    symmetric matrix, in which case u defaults to all ones and the
    existence of a positive direction is verified rather than assumed.
    """
    a, u, from_metric = _dispatch(x, u)
    tols = tols or Tolerances()
    return _analyze(a, u, from_metric, tols).report


def compute_M_z(x, u=None, tols: Tolerances | None = None) -> tuple[float, np.ndarray]:
    """Constrained maximum M and its attaining vector z; strict case only."""
    a, u, from_metric = _dispatch(x, u)
    tols = tols or Tolerances()
    report = _analyze(a, u, from_metric, tols).report
    if report.verdict != STRICT_NEGATIVE_TYPE:
        raise NotStrict(f"verdict is {report.verdict}; M is defined only in the strict case")
    return report.M, report.z


def build_B(x, u=None, tols: Tolerances | None = None) -> GapMatrices:
    """Assemble the rank-one-corrected matrices B and C for the strict case.

    Construction guarantees B u = 0 and C z = 0; both residuals are checked
    defensively and a failure indicates broken numerics rather than bad
    input.
    """
    a, u, from_metric = _dispatch(x, u)
    tols = tols or Tolerances()
    analysis = _analyze(a, u, from_metric, tols)
    report = analysis.report
    if report.verdict != STRICT_NEGATIVE_TYPE:
        raise NotStrict(f"verdict is {report.verdict}; B is defined only in the strict case")
    m_val, z = report.M, report.z
    a_inv = analysis.a_inv

    b = SymMatrix(np.outer(z, z) / m_val - a_inv.a, sym_tol=1e-8)
    c = SymMatrix(m_val * np.outer(u, u) - a.a, sym_tol=1e-8)

    b_res = float(np.max(np.abs(b.a @ u)))
    c_res = float(np.max(np.abs(c.a @ z)))
    b_scale = max(b.max_abs * float(np.sum(np.abs(u))), 1e-300)
    c_scale = max(c.max_abs * float(np.sum(np.abs(z))), 1e-300)
    if b_res > 1e-8 * b_scale or c_res > 1e-8 * c_scale:
        raise ArithmeticError(
            f"kernel residuals too large: |B u| = {b_res:.3e}, |C z| = {c_res:.3e}"
        )
    return GapMatrices(B=b, C=c, M=m_val, z=z, u=u)
