"""Dense solvers for the two backends.

Exact matrices are scaled row-wise to Gaussian integers and reduced with
fraction-free (Bareiss) elimination, so every intermediate stays integral
and the final pivot is the determinant of the scaled matrix. Float matrices
go through LAPACK LU with partial pivoting plus a 1-norm rcond estimate,
and float solves get two refinement steps whose residuals are formed in
extended precision.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import LinAlgWarning, lapack, lu_factor, lu_solve

from .scalars import ExactField, Field, GaussRat, Scalar

# Gaussian integers are plain (re, im) int pairs inside this module.
GInt = tuple


class SingularMatrixError(ArithmeticError):
    pass


def _gmul(x: GInt, y: GInt) -> GInt:
    a, b = x
    c, d = y
    return (a * c - b * d, a * d + b * c)


def _gsub(x: GInt, y: GInt) -> GInt:
    return (x[0] - y[0], x[1] - y[1])


def _gdiv_exact(x: GInt, y: GInt) -> GInt:
    a, b = x
    c, d = y
    n = c * c + d * d
    re, rr = divmod(a * c + b * d, n)
    im, ri = divmod(b * c - a * d, n)
    if rr or ri:
        raise ArithmeticError("inexact Gaussian-integer division in Bareiss step")
    return (re, im)


def _scale_row(row: Sequence[GaussRat]) -> tuple[list[GInt], int]:
    den = 1
    for x in row:
        den = math.lcm(den, x.re.denominator, x.im.denominator)
    out = [(int(x.re * den), int(x.im * den)) for x in row]
    return out, den


@dataclass
class BareissResult:
    """Upper-triangular Gaussian-integer form of ``[A | B]`` after elimination."""

    rows: list[list[GInt]]
    size: int
    det: GaussRat  # determinant of the original (unscaled) matrix
    rank_deficient: bool


def bareiss(A: Sequence[Sequence[GaussRat]], B: Sequence[Sequence[GaussRat]] = ()) -> BareissResult:
    """Fraction-free elimination of ``A`` with right-hand-side columns ``B`` (n x m)."""
    n = len(A)
    m = len(B[0]) if len(B) else 0
    rows: list[list[GInt]] = []
    scale = Fraction(1)
    for i in range(n):
        full = list(A[i]) + (list(B[i]) if m else [])
        r, den = _scale_row(full)
        rows.append(r)
        scale *= den
    width = n + m
    prev: GInt = (1, 0)
    sign = 1
    for k in range(n):
        piv = None
        best = None
        for i in range(k, n):
            a, b = rows[i][k]
            if a or b:
                size = a * a + b * b
                if best is None or size < best:
                    piv, best = i, size
        if piv is None:
            return BareissResult(rows, n, GaussRat(0), True)
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        rk = rows[k]
        pk = rk[k]
        for i in range(k + 1, n):
            ri = rows[i]
            f = ri[k]
            if f == (0, 0):
                # row stays proportional: multiply by pivot then divide by prev
                for j in range(k + 1, width):
                    ri[j] = _gdiv_exact(_gmul(ri[j], pk), prev)
            else:
                for j in range(k + 1, width):
                    ri[j] = _gdiv_exact(_gsub(_gmul(ri[j], pk), _gmul(f, rk[j])), prev)
            ri[k] = (0, 0)
        prev = pk
    last = rows[n - 1][n - 1] if n else (1, 0)
    det = GaussRat(sign * last[0], sign * last[1]) / scale if n else GaussRat(1)
    return BareissResult(rows, n, det, False)


def exact_det(A: Sequence[Sequence[GaussRat]]) -> GaussRat:
    if not len(A):
        return GaussRat(1)
    return bareiss(A).det


def exact_solve(A: Sequence[Sequence[GaussRat]], B: Sequence[Sequence[GaussRat]]) -> list[list[GaussRat]]:
    """Solve ``A X = B`` exactly; ``B`` is given row-major (n x m)."""
    n = len(A)
    if n == 0:
        return []
    res = bareiss(A, B)
    if res.rank_deficient:
        raise SingularMatrixError("matrix is singular")
    m = len(B[0])
    U = res.rows
    X = [[GaussRat(0)] * m for _ in range(n)]
    for c in range(m):
        for i in range(n - 1, -1, -1):
            acc = GaussRat(*U[i][n + c])
            for j in range(i + 1, n):
                a, b = U[i][j]
                if a or b:
                    acc = acc - GaussRat(a, b) * X[j][c]
            X[i][c] = acc / GaussRat(*U[i][i])
    return X


@dataclass(frozen=True)
class Normality:
    """Outcome of a normality test for one moment matrix.

    ``status`` is ``"normal"``, ``"singular"`` or, on the float backend only,
    ``"indeterminate"`` when rcond falls between machine precision and the
    policy threshold. ``normal`` is True only for ``"normal"``.
    """

    normal: bool
    status: str
    det: Optional[Scalar] = None
    abs_det: Optional[float] = None
    rcond: Optional[float] = None
    hadamard_ratio: Optional[float] = None  # |det| / prod(row 2-norms), in [0, 1]


def _hadamard_ratio(A: np.ndarray, abs_det: float) -> float:
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms == 0):
        return 0.0
    # log-space keeps large blocks from under/overflowing
    if abs_det == 0:
        return 0.0
    return float(math.exp(math.log(abs_det) - float(np.sum(np.log(norms)))))


def _equilibrate(A: np.ndarray) -> np.ndarray:
    s = np.max(np.abs(A), axis=1)
    s[s == 0] = 1.0
    return A / s[:, None]


_SINGULAR_RCOND = 1e3 * np.finfo(float).eps


def float_normality(A: np.ndarray, rcond_min: float) -> Normality:
    n = A.shape[0]
    if n == 0:
        return Normality(True, "normal", 1 + 0j, 1.0, 1.0, 1.0)
    Ae = _equilibrate(A)
    lu, piv, info = lapack.zgetrf(Ae)
    diag = np.diag(lu)
    if info > 0 or np.any(diag == 0):
        rcond = 0.0
    else:
        anorm = np.linalg.norm(Ae, 1)
        rcond, _ = lapack.zgecon(lu, anorm, norm="1")
        rcond = float(rcond)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LinAlgWarning)
            lu_full, piv_full = lu_factor(A, check_finite=True)
        sign = (-1) ** int(np.sum(piv_full != np.arange(n)))
        det = complex(sign * np.prod(np.diag(lu_full)))
    except (np.linalg.LinAlgError, ValueError):
        det = 0j
    abs_det = abs(det)
    if rcond > rcond_min:
        status = "normal"
    elif rcond <= _SINGULAR_RCOND:
        status = "singular"
    else:
        status = "indeterminate"
    return Normality(status == "normal", status, det, abs_det, rcond, _hadamard_ratio(A, abs_det))


def exact_normality(A: Sequence[Sequence[GaussRat]]) -> Normality:
    det = exact_det(A)
    abs_det = abs(det)
    arr = np.array([[complex(x) for x in row] for row in A], dtype=complex) if len(A) else np.zeros((0, 0))
    ratio = _hadamard_ratio(arr, abs_det) if len(A) else 1.0
    status = "normal" if det else "singular"
    return Normality(bool(det), status, det, abs_det, None, ratio)


def normality(field: Field, A) -> Normality:
    if isinstance(field, ExactField):
        return exact_normality(A)
    return float_normality(np.asarray(A, dtype=complex), field.policy.rcond_min)


_REFINE_STEPS = 2


def solve(field: Field, A, B) -> list[list[Scalar]]:
    """Solve ``A X = B`` (B row-major, n x m) in the given backend."""
    if isinstance(field, ExactField):
        return exact_solve(A, B)
    Af = np.asarray(A, dtype=complex)
    Bf = np.asarray(B, dtype=complex)
    if Af.shape[0] == 0:
        return []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(Af)
    if np.any(np.diag(lu) == 0):
        raise SingularMatrixError("matrix is singular")
    X = lu_solve((lu, piv), Bf)
    # refinement with residuals accumulated in extended precision
    A_ext, B_ext = Af.astype(np.clongdouble), Bf.astype(np.clongdouble)
    for _ in range(_REFINE_STEPS):
        R = B_ext - A_ext @ X.astype(np.clongdouble)
        X = X + lu_solve((lu, piv), R.astype(complex))
    return [[complex(v) for v in row] for row in X]


def det(field: Field, A) -> Scalar:
    if isinstance(field, ExactField):
        return exact_det(A)
    Af = np.asarray(A, dtype=complex)
    if Af.shape[0] == 0:
        return 1 + 0j
    return complex(np.linalg.det(Af))
