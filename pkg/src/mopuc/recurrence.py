"""Recurrence coefficients and identity verification.

Coefficients are *extracted* directly from the polynomials (constant and top
coefficients, inner-product quotients); the recurrences are then *checked*
against those values, so a passing report is a genuine consistency test and
not a fit.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Optional, Sequence, Union

from . import linalg
from .core import Index, Mopuc, NotNormal, in_lattice, minus, plus, shift, support
from .poly import Poly, PolyVector
from .scalars import Scalar, scalar_to_json
from .szego import szego_oracle  # re-exported: the classical one-measure cross-check

__all__ = [
    "CoeffRecord",
    "IdentityReport",
    "alpha",
    "beta",
    "rho",
    "kappa",
    "coeffs",
    "gamma",
    "szego_oracle",
    "verify_type2",
    "verify_type2star",
    "verify_third",
    "verify_A_matrix",
    "verify_type1",
    "verify_compat_polys",
    "verify_compat_coeffs",
    "verify_gamma",
    "verify_biorthogonality",
]

OK = "ok"
PRECONDITION_FAILED = "precondition-failed"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class CoeffRecord:
    index: Index
    alpha: Optional[Scalar]
    beta: Optional[Scalar]
    rho: tuple  # rho_{n,k}; 0 where n_k = 0
    kappa: tuple  # leading coefficient of Lambda_{n,k}; None where n_k = 0
    normal: bool = True

    def to_json(self) -> dict:
        def enc(x):
            return None if x is None else scalar_to_json(x)

        return {
            "index": list(self.index),
            "normal": self.normal,
            "alpha": enc(self.alpha),
            "beta": enc(self.beta),
            "rho": [enc(x) for x in self.rho],
            "kappa": [enc(x) for x in self.kappa],
        }


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one identity check.

    ``residual`` is the largest coefficient magnitude of LHS - RHS (None when
    the check did not run). ``k`` and ``l`` are 0-based in Python and 1-based
    in JSON.
    """

    identity: str
    index: Index
    residual: Optional[float]
    passed: bool
    status: str = OK
    k: Optional[int] = None
    l: Optional[int] = None
    required: tuple = ()
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == OK and not self.passed

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "index": list(self.index),
            "k": None if self.k is None else self.k + 1,
            "l": None if self.l is None else self.l + 1,
            "residual": self.residual,
            "pass": self.passed,
            "status": self.status,
            "required": [list(n) for n in self.required],
        }
        if self.detail:
            out["detail"] = self.detail
        return out


class _NotApplicable(Exception):
    pass


# -- coefficient extraction ----------------------------------------------


def alpha(system, n: Sequence[int]) -> Scalar:
    """alpha_n = Phi_n(0)."""
    return Mopuc.of(system).type2(n).coeff(0)


def beta(system, n: Sequence[int]) -> Scalar:
    """beta_n = z^{|n|} coefficient of Phi*_n."""
    return Mopuc.of(system).type2star(n).coeff(sum(n))


def _phi_moment(m: Mopuc, n: Index, k: int, p: int) -> Scalar:
    return m.inner_monomial(k, m.type2(n), p)


def rho(system, n: Sequence[int], k: int) -> Scalar:
    """rho_{n,k} = <Phi_n, z^{n_k}>_k / <Phi_{n-e_k}, z^{n_k-1}>_k, and 0 when n_k = 0."""
    m = Mopuc.of(system)
    n = tuple(n)
    if n[k] == 0:
        return m.field.zero
    lower = minus(n, k)
    m.require_normal(n, lower)
    return _phi_moment(m, n, k, n[k]) / _phi_moment(m, lower, k, n[k] - 1)


def kappa(system, n: Sequence[int], k: int) -> Optional[Scalar]:
    """Leading z^{n_k-1} coefficient of Lambda_{n,k}; None when n_k = 0."""
    if n[k] == 0:
        return None
    return Mopuc.of(system).type1(n)[k].coeff(n[k] - 1)


def coeffs(system, n: Sequence[int]) -> CoeffRecord:
    m = Mopuc.of(system)
    n = tuple(n)
    m.require_normal(n, *(minus(n, k) for k in support(n)))
    return CoeffRecord(
        index=n,
        alpha=alpha(m, n),
        beta=beta(m, n),
        rho=tuple(rho(m, n, k) for k in range(m.r)),
        kappa=tuple(kappa(m, n, k) for k in range(m.r)),
        normal=True,
    )


def gamma(system, n: Sequence[int], k: int, l: int) -> Scalar:
    """gamma_n^{kl}: z^{|n|} coefficient of Phi_{n+e_k} - Phi_{n+e_l}."""
    if k == l:
        raise ValueError("gamma needs k != l")
    m = Mopuc.of(system)
    n = tuple(n)
    m.require_normal(n, plus(n, k), plus(n, l))
    size = sum(n)
    return m.type2(plus(n, k)).coeff(size) - m.type2(plus(n, l)).coeff(size)


# -- residual plumbing ----------------------------------------------------

Residue = Union[Scalar, Poly, PolyVector, list]


def _flatten(x: Residue) -> list:
    if isinstance(x, Poly):
        return list(x.coeffs)
    if isinstance(x, PolyVector):
        return [c for p in x.slots for c in p.coeffs]
    if isinstance(x, (list, tuple)):
        return [c for item in x for c in _flatten(item)]
    return [x]


def _check(
    system,
    identity: str,
    n: Sequence[int],
    required: Iterable[Sequence[int]],
    compute: Callable[[], Residue],
    k: Optional[int] = None,
    l: Optional[int] = None,
) -> IdentityReport:
    m = Mopuc.of(system)
    n = tuple(n)
    req = []
    for idx in required:
        idx = tuple(idx)
        if in_lattice(idx) and idx not in req:
            req.append(idx)
    req = tuple(req)
    for idx in req:
        if not m.is_normal(idx):
            return IdentityReport(
                identity, n, None, False, PRECONDITION_FAILED, k, l, req,
                f"{idx} is {m.normality(idx).status}",
            )
    try:
        diff = compute()
    except _NotApplicable as exc:
        return IdentityReport(identity, n, None, False, NOT_APPLICABLE, k, l, req, str(exc))
    except NotNormal as exc:
        return IdentityReport(identity, n, None, False, PRECONDITION_FAILED, k, l, req, str(exc))
    values = _flatten(diff)
    residual = max((abs(c) for c in values), default=0.0)
    passed = all(m.field.residual_ok(c) for c in values)
    return IdentityReport(identity, n, float(residual), passed, OK, k, l, req)


def _down(n: Index, r: int) -> list[Index]:
    return [minus(n, j) for j in range(r)]


# -- type II recurrences --------------------------------------------------


def verify_type2(system, n: Sequence[int]) -> list[IdentityReport]:
    """Phi_n = alpha_n Phi*_n + sum_j rho_{n,j} z Phi_{n-e_j}."""
    m = Mopuc.of(system)
    n = tuple(n)

    def compute():
        rhs = m.type2star(n) * alpha(m, n)
        for j in support(n):
            rhs = rhs + m.type2(minus(n, j)).shift() * rho(m, n, j)
        return m.type2(n) - rhs

    return [_check(m, "type2-recurrence", n, [n, *_down(n, m.r)], compute)]


def verify_type2star(system, n: Sequence[int], k: int) -> list[IdentityReport]:
    """Phi*_n = Phi*_{n-e_k} + beta_n z Phi_{n-e_k}, plus k-independence of beta_n."""
    m = Mopuc.of(system)
    n = tuple(n)
    if n[k] == 0:
        raise ValueError(f"verify_type2star needs n_k > 0 (n={n}, k={k})")
    lower = minus(n, k)

    def recurrence():
        return m.type2star(n) - m.type2star(lower) - m.type2(lower).shift() * beta(m, n)

    def independence():
        # beta recovered from each admissible direction k' must agree with the one for k
        diffs = []
        b_k = _beta_from_step(m, n, k)
        for k2 in support(n):
            if k2 != k and m.is_normal(minus(n, k2)):
                diffs.append(_beta_from_step(m, n, k2) - b_k)
        return diffs

    return [
        _check(m, "type2star-recurrence", n, [n, lower], recurrence, k=k),
        _check(m, "beta-k-independence", n, [n, lower], independence, k=k),
    ]


def _beta_from_step(m: Mopuc, n: Index, k: int) -> Scalar:
    """Quotient of Phi*_n - Phi*_{n-e_k} by the monic z Phi_{n-e_k} (top coefficient)."""
    diff = m.type2star(n) - m.type2star(minus(n, k))
    return diff.coeff(sum(n))


def verify_third(system, n: Sequence[int]) -> list[IdentityReport]:
    """Phi*_n = beta_n Phi_n + sum_j rho_{n,j} Phi*_{n-e_j}, and alpha beta + sum rho = 1."""
    m = Mopuc.of(system)
    n = tuple(n)
    req = [n, *_down(n, m.r)]

    def identity():
        rhs = m.type2(n) * beta(m, n)
        for j in support(n):
            rhs = rhs + m.type2star(minus(n, j)) * rho(m, n, j)
        return m.type2star(n) - rhs

    def sum_rule():
        return _rho_sum_residual(m, n)

    return [
        _check(m, "third-recurrence", n, req, identity),
        _check(m, "rho-sum-rule", n, req, sum_rule),
    ]


def _rho_sum_residual(m: Mopuc, n: Index) -> Scalar:
    return alpha(m, n) * beta(m, n) + sum((rho(m, n, j) for j in range(m.r)), m.field.zero) - 1


def _r_matrix(m: Mopuc, n: Index) -> list[list[Scalar]]:
    row = [rho(m, n, k) for k in range(m.r)]
    return [list(row) for _ in range(m.r)]


def verify_A_matrix(system, n: Sequence[int]) -> list[IdentityReport]:
    """Stacked Szegő relations with A_n = (I - R_n)/beta_n and its closed-form inverse."""
    m = Mopuc.of(system)
    n = tuple(n)
    r = m.r
    req = [n, *_down(n, r)]
    one, zero = m.field.one, m.field.zero

    def needs_full_support():
        if any(x == 0 for x in n):
            raise _NotApplicable("some n - e_j leaves Z_+^r")

    def top_rows():
        phi = m.type2(n)
        return [phi - m.type2(minus(n, j)).shift() for j in range(r)]

    def forward():
        needs_full_support()
        b = beta(m, n)
        if m.field.is_zero(b):
            raise _NotApplicable("beta_n = 0")
        R = _r_matrix(m, n)
        stars = [m.type2star(minus(n, k)) for k in range(r)]
        out = []
        for j, lhs in enumerate(top_rows()):
            rhs = Poly()
            for k in range(r):
                rhs = rhs + stars[k] * (((one if j == k else zero) - R[j][k]) / b)
            out.append(lhs - rhs)
        return out

    def inverse():
        needs_full_support()
        a = alpha(m, n)
        if m.field.is_zero(a):
            raise _NotApplicable("alpha_n = 0")
        R = _r_matrix(m, n)
        diag = one - sum(R[0], zero)
        rows = top_rows()
        out = []
        for j in range(r):
            acc = Poly()
            for k in range(r):
                acc = acc + rows[k] * (((diag if j == k else zero) + R[j][k]) / a)
            out.append(acc - m.type2star(minus(n, j)))
        return out

    def determinant():
        needs_full_support()
        R = _r_matrix(m, n)
        I_minus_R = [[(one if j == k else zero) - R[j][k] for k in range(r)] for j in range(r)]
        d = linalg.det(m.field, I_minus_R)
        ab = alpha(m, n) * beta(m, n)
        return [d - ab, (one - sum(R[0], zero)) - ab]

    def product():
        needs_full_support()
        a, b = alpha(m, n), beta(m, n)
        if m.field.is_zero(a) or m.field.is_zero(b):
            raise _NotApplicable("needs alpha_n != 0 and beta_n != 0")
        R = _r_matrix(m, n)
        diag = one - sum(R[0], zero)
        A = [[((one if j == k else zero) - R[j][k]) / b for k in range(r)] for j in range(r)]
        Ainv = [[((diag if j == k else zero) + R[j][k]) / a for k in range(r)] for j in range(r)]
        return [
            sum((A[i][t] * Ainv[t][c] for t in range(r)), zero) - (one if i == c else zero)
            for i in range(r)
            for c in range(r)
        ]

    return [
        _check(m, "szego-matrix-forward", n, req, forward),
        _check(m, "szego-matrix-inverse", n, req, inverse),
        _check(m, "det-identity", n, req, determinant),
        _check(m, "A-inverse-product", n, req, product),
    ]


# -- type I recurrences ---------------------------------------------------


def verify_type1(system, n: Sequence[int]) -> list[IdentityReport]:
    """z Lambda_n = -conj(beta_n) Lambda*_n + sum_j conj(rho_{n,j}) Lambda_{n+e_j};
    Lambda*_n = Lambda*_{n+e_k} - conj(alpha_n) Lambda_{n+e_k} for every k."""
    m = Mopuc.of(system)
    n = tuple(n)
    r = m.r
    ups = [plus(n, j) for j in range(r)]

    def second():
        rhs = m.type1star(n) * (-beta(m, n).conjugate())
        for j in range(r):
            rhs = rhs + m.type1(ups[j]) * rho(m, n, j).conjugate()
        return m.type1(n).shift() - rhs

    reports = [_check(m, "type1-recurrence", n, [n, *ups, *_down(n, r)], second)]
    for k in range(r):

        def first(k=k):
            up = ups[k]
            return m.type1star(n) - (m.type1star(up) - m.type1(up) * alpha(m, n).conjugate())

        reports.append(_check(m, "type1star-recurrence", n, [n, ups[k]], first, k=k))
    return reports


def verify_biorthogonality(system, n: Sequence[int], k: int) -> list[IdentityReport]:
    """<Phi_n, Lambda_{n+e_k,k}>_k = sum_m <Phi_n, Lambda_{n+e_k,m}>_m = 1, and
    conj(kappa_{n+e_k,k}) <Phi_n, z^{n_k}>_k = 1."""
    m = Mopuc.of(system)
    n = tuple(n)
    up = plus(n, k)

    def biorth():
        phi, lam = m.type2(n), m.type1(up)
        one = m.field.one
        total = sum((m.inner(j, phi, lam[j]) for j in range(m.r)), m.field.zero)
        return [m.inner(k, phi, lam[k]) - one, total - one]

    def kappa_relation():
        return kappa(m, up, k).conjugate() * _phi_moment(m, n, k, n[k]) - 1

    return [
        _check(m, "biorthogonality", n, [n, up], biorth, k=k),
        _check(m, "kappa-relation", n, [n, up], kappa_relation, k=k),
    ]


# -- compatibility --------------------------------------------------------


def verify_compat_polys(system, n: Sequence[int], k: int, l: int) -> list[IdentityReport]:
    """Polynomial compatibility relations between neighbours of n in directions k, l."""
    if k == l:
        raise ValueError("compatibility relations need k != l")
    m = Mopuc.of(system)
    n = tuple(n)
    nk, nl, nkl = plus(n, k), plus(n, l), shift(n, (k, 1), (l, 1))

    def phi_difference():
        return m.type2(nk) - m.type2(nl) - m.type2(n) * gamma(m, n, k, l)

    def phistar_top():
        lhs = m.type2star(nk) - m.type2star(nl)
        return lhs - (m.type2(nl) - m.type2(nk)).shift() * beta(m, nkl)

    def phistar_difference():
        lhs = m.type2star(nk) - m.type2star(nl)
        return lhs - m.type2(n).shift() * (beta(m, nk) - beta(m, nl))

    def phistar_balance():
        star = m.type2star(n)
        return (m.type2star(nl) - star) * beta(m, nk) - (m.type2star(nk) - star) * beta(m, nl)

    top = n
    dk, dl, dkl = minus(top, k), minus(top, l), shift(top, (k, -1), (l, -1))

    def diagonal_type1():
        if not in_lattice(dkl):
            raise _NotApplicable("n - e_k - e_l leaves Z_+^r")
        return m.type1(dk) - m.type1(dl) - m.type1(top) * gamma(m, dkl, k, l).conjugate()

    kw = dict(k=k, l=l)
    return [
        _check(m, "phi-difference", n, [n, nk, nl], phi_difference, **kw),
        _check(m, "phistar-difference-top", n, [nk, nl, nkl], phistar_top, **kw),
        _check(m, "phistar-difference", n, [n, nk, nl], phistar_difference, **kw),
        _check(m, "phistar-beta-balance", n, [n, nk, nl], phistar_balance, **kw),
        _check(m, "type1-diagonal", n, [top, dk, dl, dkl], diagonal_type1, **kw),
    ]


def verify_compat_coeffs(system, n: Sequence[int], k: int, l: int) -> list[IdentityReport]:
    """Partial difference equations linking alpha, beta, rho and gamma around n."""
    if k == l:
        raise ValueError("compatibility relations need k != l")
    m = Mopuc.of(system)
    n = tuple(n)
    nk_, nl_ = minus(n, k), minus(n, l)
    nkl_ = shift(n, (k, -1), (l, -1))
    nk_l_ = shift(n, (k, 1), (l, -1))  # n + e_k - e_l
    nk = plus(n, k)

    def needs_corner():
        if not in_lattice(nkl_):
            raise _NotApplicable("n - e_k - e_l leaves Z_+^r")

    def alpha_beta():
        needs_corner()
        a, b = alpha, beta
        return b(m, n) * (a(m, nl_) - a(m, nk_)) - (b(m, nk_) - b(m, nl_)) * a(m, nkl_)

    def rho_sum():
        return _rho_sum_residual(m, n)

    def alpha_rho():
        needs_corner()
        a = alpha
        lhs = (a(m, nl_) - a(m, nk_)) * a(m, nl_) * rho(m, n, k)
        rhs = (a(m, nk_l_) - a(m, n)) * a(m, nkl_) * rho(m, nl_, k)
        return lhs - rhs

    def rho_gamma():
        needs_corner()
        return rho(m, n, k) * gamma(m, nkl_, k, l) - rho(m, nl_, k) * gamma(m, nl_, k, l)

    def beta_rho():
        needs_corner()
        b = beta
        lhs = (b(m, nk_) - b(m, nl_)) * b(m, nk) * rho(m, n, k)
        rhs = (b(m, n) - b(m, nk_l_)) * b(m, n) * rho(m, nl_, k)
        return lhs - rhs

    corner = [n, nk_, nl_, nkl_]
    kw = dict(k=k, l=l)
    return [
        _check(m, "compat-alpha-beta", n, corner, alpha_beta, **kw),
        _check(m, "compat-rho-sum", n, [n, *_down(n, m.r)], rho_sum, **kw),
        _check(m, "compat-alpha-rho", n, corner + [nk_l_], alpha_rho, **kw),
        _check(m, "compat-rho-gamma", n, corner + [nk_l_], rho_gamma, **kw),
        _check(m, "compat-beta-rho", n, corner + [nk_l_, nk], beta_rho, **kw),
    ]


def verify_gamma(system, n: Sequence[int], k: int, l: int) -> list[IdentityReport]:
    """Antisymmetry of gamma and each of its closed forms."""
    if k == l:
        raise ValueError("gamma needs k != l")
    m = Mopuc.of(system)
    n = tuple(n)
    nk, nl, nkl = plus(n, k), plus(n, l), shift(n, (k, 1), (l, 1))
    base = [n, nk, nl]

    def antisymmetry():
        return gamma(m, n, k, l) + gamma(m, n, l, k)

    def via_alpha():
        return alpha(m, nk) - alpha(m, nl) - alpha(m, n) * gamma(m, n, k, l)

    def via_beta():
        return beta(m, nkl) * gamma(m, n, k, l) - (beta(m, nl) - beta(m, nk))

    def via_inner():
        return _phi_moment(m, nl, k, n[k]) + _phi_moment(m, n, k, n[k]) * gamma(m, n, k, l)

    kw = dict(k=k, l=l)
    return [
        _check(m, "gamma-antisymmetry", n, base, antisymmetry, **kw),
        _check(m, "gamma-alpha", n, base, via_alpha, **kw),
        _check(m, "gamma-beta", n, base + [nkl], via_beta, **kw),
        _check(m, "gamma-inner-product", n, base, via_inner, **kw),
    ]
