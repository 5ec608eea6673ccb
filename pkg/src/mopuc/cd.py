"""Christoffel–Darboux kernel along monotone lattice paths.

Both sides are evaluated slot by slot (one value per measure) and summed.
The pairing Phi(z) * conj(Lambda_m(zeta)) is formed by conjugating Lambda's
coefficients and evaluating at conj(zeta).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import Index, Mopuc, NotNormal, in_lattice, minus, plus
from .poly import Poly
from .recurrence import rho
from .scalars import Field, GaussRat, Scalar, scalar_to_json

PATH_KINDS = ("stepline", "round-robin", "random", "explicit")


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class LatticePath:
    """Monotone path from 0 taking unit steps e_{steps[i]} (0-based directions)."""

    r: int
    steps: tuple

    def __post_init__(self):
        if self.r < 1:
            raise PathError("r must be >= 1")
        for s in self.steps:
            if not isinstance(s, int) or not 0 <= s < self.r:
                raise PathError(f"step {s!r} is not a direction in 0..{self.r - 1}")

    @property
    def N(self) -> int:
        return len(self.steps)

    @property
    def indices(self) -> list[Index]:
        n = [0] * self.r
        out = [tuple(n)]
        for s in self.steps:
            n[s] += 1
            out.append(tuple(n))
        return out

    @property
    def endpoint(self) -> Index:
        return self.indices[-1]


def make_path(
    kind: str,
    r: int,
    N: Optional[int] = None,
    *,
    target: Optional[Sequence[int]] = None,
    steps: Optional[Sequence[int]] = None,
    seed: int = 0,
) -> LatticePath:
    if kind == "stepline":
        if target is None or len(target) != r or any(t < 0 for t in target):
            raise PathError(f"stepline needs a target multi-index of length {r}")
        path = [j for j, t in enumerate(target) for _ in range(t)]
        if N is not None and N != len(path):
            raise PathError(f"target {tuple(target)} has |n|={len(path)}, not N={N}")
    elif kind == "round-robin":
        path = [i % r for i in range(_need_n(N))]
    elif kind == "random":
        rng = random.Random(seed)
        path = [rng.randrange(r) for _ in range(_need_n(N))]
    elif kind == "explicit":
        if not steps:
            raise PathError("explicit path needs at least one step")
        path = list(steps)
    else:
        raise PathError(f"unknown path kind {kind!r}; expected one of {PATH_KINDS}")
    if not path:
        raise PathError("path must have N >= 1 steps")
    return LatticePath(r, tuple(path))


def _need_n(N: Optional[int]) -> int:
    if N is None or N < 1:
        raise PathError("N must be >= 1")
    return N


def _pair(phi: Poly, lam: Poly, z: Scalar, zeta_bar: Scalar) -> Scalar:
    return phi(z) * lam.conj_coeffs()(zeta_bar)


def required_indices(path: LatticePath) -> list[Index]:
    """Path indices first, then their in-lattice nearest neighbours."""
    seen: dict[Index, None] = {}
    for n in path.indices:
        seen.setdefault(n, None)
    for n in path.indices:
        for j in range(path.r):
            for nb in (plus(n, j), minus(n, j)):
                if in_lattice(nb):
                    seen.setdefault(nb, None)
    return list(seen)


def _require(m: Mopuc, path: LatticePath) -> None:
    for n in required_indices(path):
        if not m.is_normal(n):
            raise NotNormal(n, "needed by the Christoffel-Darboux hypotheses")


def admissible_at(system, n: Index) -> bool:
    """n and its in-lattice nearest neighbours are all normal."""
    m = Mopuc.of(system)
    if not m.is_normal(n):
        return False
    for j in range(m.r):
        for nb in (plus(n, j), minus(n, j)):
            if in_lattice(nb) and not m.is_normal(nb):
                return False
    return True


def random_admissible_path(system, N: int, seed: int = 0) -> LatticePath:
    """Seeded random walk of at most N steps that only visits admissible indices.

    Each step picks uniformly among the directions whose next index is
    admissible; the walk ends early when there is none.
    """
    m = Mopuc.of(system)
    _need_n(N)
    rng = random.Random(seed)
    n = (0,) * m.r
    if not admissible_at(m, n):
        raise NotNormal(n, "a neighbour of the origin is not normal")
    steps: list[int] = []
    while len(steps) < N:
        options = [j for j in range(m.r) if admissible_at(m, plus(n, j))]
        if not options:
            break
        j = rng.choice(options)
        steps.append(j)
        n = plus(n, j)
    if not steps:
        raise PathError("no admissible first step")
    return LatticePath(m.r, tuple(steps))


@dataclass(frozen=True)
class CDEvaluation:
    path: LatticePath
    z: Scalar
    zeta: Scalar
    lhs: Scalar
    rhs: Scalar
    lhs_slots: tuple
    rhs_slots: tuple
    residual: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "steps": [s + 1 for s in self.path.steps],
            "endpoint": list(self.path.endpoint),
            "z": scalar_to_json(self.z),
            "zeta": scalar_to_json(self.zeta),
            "lhs": scalar_to_json(self.lhs),
            "rhs": scalar_to_json(self.rhs),
            "lhs_slots": [scalar_to_json(x) for x in self.lhs_slots],
            "rhs_slots": [scalar_to_json(x) for x in self.rhs_slots],
            "residual": self.residual,
            "pass": self.passed,
        }


def cd_sides(system, path: LatticePath, z: Scalar, zeta: Scalar) -> tuple[list, list]:
    """Per-slot values of the kernel sum (left) and the endpoint expression (right)."""
    m = Mopuc.of(system)
    _require(m, path)
    f = m.field
    z, zeta = f.convert(z), f.convert(zeta)
    zb = zeta.conjugate()
    idx = path.indices
    r = m.r
    lhs = [f.zero] * r
    for k in range(path.N):
        phi = m.type2(idx[k])
        lam = m.type1(idx[k + 1])
        for s in range(r):
            lhs[s] = lhs[s] + _pair(phi, lam[s], z, zb)
    factor = 1 - z * zb
    lhs = [factor * v for v in lhs]

    end = path.endpoint
    star, lam_star = m.type2star(end), m.type1star(end)
    rhs = [_pair(star, lam_star[s], z, zb) for s in range(r)]
    for j in range(r):
        if end[j] == 0:
            continue  # Phi_{n-e_j} = 0 outside Z_+^r
        coef = rho(m, end, j) * z * m.type2(minus(end, j))(z)
        lam_up = m.type1(plus(end, j))
        for s in range(r):
            rhs[s] = rhs[s] - coef * lam_up[s].conj_coeffs()(zb)
    return lhs, rhs


def cd_check(system, path: LatticePath, z: Scalar, zeta: Scalar) -> CDEvaluation:
    m = Mopuc.of(system)
    f = m.field
    lhs_s, rhs_s = cd_sides(m, path, z, zeta)
    lhs = sum(lhs_s, f.zero)
    rhs = sum(rhs_s, f.zero)
    diffs = [a - b for a, b in zip(lhs_s, rhs_s)] + [lhs - rhs]
    residual = max(abs(d) for d in diffs)
    passed = all(f.residual_ok(d) for d in diffs)
    return CDEvaluation(path, f.convert(z), f.convert(zeta), lhs, rhs, tuple(lhs_s), tuple(rhs_s), float(residual), passed)


# -- bivariate coefficient form ---------------------------------------------

Bivariate = dict  # (power of z, power of conj(zeta)) -> coefficient


def _outer(phi: Poly, lam: Poly, scale: Scalar = 1, shift_z: int = 0) -> Bivariate:
    out: Bivariate = {}
    lam_bar = lam.conj_coeffs().coeffs
    for a, pa in enumerate(phi.coeffs):
        if pa == 0:
            continue
        for b, qb in enumerate(lam_bar):
            if qb == 0:
                continue
            key = (a + shift_z, b)
            out[key] = out.get(key, 0) + scale * pa * qb
    return out


def _acc(target: Bivariate, src: Bivariate, sign: int = 1) -> None:
    for key, c in src.items():
        target[key] = target.get(key, 0) + (c if sign > 0 else -c)


def cd_bivariate(system, path: LatticePath) -> tuple[list[Bivariate], list[Bivariate]]:
    """Both sides as polynomials in (z, conj(zeta)), one dict per slot."""
    m = Mopuc.of(system)
    _require(m, path)
    idx = path.indices
    r = m.r
    kernel = [dict() for _ in range(r)]
    for k in range(path.N):
        phi, lam = m.type2(idx[k]), m.type1(idx[k + 1])
        for s in range(r):
            _acc(kernel[s], _outer(phi, lam[s]))
    lhs = []
    for s in range(r):
        side: Bivariate = dict(kernel[s])
        for (a, b), c in kernel[s].items():
            side[(a + 1, b + 1)] = side.get((a + 1, b + 1), 0) - c
        lhs.append(side)
    end = path.endpoint
    star, lam_star = m.type2star(end), m.type1star(end)
    rhs = [_outer(star, lam_star[s]) for s in range(r)]
    for j in range(r):
        if end[j] == 0:
            continue
        coef = rho(m, end, j)
        phi_low, lam_up = m.type2(minus(end, j)), m.type1(plus(end, j))
        for s in range(r):
            _acc(rhs[s], _outer(phi_low, lam_up[s], coef, shift_z=1), sign=-1)
    return lhs, rhs


def bivariate_residual(field: Field, lhs: Sequence[Bivariate], rhs: Sequence[Bivariate]) -> tuple[float, bool]:
    worst, ok = 0.0, True
    for a, b in zip(lhs, rhs):
        for key in set(a) | set(b):
            d = a.get(key, 0) - b.get(key, 0)
            worst = max(worst, abs(d))
            ok = ok and field.residual_ok(field.convert(d) if isinstance(d, int) else d)
    return float(worst), ok


def bivariate_degrees(side: Sequence[Bivariate], field: Field) -> tuple[int, int]:
    """Largest z-power and conj(zeta)-power carrying a nonzero coefficient."""
    dz = dw = -1
    for poly in side:
        for (a, b), c in poly.items():
            if not field.is_zero(field.convert(c) if isinstance(c, int) else c):
                dz, dw = max(dz, a), max(dw, b)
    return dz, dw


# -- sample points ----------------------------------------------------------


def sample_points(count: int, seed: int = 0, radius: Fraction = Fraction(2)) -> list[tuple[GaussRat, GaussRat]]:
    """Seeded Gaussian-rational (z, zeta) pairs with |z|, |zeta| <= radius."""
    rng = random.Random(seed)
    half = radius * Fraction(7, 10)  # each part below radius / sqrt(2)

    def draw() -> GaussRat:
        den = 60
        lim = int(half * den)
        return GaussRat(Fraction(rng.randint(-lim, lim), den), Fraction(rng.randint(-lim, lim), den))

    return [(draw(), draw()) for _ in range(count)]


def circle_points(count: int = 16) -> list[GaussRat]:
    """Exact points on |z| = 1 from the rational parametrization ((1-t^2) + 2ti)/(1+t^2)."""
    out = []
    i = 0
    while len(out) < count:
        t = Fraction(i - count // 2, 4)
        d = 1 + t * t
        out.append(GaussRat((1 - t * t) / d, 2 * t / d))
        i += 1
    return out
