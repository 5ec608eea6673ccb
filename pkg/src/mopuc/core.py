"""Moment matrices, normality and the four multiple-orthogonal families.

Measure indices are 0-based throughout the library; multi-indices are plain
tuples of nonnegative ints.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from . import linalg
from .linalg import Normality
from .measures import MeasureSystem
from .poly import Poly, PolyVector
from .scalars import Scalar

Index = tuple


class NotNormal(ArithmeticError):
    """Raised when an operation needs a normal multi-index and gets a singular one."""

    def __init__(self, index: Index, detail: str = "") -> None:
        self.index = tuple(index)
        msg = f"multi-index {self.index} is not normal"
        super().__init__(msg + (f" ({detail})" if detail else ""))


class ZeroIndex(ValueError):
    pass


# -- multi-index helpers ---------------------------------------------------


def unit(r: int, k: int) -> Index:
    return tuple(1 if j == k else 0 for j in range(r))


def shift(n: Sequence[int], *moves: tuple[int, int]) -> Index:
    """n + sum(d * e_k) for each (k, d); the result may leave Z_+^r."""
    out = list(n)
    for k, d in moves:
        out[k] += d
    return tuple(out)


def plus(n: Sequence[int], k: int) -> Index:
    return shift(n, (k, 1))


def minus(n: Sequence[int], k: int) -> Index:
    return shift(n, (k, -1))


def in_lattice(n: Sequence[int]) -> bool:
    return all(x >= 0 for x in n)


def support(n: Sequence[int]) -> list[int]:
    return [j for j, x in enumerate(n) if x > 0]


def graded_indices(r: int, max_total: int) -> Iterator[Index]:
    """All n in Z_+^r with |n| <= max_total, by total degree then lexicographically."""
    for total in range(max_total + 1):
        yield from _compositions(r, total)


def _compositions(r: int, total: int) -> Iterator[Index]:
    if r == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(r - 1, total - first):
            yield (first,) + rest


def box_indices(max_index: Sequence[int]) -> list[Index]:
    """All n with 0 <= n <= max_index componentwise, in graded-lex order."""
    r = len(max_index)
    out = [n for n in graded_indices(r, sum(max_index)) if all(a <= b for a, b in zip(n, max_index))]
    return out


# -- moment matrix ---------------------------------------------------------


@dataclass(frozen=True)
class MomentMatrix:
    """Block-row matrix of shifted moments; row (j, q) holds nu_j^{c-q}, c = 0..|n|-1."""

    index: Index
    rows: tuple
    row_labels: tuple  # (j, q) per row

    @property
    def size(self) -> int:
        return len(self.rows)


class Mopuc:
    """Multiple orthogonal polynomials of one measure system, with a per-index cache."""

    def __init__(self, system: MeasureSystem) -> None:
        self.system = system
        self.field = system.field
        self.r = system.r
        self._lock = threading.Lock()
        self._normal: dict[Index, Normality] = {}
        self._type2: dict[Index, tuple[Poly, Poly]] = {}
        self._type1: dict[Index, tuple[PolyVector, PolyVector]] = {}

    @classmethod
    def of(cls, system: "MeasureSystem | Mopuc") -> "Mopuc":
        if isinstance(system, Mopuc):
            return system
        cached = getattr(system, "_mopuc", None)
        if cached is None:
            cached = cls(system)
            system._mopuc = cached
        return cached

    def _store(self, cache: dict, key, value):
        with self._lock:
            return cache.setdefault(key, value)

    def _check(self, n: Sequence[int]) -> Index:
        n = tuple(int(x) for x in n)
        if len(n) != self.r:
            raise ValueError(f"multi-index {n} has length {len(n)}, expected r={self.r}")
        if not in_lattice(n):
            raise ValueError(f"multi-index {n} has negative entries")
        return n

    # -- inner products ----------------------------------------------------

    def inner(self, j: int, f: Poly, g: Poly) -> Scalar:
        """<f, g>_j = sum_{a,b} f_a conj(g_b) nu_j^{a-b}."""
        nu = self.system.moment
        total = self.field.zero
        for b, gb in enumerate(g.coeffs):
            if gb == 0:
                continue
            s = 0
            for a, fa in enumerate(f.coeffs):
                if fa == 0:
                    continue
                s = s + fa * nu(j, a - b)
            total = total + s * gb.conjugate()
        return total

    def inner_monomial(self, j: int, f: Poly, p: int) -> Scalar:
        """<f, z^p>_j."""
        nu = self.system.moment
        total = self.field.zero
        for a, fa in enumerate(f.coeffs):
            if fa == 0:
                continue
            total = total + fa * nu(j, a - p)
        return total

    # -- moment matrix and normality --------------------------------------

    def assemble_M(self, n: Sequence[int]) -> MomentMatrix:
        n = self._check(n)
        size = sum(n)
        if size == 0:
            raise ZeroIndex("the moment matrix is undefined for n = 0")
        nu = self.system.moment
        rows, labels = [], []
        for j, nj in enumerate(n):
            for q in range(nj):
                rows.append(tuple(nu(j, c - q) for c in range(size)))
                labels.append((j, q))
        return MomentMatrix(n, tuple(rows), tuple(labels))

    def normality(self, n: Sequence[int]) -> Normality:
        n = self._check(n)
        hit = self._normal.get(n)
        if hit is not None:
            return hit
        if sum(n) == 0:
            res = Normality(True, "normal", self.field.one, 1.0, 1.0, 1.0)
        else:
            res = linalg.normality(self.field, self.assemble_M(n).rows)
        return self._store(self._normal, n, res)

    def is_normal(self, n: Sequence[int]) -> bool:
        return self.normality(n).normal

    def require_normal(self, *indices: Sequence[int]) -> None:
        for n in indices:
            if not self.is_normal(n):
                raise NotNormal(n, self.normality(n).status)

    # -- type II and II* --------------------------------------------------

    def _type2_pair(self, n: Sequence[int]) -> tuple[Poly, Poly]:
        n = self._check(n)
        hit = self._type2.get(n)
        if hit is not None:
            return hit
        one = self.field.one
        size = sum(n)
        if size == 0:
            return self._store(self._type2, n, (Poly([one]), Poly([one])))
        self.require_normal(n)
        M = self.assemble_M(n)
        nu = self.system.moment
        rhs = [(-nu(j, size - q), -nu(j, -q - 1)) for j, q in M.row_labels]
        try:
            X = linalg.solve(self.field, M.rows, rhs)
        except linalg.SingularMatrixError as exc:
            raise NotNormal(n, "singular solve") from exc
        phi = Poly([row[0] for row in X] + [one])
        phistar = Poly([one] + [row[1] for row in X])
        return self._store(self._type2, n, (phi, phistar))

    def type2(self, n: Sequence[int]) -> Poly:
        """Monic Phi_n of degree |n|."""
        return self._type2_pair(n)[0]

    def type2star(self, n: Sequence[int]) -> Poly:
        """Phi*_n with Phi*_n(0) = 1."""
        return self._type2_pair(n)[1]

    def phi(self, n: Sequence[int]) -> Poly:
        """type2, but the zero polynomial outside Z_+^r."""
        return self.type2(n) if in_lattice(n) else Poly()

    # -- type I and I* ----------------------------------------------------

    def _type1_pair(self, n: Sequence[int]) -> tuple[PolyVector, PolyVector]:
        n = self._check(n)
        hit = self._type1.get(n)
        if hit is not None:
            return hit
        size = sum(n)
        if size == 0:
            zero = PolyVector.zero(self.r)
            return self._store(self._type1, n, (zero, zero))
        self.require_normal(n)
        M = self.assemble_M(n)
        # sum_j <Lambda_j, z^p>_j = sum_{(j,q)} lambda_{j,q} nu_j^{q-p}: the conjugate transpose of M
        A = [[M.rows[i][p].conjugate() for i in range(size)] for p in range(size)]
        zero, one = self.field.zero, self.field.one
        rhs = [(one if p == size - 1 else zero, one if p == 0 else zero) for p in range(size)]
        try:
            X = linalg.solve(self.field, A, rhs)
        except linalg.SingularMatrixError as exc:
            raise NotNormal(n, "singular solve") from exc
        lam_slots: list[list[Scalar]] = [[] for _ in range(self.r)]
        star_slots: list[list[Scalar]] = [[] for _ in range(self.r)]
        for (j, _q), row in zip(M.row_labels, X):
            lam_slots[j].append(row[0])
            star_slots[j].append(row[1])
        caps = [nj - 1 for nj in n]
        lam = PolyVector([Poly(c) for c in lam_slots], caps)
        lam_star = PolyVector([Poly(c) for c in star_slots], caps)
        return self._store(self._type1, n, (lam, lam_star))

    def type1(self, n: Sequence[int]) -> PolyVector:
        """Lambda_n normalized by sum_j <Lambda_{n,j}, z^{|n|-1}>_j = 1; zero vector at n = 0."""
        return self._type1_pair(n)[0]

    def type1star(self, n: Sequence[int]) -> PolyVector:
        """Lambda*_n normalized by sum_j <Lambda*_{n,j}, 1>_j = 1; zero vector at n = 0."""
        return self._type1_pair(n)[1]


# Function-style surface over a MeasureSystem (or an existing Mopuc).


def inner(system, j: int, f: Poly, g: Poly) -> Scalar:
    return Mopuc.of(system).inner(j, f, g)


def assemble_M(system, n: Sequence[int]) -> MomentMatrix:
    return Mopuc.of(system).assemble_M(n)


def is_normal(system, n: Sequence[int]) -> tuple[bool, Normality]:
    diag = Mopuc.of(system).normality(n)
    return diag.normal, diag


def type2(system, n: Sequence[int]) -> Poly:
    return Mopuc.of(system).type2(n)


def type2star(system, n: Sequence[int]) -> Poly:
    return Mopuc.of(system).type2star(n)


def type1(system, n: Sequence[int]) -> PolyVector:
    return Mopuc.of(system).type1(n)


def type1star(system, n: Sequence[int]) -> PolyVector:
    return Mopuc.of(system).type1star(n)
