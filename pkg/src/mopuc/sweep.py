"""Run every identity check over a set of multi-indices and summarize."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import Index, Mopuc, box_indices, graded_indices, support
from .recurrence import (
    OK,
    IdentityReport,
    verify_A_matrix,
    verify_biorthogonality,
    verify_compat_coeffs,
    verify_compat_polys,
    verify_gamma,
    verify_third,
    verify_type1,
    verify_type2,
    verify_type2star,
)


def reports_at(system, n: Sequence[int]) -> list[IdentityReport]:
    """All identity reports anchored at n, for every k and every ordered pair k != l."""
    m = Mopuc.of(system)
    n = tuple(n)
    out = list(verify_type2(m, n))
    for k in support(n):
        out += verify_type2star(m, n, k)
    out += verify_third(m, n)
    out += verify_A_matrix(m, n)
    out += verify_type1(m, n)
    for k in range(m.r):
        out += verify_biorthogonality(m, n, k)
    for k in range(m.r):
        for l in range(m.r):
            if k != l:
                out += verify_compat_polys(m, n, k, l)
                out += verify_compat_coeffs(m, n, k, l)
                out += verify_gamma(m, n, k, l)
    return out


@dataclass(frozen=True)
class SweepSummary:
    reports: tuple

    @property
    def failures(self) -> list[IdentityReport]:
        return [rep for rep in self.reports if rep.failed]

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def status_counts(self) -> dict:
        return dict(sorted(Counter(rep.status for rep in self.reports).items()))

    @property
    def checked(self) -> int:
        return sum(1 for rep in self.reports if rep.status == OK)

    @property
    def max_residual(self) -> float:
        return max((rep.residual for rep in self.reports if rep.status == OK), default=0.0)

    def identities(self) -> set:
        return {rep.identity for rep in self.reports if rep.status == OK}

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "failures": len(self.failures),
            "max_residual": self.max_residual,
            "status_counts": self.status_counts,
            "reports": [rep.to_json() for rep in self.reports],
        }


def sweep(system, indices: Iterable[Sequence[int]]) -> SweepSummary:
    m = Mopuc.of(system)
    reports: list[IdentityReport] = []
    for n in indices:
        reports += reports_at(m, n)
    return SweepSummary(tuple(reports))


def graded_sweep(system, max_total: int) -> SweepSummary:
    """Every n with |n| <= max_total."""
    m = Mopuc.of(system)
    return sweep(m, graded_indices(m.r, max_total))


def box_sweep(system, max_index: Sequence[int]) -> SweepSummary:
    """Every n with 0 <= n <= max_index componentwise."""
    return sweep(system, box_indices(max_index))


def normality_grid(system, indices: Optional[Iterable[Index]] = None, max_index: Optional[Sequence[int]] = None):
    """(index, Normality) pairs in graded-lex order."""
    m = Mopuc.of(system)
    if indices is None:
        if max_index is None:
            raise ValueError("give indices or max_index")
        indices = box_indices(max_index)
    return [(tuple(n), m.normality(n)) for n in indices]
