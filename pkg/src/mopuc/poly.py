"""Dense univariate polynomials over either scalar backend."""
from __future__ import annotations

from itertools import zip_longest
from typing import Callable, Iterable, Optional, Sequence

from .scalars import Scalar, scalar_from_json, scalar_to_json

NEG_INF = float("-inf")


def _exact_nonzero(c) -> bool:
    return c != 0


class Poly:
    """sum_i coeffs[i] z^i. Coefficients are GaussRat or complex; ints mix with both."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()) -> None:
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> "Poly":
        return cls((0,) * k + (c,))

    def degree(self, is_zero: Optional[Callable[[Scalar], bool]] = None) -> float:
        """Largest i with a nonzero coefficient; -inf for the zero polynomial."""
        zero = is_zero or (lambda c: not _exact_nonzero(c))
        for i in range(len(self.coeffs) - 1, -1, -1):
            if not zero(self.coeffs[i]):
                return i
        return NEG_INF

    def coeff(self, i: int) -> Scalar:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x: Scalar) -> Scalar:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        return Poly(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    def __sub__(self, other: "Poly") -> "Poly":
        return Poly(a - b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return Poly()
            out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return Poly(out)
        return Poly(c * other for c in self.coeffs)

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "Poly":
        """Multiply by z^k."""
        if not self.coeffs:
            return self
        return Poly((0,) * k + self.coeffs)

    def conj_coeffs(self) -> "Poly":
        return Poly(c.conjugate() if hasattr(c, "conjugate") else c for c in self.coeffs)

    def reversed(self, m: int) -> "Poly":
        """z^m * conj(P(1/conj z)) for deg P <= m."""
        padded = list(self.coeffs[: m + 1]) + [0] * max(0, m + 1 - len(self.coeffs))
        if any(_exact_nonzero(c) for c in self.coeffs[m + 1 :]):
            raise ValueError(f"degree exceeds {m}")
        return Poly(c.conjugate() if hasattr(c, "conjugate") else c for c in reversed(padded))

    def max_abs(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def is_zero(self, is_zero: Optional[Callable[[Scalar], bool]] = None) -> bool:
        return self.degree(is_zero) == NEG_INF

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return all(a == b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    def __hash__(self):
        n = int(self.degree()) + 1 if self.degree() != NEG_INF else 0
        return hash(self.coeffs[:n])

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"

    def to_json(self) -> dict:
        return {"coeffs": [scalar_to_json(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict, field) -> "Poly":
        return cls(scalar_from_json(c, field) for c in obj["coeffs"])


class PolyVector:
    """r-tuple of polynomials; ``caps[j]`` is the declared degree bound of slot j."""

    __slots__ = ("slots", "caps")

    def __init__(self, slots: Sequence[Poly], caps: Optional[Sequence[int]] = None) -> None:
        object.__setattr__(self, "slots", tuple(slots))
        object.__setattr__(self, "caps", tuple(caps) if caps is not None else None)

    def __setattr__(self, name, value):
        raise AttributeError("PolyVector is immutable")

    @classmethod
    def zero(cls, r: int) -> "PolyVector":
        return cls([Poly()] * r, [-1] * r)

    def __len__(self) -> int:
        return len(self.slots)

    def __getitem__(self, j: int) -> Poly:
        return self.slots[j]

    def __iter__(self):
        return iter(self.slots)

    def __add__(self, other: "PolyVector") -> "PolyVector":
        return PolyVector([a + b for a, b in zip(self.slots, other.slots)])

    def __sub__(self, other: "PolyVector") -> "PolyVector":
        return PolyVector([a - b for a, b in zip(self.slots, other.slots)])

    def __neg__(self) -> "PolyVector":
        return PolyVector([-a for a in self.slots])

    def __mul__(self, c: Scalar) -> "PolyVector":
        return PolyVector([a * c for a in self.slots])

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "PolyVector":
        return PolyVector([a.shift(k) for a in self.slots])

    def max_abs(self) -> float:
        return max((p.max_abs() for p in self.slots), default=0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyVector):
            return NotImplemented
        return len(self) == len(other) and all(a == b for a, b in zip(self.slots, other.slots))

    def __hash__(self):
        return hash(self.slots)

    def __repr__(self) -> str:
        return f"PolyVector({list(self.slots)!r})"

    def to_json(self) -> dict:
        return {"slots": [p.to_json() for p in self.slots]}

    @classmethod
    def from_json(cls, obj: dict, field) -> "PolyVector":
        return cls([Poly.from_json(p, field) for p in obj["slots"]])
