"""Scalar fields: exact Gaussian rationals and tolerance-aware complex floats."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Any, Union


class GaussRat:
    """Complex number with arbitrary-precision rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0) -> None:
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @classmethod
    def _lift(cls, x: Any) -> "GaussRat | None":
        if type(x) is GaussRat:
            return x
        if isinstance(x, (int, Rational)):
            return GaussRat(x)
        return None

    def __add__(self, other):
        o = GaussRat._lift(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussRat._lift(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = GaussRat._lift(other)
        if o is None:
            return NotImplemented
        return GaussRat(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = GaussRat._lift(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussRat(a * c)
        return GaussRat(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussRat":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("GaussRat division by zero")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = GaussRat._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = GaussRat._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, p: int) -> "GaussRat":
        if not isinstance(p, int):
            return NotImplemented
        base = self if p >= 0 else self.inverse()
        p = abs(p)
        out = GaussRat(1)
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    def __neg__(self) -> "GaussRat":
        return GaussRat(-self.re, -self.im)

    def __pos__(self) -> "GaussRat":
        return self

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return abs(complex(self))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        o = GaussRat._lift(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussRat({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self) -> str:
        return format_scalar_text(self)


Scalar = Union[GaussRat, complex]


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar_text(x: Scalar) -> str:
    """Lossless single-string form, e.g. ``1/2-1/3i``; used for CSV cells."""
    if isinstance(x, GaussRat):
        re_s, im_s = format_rational(x.re), format_rational(x.im)
    else:
        x = complex(x)
        re_s, im_s = repr(x.real), repr(x.imag)
    if not im_s.startswith("-"):
        im_s = "+" + im_s
    return f"{re_s}{im_s}i"


def _to_fraction(s: Any) -> Fraction:
    if isinstance(s, bool):
        raise ValueError(f"not a number: {s!r}")
    if isinstance(s, float):
        return Fraction(repr(s))
    if isinstance(s, (int, Rational)):
        return Fraction(s)
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {s!r}") from exc


def _split_sign(body: str) -> int:
    """Index of the sign separating real and imaginary parts, or -1."""
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            return pos
    return -1


def parse_scalar_text(text: str) -> GaussRat:
    """Parse ``a``, ``bi``, ``a+bi`` with rational/decimal parts into a GaussRat."""
    body = text.replace(" ", "")
    if not body:
        raise ValueError("empty scalar literal")
    if body[-1] not in "ij":
        return GaussRat(_to_fraction(body))
    body = body[:-1]
    pos = _split_sign(body)
    re_s, im_s = (body[:pos], body[pos:]) if pos > 0 else ("0", body)
    if im_s in ("", "+"):
        im_s = "1"
    elif im_s == "-":
        im_s = "-1"
    return GaussRat(_to_fraction(re_s), _to_fraction(im_s))


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds used by the float backend only."""

    zero_eps: float = 1e-12
    residual_tol: float = 1e-9
    rcond_min: float = 1e-10

    def __post_init__(self):
        for name in ("zero_eps", "residual_tol", "rcond_min"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_POLICY = TolerancePolicy()


def scalar_is_zero(x: Scalar, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    if isinstance(x, GaussRat):
        return not x
    return abs(x) <= policy.zero_eps


def conj(x):
    return x.conjugate()


class ExactField:
    """Gaussian rationals; every test is exact."""

    name = "exact"
    exact = True
    zero = GaussRat(0)
    one = GaussRat(1)

    def convert(self, x: Any) -> GaussRat:
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, complex):
            return GaussRat(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, str):
            return parse_scalar_text(x)
        return GaussRat(_to_fraction(x))

    def is_zero(self, x: Scalar) -> bool:
        return not x

    def residual_ok(self, x: Scalar) -> bool:
        return not x

    def __repr__(self) -> str:
        return "ExactField()"

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactField)

    def __hash__(self) -> int:
        return hash("exact")


class FloatField:
    """Complex doubles with absolute zero tests from a TolerancePolicy."""

    name = "float"
    exact = False
    zero = 0j
    one = 1 + 0j

    def __init__(self, policy: TolerancePolicy = DEFAULT_POLICY) -> None:
        self.policy = policy

    def convert(self, x: Any) -> complex:
        if isinstance(x, str):
            return complex(parse_scalar_text(x))
        return complex(x)

    def is_zero(self, x: Scalar) -> bool:
        return abs(x) <= self.policy.zero_eps

    def residual_ok(self, x: Scalar) -> bool:
        return abs(x) <= self.policy.residual_tol

    def __repr__(self) -> str:
        return f"FloatField({self.policy!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FloatField) and other.policy == self.policy

    def __hash__(self) -> int:
        return hash(("float", self.policy))


Field = Union[ExactField, FloatField]


def make_field(backend: str, policy: TolerancePolicy = DEFAULT_POLICY) -> Field:
    if backend == "exact":
        return ExactField()
    if backend == "float":
        return FloatField(policy)
    raise ValueError(f"unknown backend {backend!r} (expected 'exact' or 'float')")


def scalar_to_json(x: Scalar) -> dict:
    if isinstance(x, GaussRat):
        return {"re": format_rational(x.re), "im": format_rational(x.im)}
    x = complex(x)
    return {"re": x.real, "im": x.imag}


def scalar_from_json(obj: Any, field: Field) -> Scalar:
    """Accept ``{"re":..,"im":..}`` (strings or numbers) or a bare real literal."""
    if isinstance(obj, dict):
        unknown = set(obj) - {"re", "im"}
        if unknown:
            raise ValueError(f"unexpected scalar keys {sorted(unknown)}")
        value = GaussRat(_to_fraction(obj.get("re", 0)), _to_fraction(obj.get("im", 0)))
    elif isinstance(obj, str):
        value = parse_scalar_text(obj)
    else:
        value = GaussRat(_to_fraction(obj))
    return field.convert(value)
