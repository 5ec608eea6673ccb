"""Probability measures on the unit circle, given through their trigonometric moments."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field as dc_field
from decimal import Decimal
from typing import Any, Mapping, Sequence, Union

import numpy as np

from .scalars import DEFAULT_POLICY, ExactField, Field, GaussRat, Scalar, scalar_from_json

NONNEGATIVITY_GRID = 1024


class ConfigError(ValueError):
    """Invalid measure-system document; ``measure`` is the 1-based offending index."""

    def __init__(self, message: str, measure: int | None = None) -> None:
        self.measure = measure
        prefix = f"measure {measure}: " if measure is not None else ""
        super().__init__(prefix + message)


class IndefiniteDensityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TrigDensity:
    """Density sum_k c_k e^{ik theta} against d theta / 2 pi; ``coeffs`` holds every k, both signs."""

    coeffs: Mapping[int, Scalar]

    def moment(self, p: int) -> Scalar:
        return self.coeffs.get(-p, 0)

    def density(self, theta: np.ndarray) -> np.ndarray:
        out = np.zeros_like(theta, dtype=complex)
        for k, c in self.coeffs.items():
            out += complex(c) * np.exp(1j * k * theta)
        return out.real

    def convert(self, f: Field) -> "TrigDensity":
        return TrigDensity({k: f.convert(c) for k, c in self.coeffs.items()})

    def to_json(self) -> dict:
        from .scalars import scalar_to_json

        return {
            "type": "trig-density",
            "coeffs": [{"k": k, "c": scalar_to_json(c)} for k, c in sorted(self.coeffs.items()) if k >= 0],
        }


@dataclass(frozen=True)
class BernsteinSzego1:
    """Normalized density (1 - |a|^2) / |1 - a e^{i theta}|^2, |a| < 1."""

    a: Scalar

    def moment(self, p: int) -> Scalar:
        if p >= 0:
            return self.a.conjugate() ** p
        return self.a ** (-p)

    def density(self, theta: np.ndarray) -> np.ndarray:
        a = complex(self.a)
        return (1 - abs(a) ** 2) / np.abs(1 - a * np.exp(1j * theta)) ** 2

    def convert(self, f: Field) -> "BernsteinSzego1":
        return BernsteinSzego1(f.convert(self.a))

    def to_json(self) -> dict:
        from .scalars import scalar_to_json

        return {"type": "bernstein-szego", "a": scalar_to_json(self.a)}


@dataclass(frozen=True)
class LebesgueAtoms:
    """w0 * (normalized Lebesgue) + sum_m w_m delta_{z_m}."""

    w0: Scalar
    atoms: tuple[tuple[Scalar, Scalar], ...] = ()

    def moment(self, p: int) -> Scalar:
        total = self.w0 if p == 0 else 0
        for z, w in self.atoms:
            zp = z ** p if p >= 0 else z.conjugate() ** (-p)
            total = total + w * zp
        return total

    def density(self, theta: np.ndarray) -> np.ndarray:
        # only the absolutely continuous part has a density
        return np.full_like(theta, float(complex(self.w0).real), dtype=float)

    def convert(self, f: Field) -> "LebesgueAtoms":
        return LebesgueAtoms(f.convert(self.w0), tuple((f.convert(z), f.convert(w)) for z, w in self.atoms))

    def to_json(self) -> dict:
        from .scalars import scalar_to_json

        return {
            "type": "lebesgue-atoms",
            "w0": scalar_to_json(self.w0),
            "atoms": [{"z": scalar_to_json(z), "w": scalar_to_json(w)} for z, w in self.atoms],
        }


MeasureSpec = Union[TrigDensity, BernsteinSzego1, LebesgueAtoms]


def _is_zero(f: Field, x: Scalar) -> bool:
    return f.is_zero(x)


def validate_spec(spec: MeasureSpec, f: Field, index: int | None = None) -> None:
    """Raise ConfigError on invariant violations; warn on an indefinite trig density."""
    if isinstance(spec, BernsteinSzego1):
        a = spec.a
        bad = a.abs2() >= 1 if isinstance(a, GaussRat) else abs(a) >= 1
        if bad:
            raise ConfigError("Bernstein-Szego parameter must satisfy |a| < 1", index)
    elif isinstance(spec, TrigDensity):
        c = spec.coeffs
        if 0 not in c or not _is_zero(f, c[0] - 1):
            raise ConfigError("trig density must have c_0 = 1 (probability normalization)", index)
        for k, ck in c.items():
            other = c.get(-k)
            if other is None or not _is_zero(f, other - ck.conjugate()):
                raise ConfigError(f"non-Hermitian coefficients at k={k}", index)
        theta = 2 * np.pi * np.arange(NONNEGATIVITY_GRID) / NONNEGATIVITY_GRID
        if np.min(spec.density(theta)) < 0:
            warnings.warn(
                f"measure {index}: trig density is negative somewhere on the sampling grid",
                IndefiniteDensityWarning,
                stacklevel=3,
            )
    elif isinstance(spec, LebesgueAtoms):
        weights = [spec.w0] + [w for _, w in spec.atoms]
        total = 0
        for w in weights:
            if isinstance(w, GaussRat):
                if w.im or w.re < 0:
                    raise ConfigError("weights must be real and nonnegative", index)
            elif abs(w.imag) > f.policy.zero_eps or w.real < -f.policy.zero_eps:
                raise ConfigError("weights must be real and nonnegative", index)
            total = total + w
        if not _is_zero(f, total - 1):
            raise ConfigError("weights must sum to 1", index)
        for z, _ in spec.atoms:
            if not _is_zero(f, z * z.conjugate() - 1):
                raise ConfigError(f"atom {z} is not on the unit circle", index)
    else:
        raise ConfigError(f"unknown measure spec {spec!r}", index)


class MeasureSystem:
    """Ordered, immutable system of r >= 1 measures with memoized moments."""

    def __init__(self, specs: Sequence[MeasureSpec], field: Field | None = None, validate: bool = True) -> None:
        if not specs:
            raise ConfigError("empty system")
        self.field = field if field is not None else ExactField()
        self.specs = tuple(s.convert(self.field) for s in specs)
        if validate:
            for i, s in enumerate(self.specs, start=1):
                validate_spec(s, self.field, i)
        self._memo: dict[tuple[int, int], Scalar] = {}

    @property
    def r(self) -> int:
        return len(self.specs)

    def moment(self, j: int, p: int) -> Scalar:
        """nu_j^p = integral of z^p d mu_j, with 0-based measure index j."""
        key = (j, p)
        try:
            return self._memo[key]
        except KeyError:
            pass
        if not 0 <= j < self.r:
            raise IndexError(f"measure index {j} out of range for r={self.r}")
        value = self.field.convert(self.specs[j].moment(p))
        return self._memo.setdefault(key, value)

    def with_field(self, field: Field) -> "MeasureSystem":
        return MeasureSystem(self.specs, field, validate=False)

    def to_json(self) -> dict:
        return {"measures": [s.to_json() for s in self.specs]}

    def __repr__(self) -> str:
        return f"MeasureSystem({list(self.specs)!r}, field={self.field!r})"


def moment(system: MeasureSystem, j: int, p: int) -> Scalar:
    return system.moment(j, p)


def trig_density(coeffs: Mapping[int, Any]) -> TrigDensity:
    """Build from the k >= 0 half (negative k filled by conjugate symmetry if absent)."""
    f = ExactField()
    full = {int(k): f.convert(c) if not isinstance(c, complex) else c for k, c in coeffs.items()}
    for k, c in list(full.items()):
        full.setdefault(-k, c.conjugate())
    full.setdefault(0, f.one)
    return TrigDensity(full)


def bernstein_szego(a: Any) -> BernsteinSzego1:
    return BernsteinSzego1(a if isinstance(a, complex) else ExactField().convert(a))


def lebesgue_atoms(w0: Any = 1, atoms: Sequence[tuple[Any, Any]] = ()) -> LebesgueAtoms:
    f = ExactField()
    return LebesgueAtoms(f.convert(w0), tuple((f.convert(z), f.convert(w)) for z, w in atoms))


def _parse_spec(obj: Any, f: Field, index: int) -> MeasureSpec:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigError("each measure must be an object with a 'type'", index)
    kind = obj["type"]
    try:
        if kind == "bernstein-szego":
            if "a" not in obj:
                raise ConfigError("missing 'a'", index)
            return BernsteinSzego1(scalar_from_json(obj["a"], f))
        if kind == "trig-density":
            coeffs: dict[int, Scalar] = {}
            for entry in obj.get("coeffs", []):
                k = entry["k"]
                if not isinstance(k, int) or isinstance(k, bool):
                    raise ConfigError(f"coefficient index must be an integer, got {k!r}", index)
                if k in coeffs:
                    raise ConfigError(f"duplicate coefficient k={k}", index)
                coeffs[k] = scalar_from_json(entry["c"], f)
            for k, c in list(coeffs.items()):
                if -k not in coeffs:
                    coeffs[-k] = c.conjugate()
            coeffs.setdefault(0, f.one)
            return TrigDensity(coeffs)
        if kind == "lebesgue-atoms":
            w0 = scalar_from_json(obj.get("w0", 0), f)
            atoms = tuple(
                (scalar_from_json(a["z"], f), scalar_from_json(a["w"], f)) for a in obj.get("atoms", [])
            )
            return LebesgueAtoms(w0, atoms)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed {kind} entry: {exc}", index) from exc
    raise ConfigError(f"unknown measure type {kind!r}", index)


def parse_system(text: str, field: Field | None = None) -> MeasureSystem:
    """Parse the measure-system JSON document into a validated MeasureSystem."""
    f = field if field is not None else ExactField()
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("measures"), list):
        raise ConfigError("document must be an object with a 'measures' list")
    if not doc["measures"]:
        raise ConfigError("empty system")
    specs = [_parse_spec(m, f, i) for i, m in enumerate(doc["measures"], start=1)]
    return MeasureSystem(specs, f)
