"""Parametric spectral densities J(w) and their linear algebra.

All densities are immutable.  Every variant reduces to a weighted sum of
unit shapes (see :func:`canonical_terms`), which is what the correlation and
bound code consumes; a variation dJ = J - J0 is just another density.

Conventions (hbar = k_B = 1, frequencies in units of the spin splitting):

* power law:   J(w) = prefactor * pi * w**s * exp(-w / cutoff), s = 1 (ohmic),
  integer s >= 2 (superohmic) or s = 1/2 (subohmic)
* Lorentzian:  J_L(w; W, G) = (pi/2) w / (((w+W)**2 + G**2) ((w-W)**2 + G**2))
* delta mode:  J(w) = kappa * delta(w - w0), never pointwise evaluable
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Union

import numpy as np

from .errors import DeltaNotEvaluable, DomainError

ArrayLike = Union[float, np.ndarray]

# Canonical shape keys:
#   ("power", s, cutoff)   unit shape pi * w**s * exp(-w/cutoff)
#   ("lorentz", W, G)      unit shape J_L(w; W, G)
#   ("delta", w0)          unit shape delta(w - w0)
ShapeKey = tuple


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0.0 and math.isfinite(value)):
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")
    return value


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


class SpectralDensity:
    """Common interface of all density variants."""

    def canonical_terms(self) -> dict[ShapeKey, float]:
        raise NotImplementedError

    def __call__(self, omega: ArrayLike) -> ArrayLike:
        return eval_density(self, omega)

    # algebra -----------------------------------------------------------
    def __add__(self, other: "SpectralDensity") -> "Combination":
        if not isinstance(other, SpectralDensity):
            return NotImplemented
        return Combination(((1.0, self), (1.0, other)))

    def __sub__(self, other: "SpectralDensity") -> "Combination":
        if not isinstance(other, SpectralDensity):
            return NotImplemented
        return difference(self, other)

    def __mul__(self, a: float) -> "Combination":
        if isinstance(a, SpectralDensity):
            return NotImplemented
        return Combination(((float(a), self),))

    __rmul__ = __mul__

    def __neg__(self) -> "Combination":
        return self * -1.0

    # inspection --------------------------------------------------------
    @property
    def has_delta(self) -> bool:
        return any(k[0] == "delta" and w != 0.0 for k, w in self.canonical_terms().items())

    @property
    def is_zero(self) -> bool:
        return all(w == 0.0 for w in self.canonical_terms().values())

    def frequency_scale(self) -> float:
        """Frequency beyond which every component envelope is decreasing."""
        scale = 0.0
        for key, w in self.canonical_terms().items():
            if w == 0.0:
                continue
            if key[0] == "power":
                scale = max(scale, max(key[1], 1.0) * key[2])
            elif key[0] == "lorentz":
                scale = max(scale, key[1] + key[2])
            else:
                scale = max(scale, key[1])
        return scale if scale > 0 else 1.0


@dataclass(frozen=True)
class Ohmic(SpectralDensity):
    prefactor: float
    cutoff: float

    def __post_init__(self):
        object.__setattr__(self, "prefactor", _positive("prefactor", self.prefactor))
        object.__setattr__(self, "cutoff", _positive("cutoff", self.cutoff))

    def canonical_terms(self):
        return {("power", 1.0, self.cutoff): self.prefactor}


@dataclass(frozen=True)
class Superohmic(SpectralDensity):
    exponent: int
    prefactor: float
    cutoff: float

    def __post_init__(self):
        if int(self.exponent) != self.exponent or self.exponent < 2:
            raise DomainError(f"superohmic exponent must be an integer >= 2, got {self.exponent!r}")
        object.__setattr__(self, "exponent", int(self.exponent))
        object.__setattr__(self, "prefactor", _positive("prefactor", self.prefactor))
        object.__setattr__(self, "cutoff", _positive("cutoff", self.cutoff))

    def canonical_terms(self):
        return {("power", float(self.exponent), self.cutoff): self.prefactor}


@dataclass(frozen=True)
class Subohmic(SpectralDensity):
    prefactor: float
    cutoff: float

    def __post_init__(self):
        object.__setattr__(self, "prefactor", _positive("prefactor", self.prefactor))
        object.__setattr__(self, "cutoff", _positive("cutoff", self.cutoff))

    def canonical_terms(self):
        return {("power", 0.5, self.cutoff): self.prefactor}


@dataclass(frozen=True)
class LorentzianTerm:
    p: float
    omega: float
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "p", _finite("p", self.p))
        object.__setattr__(self, "omega", _positive("Lorentzian center", self.omega))
        object.__setattr__(self, "gamma", _positive("Lorentzian width", self.gamma))


@dataclass(frozen=True)
class LorentzianSum(SpectralDensity):
    terms: tuple[LorentzianTerm, ...]

    def __post_init__(self):
        terms = tuple(t if isinstance(t, LorentzianTerm) else LorentzianTerm(*t) for t in self.terms)
        object.__setattr__(self, "terms", terms)

    def canonical_terms(self):
        out: dict[ShapeKey, float] = {}
        for t in self.terms:
            key = ("lorentz", t.omega, t.gamma)
            out[key] = out.get(key, 0.0) + t.p
        return out

    def __iter__(self) -> Iterator[LorentzianTerm]:
        return iter(self.terms)


@dataclass(frozen=True)
class DeltaMode(SpectralDensity):
    kappa: float
    omega0: float

    def __post_init__(self):
        object.__setattr__(self, "kappa", _finite("kappa", self.kappa))
        object.__setattr__(self, "omega0", _positive("omega0", self.omega0))

    def canonical_terms(self):
        return {("delta", self.omega0): self.kappa}


@dataclass(frozen=True)
class Combination(SpectralDensity):
    parts: tuple[tuple[float, SpectralDensity], ...] = field(default_factory=tuple)

    def __post_init__(self):
        parts = []
        for coeff, dens in self.parts:
            if not isinstance(dens, SpectralDensity):
                raise DomainError(f"combination part is not a spectral density: {dens!r}")
            parts.append((_finite("coefficient", coeff), dens))
        object.__setattr__(self, "parts", tuple(parts))

    def canonical_terms(self):
        out: dict[ShapeKey, float] = {}
        for coeff, dens in self.parts:
            for key, w in dens.canonical_terms().items():
                out[key] = out.get(key, 0.0) + coeff * w
        return out

    def flattened(self) -> "Combination":
        """Single-level combination of primitive variants with the same values."""
        return Combination(tuple((w, _unit_density(k)) for k, w in self.canonical_terms().items()))


def _unit_density(key: ShapeKey) -> SpectralDensity:
    kind = key[0]
    if kind == "power":
        s, cutoff = key[1], key[2]
        if s == 1.0:
            return Ohmic(1.0, cutoff)
        if s == 0.5:
            return Subohmic(1.0, cutoff)
        return Superohmic(int(s), 1.0, cutoff)
    if kind == "lorentz":
        return LorentzianSum((LorentzianTerm(1.0, key[1], key[2]),))
    return DeltaMode(1.0, key[1])


ZERO = Combination(())


def canonical_terms(J: SpectralDensity) -> dict[ShapeKey, float]:
    """Nonzero unit-shape weights of ``J`` (zero weights dropped)."""
    return {k: w for k, w in J.canonical_terms().items() if w != 0.0}


def unit_shape(key: ShapeKey, omega: np.ndarray) -> np.ndarray:
    """Pointwise value of a unit shape; ``omega`` must be a nonnegative array."""
    kind = key[0]
    if kind == "power":
        s, cutoff = key[1], key[2]
        if s == 1.0:
            base = omega
        elif s == 0.5:
            base = np.sqrt(omega)
        else:
            base = omega ** s
        return math.pi * base * np.exp(-omega / cutoff)
    if kind == "lorentz":
        W, G = key[1], key[2]
        return 0.5 * math.pi * omega / (((omega + W) ** 2 + G * G) * ((omega - W) ** 2 + G * G))
    raise DeltaNotEvaluable(f"delta mode at omega0={key[1]} has no pointwise value")


def eval_density(J: SpectralDensity, omega: ArrayLike) -> ArrayLike:
    """J(omega) for omega >= 0 (scalar or array)."""
    scalar = np.ndim(omega) == 0
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0) or np.any(np.isnan(w)):
        raise DomainError("spectral densities are only defined for omega >= 0")
    terms = canonical_terms(J)
    if any(k[0] == "delta" for k in terms):
        raise DeltaNotEvaluable("density contains a delta mode with nonzero weight")
    out = np.zeros_like(w)
    for key, weight in terms.items():
        out = out + weight * unit_shape(key, w)
    return float(out) if scalar else out


def difference(J: SpectralDensity, J0: SpectralDensity) -> Combination:
    """The variation dJ = J - J0 as a density."""
    return Combination(((1.0, J), (-1.0, J0)))


def abs_density(J: SpectralDensity, omega: np.ndarray) -> np.ndarray:
    """|J(omega)| for delta-free densities."""
    return np.abs(eval_density(J, omega))


MEIER_TANNOR_CUTOFF = 15.0 / 4.0


def meier_tannor_ohmic() -> Ohmic:
    """The ohmic density (pi/2) w exp(-w/W) with W = 15/4 used in the HEOM example."""
    return Ohmic(0.5, MEIER_TANNOR_CUTOFF)
