"""JSON run configurations and the density schema.

Density objects use the keys ``kind``, ``prefactor``, ``cutoff``,
``exponent``, ``terms`` (list of ``{p, omega, gamma}``), ``kappa``,
``omega0`` and ``parts`` (list of ``{coeff, density}``).  ``kind`` is one of
ohmic, superohmic, subohmic, lorentzian, delta, combination.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

from .densities import (
    Combination,
    DeltaMode,
    LorentzianSum,
    LorentzianTerm,
    Ohmic,
    SpectralDensity,
    Subohmic,
    Superohmic,
)
from .errors import ConfigError, SpecboundError

KINDS = ("ohmic", "superohmic", "subohmic", "lorentzian", "delta", "combination")


def _need(d: dict, key: str, ctx: str):
    if key not in d:
        raise ConfigError(f"{ctx}: missing field '{key}'")
    return d[key]


def density_from_dict(d: Any, ctx: str = "density") -> SpectralDensity:
    if not isinstance(d, dict):
        raise ConfigError(f"{ctx}: expected an object, got {type(d).__name__}")
    kind = _need(d, "kind", ctx)
    try:
        if kind == "ohmic":
            return Ohmic(_need(d, "prefactor", ctx), _need(d, "cutoff", ctx))
        if kind == "superohmic":
            return Superohmic(_need(d, "exponent", ctx), _need(d, "prefactor", ctx), _need(d, "cutoff", ctx))
        if kind == "subohmic":
            return Subohmic(_need(d, "prefactor", ctx), _need(d, "cutoff", ctx))
        if kind == "lorentzian":
            terms = _need(d, "terms", ctx)
            return LorentzianSum(tuple(
                LorentzianTerm(_need(t, "p", f"{ctx}.terms[{i}]"), _need(t, "omega", f"{ctx}.terms[{i}]"),
                               _need(t, "gamma", f"{ctx}.terms[{i}]"))
                for i, t in enumerate(terms)
            ))
        if kind == "delta":
            return DeltaMode(_need(d, "kappa", ctx), _need(d, "omega0", ctx))
        if kind == "combination":
            parts = _need(d, "parts", ctx)
            return Combination(tuple(
                (float(_need(p, "coeff", f"{ctx}.parts[{i}]")),
                 density_from_dict(_need(p, "density", f"{ctx}.parts[{i}]"), f"{ctx}.parts[{i}].density"))
                for i, p in enumerate(parts)
            ))
    except SpecboundError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{ctx}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{ctx}: {exc}") from exc
    raise ConfigError(f"{ctx}: unknown kind {kind!r} (expected one of {', '.join(KINDS)})")


def density_to_dict(J: SpectralDensity) -> dict:
    if isinstance(J, Ohmic):
        return {"kind": "ohmic", "prefactor": J.prefactor, "cutoff": J.cutoff}
    if isinstance(J, Superohmic):
        return {"kind": "superohmic", "exponent": J.exponent, "prefactor": J.prefactor, "cutoff": J.cutoff}
    if isinstance(J, Subohmic):
        return {"kind": "subohmic", "prefactor": J.prefactor, "cutoff": J.cutoff}
    if isinstance(J, LorentzianSum):
        return {"kind": "lorentzian", "terms": [{"p": t.p, "omega": t.omega, "gamma": t.gamma} for t in J.terms]}
    if isinstance(J, DeltaMode):
        return {"kind": "delta", "kappa": J.kappa, "omega0": J.omega0}
    if isinstance(J, Combination):
        return {"kind": "combination",
                "parts": [{"coeff": c, "density": density_to_dict(p)} for c, p in J.parts]}
    raise ConfigError(f"cannot serialise {type(J).__name__}")


def parse_beta(value) -> float:
    if value is None:
        return math.inf
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "+inf"):
            return math.inf
        try:
            value = float(value)
        except ValueError as exc:
            raise ConfigError(f"beta: cannot parse {value!r}") from exc
    value = float(value)
    if not value > 0:
        raise ConfigError(f"beta must be > 0, got {value}")
    return value


def beta_to_json(beta: float):
    return "inf" if math.isinf(beta) else beta


@dataclass
class TimeGrid:
    t_min: float = 0.0
    t_max: float = 10.0
    points: int = 101
    spacing: str = "linear"

    def __post_init__(self):
        if not (self.t_max > self.t_min >= 0):
            raise ConfigError("time grid needs t_max > t_min >= 0")
        if int(self.points) != self.points or self.points < 2:
            raise ConfigError("time grid needs at least 2 points")
        if self.spacing not in ("linear", "log"):
            raise ConfigError("time grid spacing must be 'linear' or 'log'")
        if self.spacing == "log" and self.t_min <= 0:
            raise ConfigError("log spacing needs t_min > 0")
        self.points = int(self.points)

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.t_min, self.t_max, self.points)
        return np.linspace(self.t_min, self.t_max, self.points)


@dataclass
class RunConfig:
    """Everything a CLI command needs; unused fields keep their defaults.

    ``density`` is the bath (correlations, densities, truncation certificates).
    A bound variation is either ``variation`` (dJ itself) or ``density`` minus
    ``reference``.
    """

    density: dict | None = None
    reference: dict | None = None
    variation: dict | None = None
    beta: float = math.inf
    lambda_sq: float = 1.0
    observable_norm: float = 1.0
    coupling_absorbed: bool = False
    times: TimeGrid = field(default_factory=TimeGrid)
    omegas: TimeGrid | None = None
    tol: float = 1e-10
    horizon: float | None = None
    method: str = "auto"
    kind: str = "all"
    N: int = 0
    t_target: float = 30.0
    error_target: float | None = None

    def __post_init__(self):
        self.beta = parse_beta(self.beta)
        if isinstance(self.times, dict):
            self.times = TimeGrid(**self.times)
        if isinstance(self.omegas, dict):
            self.omegas = TimeGrid(**self.omegas)
        if not self.tol > 0:
            raise ConfigError("tol must be > 0")
        if self.method not in ("auto", "closed", "quadrature"):
            raise ConfigError(f"method must be auto|closed|quadrature, got {self.method!r}")
        if self.kind not in ("all", "general", "weak", "strong"):
            raise ConfigError(f"kind must be general|weak|strong|all, got {self.kind!r}")
        if self.horizon is not None and not self.horizon > 0:
            raise ConfigError("horizon must be > 0")
        for name in ("density", "reference", "variation"):
            val = getattr(self, name)
            if val is not None:
                density_from_dict(val, name)

    # ------------------------------------------------------------------
    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown configuration fields: {', '.join(sorted(unknown))}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        d["beta"] = beta_to_json(self.beta)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def digest(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]

    # ------------------------------------------------------------------
    def bath_density(self) -> SpectralDensity:
        if self.density is None:
            raise ConfigError("this command needs a 'density'")
        return density_from_dict(self.density)

    def variation_density(self) -> SpectralDensity:
        if self.variation is not None:
            return density_from_dict(self.variation, "variation")
        if self.density is not None and self.reference is not None:
            return density_from_dict(self.density) - density_from_dict(self.reference, "reference")
        raise ConfigError("a bound needs 'variation' or both 'density' and 'reference'")


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return RunConfig.from_dict(data)
