"""Error bounds on observable expectation values under a bath variation.

For a variation with correlation difference dxi(t) and coupling lambda^2:

    general  ||O|| (exp(lambda^2 D(t)) - 1),   D(t) = int_0^t (t - s) |dxi(s)| ds
    weak     ||O|| (exp(lambda^2 C t^2 / 2) - 1),   C >= sup |dxi|
    strong   ||O|| (exp(lambda^2 (gamma + eta) t) - 1)

with gamma = int |Re dxi|, eta = int |Im dxi| over [0, inf).  The strong
bound needs c = int |dxi| < inf.  Every integral carries an error estimate
which is added before exponentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np
from scipy.optimize import brentq

from .correlations import (
    BathSpec,
    CorrelationFn,
    _integrands,
    correlation_function,
)
from .densities import SpectralDensity, canonical_terms
from .errors import DomainError, NoTailCertificate
from .quadrature import EvalCounter, QuadResult, adaptive
from .special import thermal_factor

SATISFIED = "Satisfied"
NOT_SATISFIED = "NotSatisfied"
UNDETERMINED = "Undetermined"

HORIZON_DECAY_MULTIPLE = 50.0
MAX_HORIZON_EXTENSIONS = 12
TAIL_REL_TARGET = 1e-3
SUP_SAFETY = 1.05


class DeltaXi(Protocol):
    """A correlation difference; ``evaluate`` returns values and error bounds."""

    def evaluate(self, t) -> tuple[np.ndarray, np.ndarray]: ...


@dataclass
class ConditionStatus:
    status: str
    c: float | None = None
    reason: str = ""

    @property
    def satisfied(self) -> bool:
        return self.status == SATISFIED

    def to_dict(self) -> dict:
        return {"status": self.status, "c": self.c, "reason": self.reason}


# ----------------------------------------------------------------------------
# decay certificates for the density components (unit weight)
# ----------------------------------------------------------------------------


def _superohmic_tail_const(n: int, cutoff: float, beta: float) -> tuple[float, float]:
    """(A, B) with |xi(t)| <= A/t^{n+1} + B/t^n for the unit shape pi w^n e^{-w/W}.

    Zero-temperature part: n! W^{n+1}/|1 - iWt|^{n+1} <= n!/t^{n+1}.  Thermal
    part: |psi^(n)(w)| <= n! sum_k |w + k|^{-n-1}, compared with an integral.
    For n = 1 the real part of the thermal sum is bounded by Euler-Maclaurin
    instead, giving a 1/t^2 bound.
    """
    nf = math.factorial(n)
    if math.isinf(beta):
        return float(nf), 0.0
    if n == 1:
        a = 1.0 + 1.0 / (beta * cutoff)
        return 1.0 + 2.0 * (a + 1.125), 0.0
    i_n = math.sqrt(math.pi) * math.gamma(0.5 * n) / (2.0 * math.gamma(0.5 * (n + 1)))
    return 3.0 * nf, 2.0 * nf * i_n / beta


def _lorentz_sums(omega: float, gamma: float, beta: float) -> float:
    """sum_{k>=1} 1/D_k."""
    from .heom_cert import inverse_d_tail

    return inverse_d_tail(omega, gamma, beta, 0)


def unit_tail_integral(key, beta: float, T: float) -> float | None:
    """Certified bound on int_T^inf |xi_unit(t)| dt, or None when unavailable."""
    kind = key[0]
    if kind == "delta":
        return None
    if kind == "power":
        s, cutoff = key[1], key[2]
        if s == 0.5:
            if math.isinf(beta):
                # |xi| <= (sqrt(pi)/2) t^{-3/2}
                return math.sqrt(math.pi / T)
            return None
        n = int(s)
        A, B = _superohmic_tail_const(n, cutoff, beta)
        out = A / (n * T ** n)
        if B:
            if n == 1:
                return None
            out += B / ((n - 1) * T ** (n - 1))
        return out
    W, G = key[1], key[2]
    if math.isinf(beta):
        # pole part plus (1/pi) int nu e^{-nu t}/D, D >= 4 W^2 G^2
        return 0.5 * math.pi * (math.exp(-G * T) / (4.0 * W * G * G) + 1.0 / (4.0 * math.pi * W * W * G * G * T))
    from .special import coth

    c = abs(coth(0.5 * beta * complex(W, G)))
    nu1 = 2.0 * math.pi / beta
    pole = math.exp(-G * T) * (2.0 * c + 2.0) / (8.0 * W * G * G)
    mats = (2.0 / beta) * math.exp(-nu1 * T) * _lorentz_sums(W, G, beta)
    return 0.5 * math.pi * (pole + mats)


def unit_decay_time(key, beta: float) -> float:
    kind = key[0]
    if kind == "delta":
        return 2.0 * math.pi / key[1]
    thermal = 0.0 if math.isinf(beta) else beta / (2.0 * math.pi)
    if kind == "power":
        return max(1.0 / key[2], thermal)
    return max(1.0 / key[2], 1.0 / key[1], thermal)


def unit_sup_bound(key, beta: float) -> float:
    """Certified sup_t |xi_unit(t)| (delta only; other shapes go through int |J| coth / pi)."""
    return float(thermal_factor(beta, key[1])) / math.pi


# ----------------------------------------------------------------------------
# dxi from a density variation
# ----------------------------------------------------------------------------


@dataclass
class DensityDeltaXi:
    """dxi(t) = xi_{dJ}(t) with decay and sup certificates from the density components."""

    density: SpectralDensity
    beta: float
    method: str = "auto"
    tol: float = 1e-13

    def __post_init__(self):
        self.terms = canonical_terms(self.density)
        self.corr: CorrelationFn = correlation_function(BathSpec(self.density, self.beta), self.method, self.tol)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def has_delta(self) -> bool:
        return any(k[0] == "delta" for k in self.terms)

    def evaluate(self, t):
        return self.corr.evaluate(t)

    def decay_time(self) -> float:
        return max((unit_decay_time(k, self.beta) for k in self.terms), default=1.0)

    def tail_integral(self, T: float) -> float | None:
        total = 0.0
        for k, w in self.terms.items():
            b = unit_tail_integral(k, self.beta, T)
            if b is None:
                return None
            total += abs(w) * b
        return total

    def sup_bound(self) -> float:
        """int dw/pi |dJ| coth(beta w/2) plus the delta weights, an upper bound on sup |dxi|."""
        smooth = {k: w for k, w in self.terms.items() if k[0] != "delta"}
        out = sum(abs(w) * unit_sup_bound(k, self.beta) for k, w in self.terms.items() if k[0] == "delta")
        if smooth:
            from .densities import Combination, _unit_density

            J = Combination(tuple((w, _unit_density(k)) for k, w in smooth.items()))
            g_cos, _ = _integrands(J, self.beta)
            split = 4.0 * J.frequency_scale()
            counter = EvalCounter()
            f_head = lambda u: 2.0 * u * np.abs(g_cos(u * u))

            def f_tail(u):
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    y = np.abs(g_cos(split / u)) * split / (u * u)
                return np.where(np.isfinite(y), y, 0.0)

            head = adaptive(f_head, np.sqrt(np.linspace(0.0, split, 33)), abs_tol=1e-300, rel_tol=1e-10,
                            counter=counter)
            tail = adaptive(f_tail, np.linspace(0.0, 1.0, 9), abs_tol=1e-300, rel_tol=1e-10, counter=counter)
            out += head.value + head.error + tail.value + tail.error
        return out

    def oscillation_scale(self) -> float:
        return self.density.frequency_scale()


# ----------------------------------------------------------------------------
# variation definition
# ----------------------------------------------------------------------------


@dataclass
class VariationSpec:
    """A variation given as a density difference or directly as dxi(t).

    ``coupling_absorbed`` marks dxi already containing lambda^2 (the bounds
    then use an effective coupling of one).
    """

    delta_density: SpectralDensity | None = None
    delta_xi: object | None = None
    beta: float = math.inf
    lambda_sq: float = 1.0
    observable_norm: float = 1.0
    coupling_absorbed: bool = False
    method: str = "auto"

    def __post_init__(self):
        if (self.delta_density is None) == (self.delta_xi is None):
            raise DomainError("give exactly one of delta_density and delta_xi")
        if not self.lambda_sq >= 0:
            raise DomainError("lambda_sq must be >= 0")
        if not self.observable_norm > 0:
            raise DomainError("observable_norm must be > 0")
        if not self.beta > 0:
            raise DomainError("beta must be > 0")
        if self.delta_density is not None:
            self._xi = DensityDeltaXi(self.delta_density, self.beta, self.method)
        else:
            self._xi = self.delta_xi

    @property
    def xi(self):
        return self._xi

    @property
    def coupling(self) -> float:
        return 1.0 if self.coupling_absorbed else self.lambda_sq

    @property
    def is_zero(self) -> bool:
        return bool(getattr(self._xi, "is_zero", False))

    @property
    def has_delta(self) -> bool:
        return bool(getattr(self._xi, "has_delta", False))

    def scaled(self, a: float) -> "VariationSpec":
        if self.delta_density is None:
            raise DomainError("only density variations can be rescaled")
        return VariationSpec(a * self.delta_density, None, self.beta, self.lambda_sq,
                             self.observable_norm, self.coupling_absorbed, self.method)


def _values(xi, t) -> tuple[np.ndarray, np.ndarray]:
    if hasattr(xi, "evaluate"):
        v, e = xi.evaluate(t)
        return np.asarray(v), np.asarray(e, dtype=float)
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    v = np.array([complex(xi(ti)) for ti in arr])
    return v, np.zeros(arr.size)


def default_horizon(v: VariationSpec) -> float:
    dt = getattr(v.xi, "decay_time", None)
    return HORIZON_DECAY_MULTIPLE * (dt() if dt else 1.0)


# ----------------------------------------------------------------------------
# integrals of |.| over [0, T]
# ----------------------------------------------------------------------------


def _grid(T: float, scale: float, n_lin: int = 400) -> np.ndarray:
    """Breakpoints: uniform at the oscillation scale near the origin, geometric beyond."""
    step = min(0.25 / max(scale, 1e-300), T / 8.0)
    lin_end = min(T, n_lin * step)
    pts = np.arange(0.0, lin_end, step)
    if lin_end < T:
        pts = np.concatenate([pts, np.geomspace(lin_end, T, 64)])
    return np.unique(np.append(pts, T))


def _zero_breaks(f: Callable[[np.ndarray], np.ndarray], pts: np.ndarray) -> np.ndarray:
    """Add the sign changes of f between consecutive grid points (and midpoints)."""
    fine = np.unique(np.concatenate([pts, 0.5 * (pts[1:] + pts[:-1])]))
    vals = f(fine)
    idx = np.nonzero(np.sign(vals[1:]) * np.sign(vals[:-1]) < 0)[0]
    zs = []
    for j in idx:
        g = lambda s: float(f(np.array([s]))[0])
        try:
            zs.append(brentq(g, fine[j], fine[j + 1], xtol=1e-14, rtol=1e-14))
        except ValueError:
            continue
    return np.unique(np.concatenate([pts, zs]))


@dataclass
class AbsIntegrals:
    """int_0^T of |Re dxi|, |Im dxi| and |dxi|, each as (value, error)."""

    T: float
    re: QuadResult
    im: QuadResult
    mod: QuadResult
    evaluations: int = 0


def abs_integrals(xi, T: float, tol: float, scale: float = 1.0) -> AbsIntegrals:
    """Outer integrals over [0, T] with panels split at zeros of Re and Im dxi.

    Each integral adds the integrated pointwise error bound of dxi itself, so
    the returned value plus error is an upper estimate.
    """
    counter = EvalCounter(budget=20_000_000)

    def ev(t):
        return _values(xi, np.asarray(t, dtype=float))

    def part(fn):
        def f(t):
            v, e = ev(t)
            return fn(v)
        return f

    pts = _grid(T, scale)
    out = []
    for fn in (np.real, np.imag, np.abs):
        bps = pts if fn is np.abs else _zero_breaks(part(fn), pts)
        f = part(lambda v, fn=fn: np.abs(fn(v)))
        res = adaptive(f, bps, abs_tol=tol, rel_tol=0.0, counter=counter, max_panels=200_000)
        e_int = adaptive(lambda t: ev(t)[1], pts, abs_tol=max(tol, 1e-300), rel_tol=1e-2, counter=counter)
        out.append(QuadResult(res.value, res.error + e_int.value + e_int.error, res.evaluations))
    return AbsIntegrals(T, out[0], out[1], out[2], counter.count)


# ----------------------------------------------------------------------------
# integrability, gamma / eta, sup
# ----------------------------------------------------------------------------


@dataclass
class GammaEta:
    gamma: float
    eta: float
    c: float
    horizon: float
    tail: float | None
    error_gamma: float = 0.0
    error_eta: float = 0.0
    error_c: float = 0.0
    certified: bool = True
    gamma_T: float | None = None
    eta_T: float | None = None
    c_T: float | None = None

    def __iter__(self):
        yield self.gamma
        yield self.eta


def _tail_integral(xi, T: float) -> float | None:
    fn = getattr(xi, "tail_integral", None)
    return fn(T) if fn else None


def _scale(xi) -> float:
    fn = getattr(xi, "oscillation_scale", None)
    return fn() if fn else 1.0


def _magnitude(xi, T: float) -> float:
    """Rough size of int_0^T |dxi|, used to make tolerances relative."""
    ts = np.linspace(0.0, T, 4097)
    return max(float(np.trapezoid(np.abs(_values(xi, ts)[0]), ts)), 1e-300)


def gamma_eta(v: VariationSpec, quad_tol: float = 1e-10, T: float | None = None,
              allow_uncertified: bool = False, prefer_exact: bool = True) -> GammaEta:
    """gamma, eta and c as upper estimates (quadrature errors and tail bound added).

    ``quad_tol`` is relative to the size of the integrals.  Without an explicit
    ``T`` the horizon starts at the default and doubles until the certified
    tail is below a small fraction of the integrals.
    """
    if v.is_zero:
        return GammaEta(0.0, 0.0, 0.0, 0.0, 0.0)
    if v.has_delta:
        if not allow_uncertified:
            raise NoTailCertificate("a delta mode makes dxi non-integrable")
    xi = v.xi
    if prefer_exact and getattr(xi, "gamma_eta_exact", None):
        return xi.gamma_eta_exact()
    auto = T is None
    T = default_horizon(v) if auto else float(T)
    if _tail_integral(xi, T) is None and not allow_uncertified:
        raise NoTailCertificate("no certified bound on the integrals beyond the horizon")
    scale = _scale(xi)
    mag = _magnitude(xi, T)
    for _ in range(MAX_HORIZON_EXTENSIONS + 1):
        tail = _tail_integral(xi, T)
        if tail is None or not auto or tail <= TAIL_REL_TARGET * mag:
            break
        T *= 2.0
    if tail is None and not allow_uncertified:
        raise NoTailCertificate("no certified bound on the integrals beyond the horizon")
    ai = abs_integrals(xi, T, quad_tol * mag, scale)
    t_add = tail or 0.0
    return GammaEta(
        gamma=ai.re.value + ai.re.error + t_add,
        eta=ai.im.value + ai.im.error + t_add,
        c=ai.mod.value + ai.mod.error + t_add,
        horizon=T,
        tail=tail,
        error_gamma=ai.re.error + t_add,
        error_eta=ai.im.error + t_add,
        error_c=ai.mod.error + t_add,
        certified=tail is not None,
        gamma_T=ai.re.value,
        eta_T=ai.im.value,
        c_T=ai.mod.value,
    )


def check_integrability(v: VariationSpec, horizon: float | None = None, tol: float = 1e-8) -> ConditionStatus:
    """Status of int_0^inf |dxi| < inf, with a certified c when it holds."""
    if v.is_zero:
        return ConditionStatus(SATISFIED, 0.0, "zero variation")
    if v.has_delta:
        return ConditionStatus(NOT_SATISFIED, None, "delta mode: dxi oscillates without decay")
    xi = v.xi
    T = horizon or default_horizon(v)
    if _tail_integral(xi, T) is None:
        return ConditionStatus(UNDETERMINED, None, "no decay certificate beyond the horizon")
    ge = gamma_eta(v, tol, None if horizon is None else horizon)
    return ConditionStatus(SATISFIED, ge.c, f"horizon {ge.horizon:.6g}, tail {ge.tail:.3g}")


def certified_sup(v: VariationSpec) -> float | None:
    fn = getattr(v.xi, "sup_bound", None)
    if v.is_zero:
        return 0.0
    return fn() if fn else None


def sup_estimate(xi, T: float, grid: int = 2001) -> float:
    """Grid maximum of |dxi| on [0, T], inflated by 1.05 (not a certificate)."""
    if getattr(xi, "is_zero", False):
        return 0.0
    v, e = _values(xi, np.linspace(0.0, T, grid))
    return SUP_SAFETY * float(np.max(np.abs(v) + e))


# ----------------------------------------------------------------------------
# bound curves
# ----------------------------------------------------------------------------


def _exp_bound(norm: float, x) -> np.ndarray | float:
    return norm * np.expm1(x)


def strong_bound(v: VariationSpec, gamma: float, eta: float, t):
    """||O|| (exp(lambda^2 (gamma + eta) t) - 1)."""
    return _exp_bound(v.observable_norm, v.coupling * (gamma + eta) * np.asarray(t, dtype=float))


def weak_bound(v: VariationSpec, C: float, t):
    """||O|| (exp(lambda^2 C t^2 / 2) - 1)."""
    t = np.asarray(t, dtype=float)
    return _exp_bound(v.observable_norm, 0.5 * v.coupling * C * t * t)


def general_exponent(v: VariationSpec, times, quad_tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """D(t) = int_0^t (t - s) |dxi(s)| ds on a time grid, with error bounds.

    Accumulates A = int |dxi| and B = int s |dxi| over consecutive grid
    intervals, so D(t_j) = t_j A(t_j) - B(t_j).
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0):
        raise DomainError("times must be >= 0")
    if v.is_zero:
        return np.zeros(times.size), np.zeros(times.size)
    order = np.argsort(times)
    ts = times[order]
    xi = v.xi
    scale = _scale(xi)
    T = float(ts[-1])
    if T == 0.0:
        return np.zeros(times.size), np.zeros(times.size)
    mag = float(np.max(np.abs(_values(xi, np.linspace(0.0, T, 257))[0]))) * T * T
    tol = quad_tol * max(mag, 1e-300)
    counter = EvalCounter(budget=50_000_000)

    def fa(s):
        val, err = _values(xi, s)
        return np.abs(val) + err

    def fb(s):
        return s * fa(s)

    fine = _grid(T, scale)
    A = np.zeros(ts.size)
    B = np.zeros(ts.size)
    EA = np.zeros(ts.size)
    EB = np.zeros(ts.size)
    a_acc = b_acc = ea_acc = eb_acc = 0.0
    prev = 0.0
    n = ts.size
    for j, tj in enumerate(ts):
        if tj > prev:
            bps = np.unique(np.concatenate([[prev, tj], fine[(fine > prev) & (fine < tj)]]))
            ra = adaptive(fa, bps, abs_tol=tol / (n * max(T, 1.0)), counter=counter)
            rb = adaptive(fb, bps, abs_tol=tol / n, counter=counter)
            a_acc += ra.value
            b_acc += rb.value
            ea_acc += ra.error
            eb_acc += rb.error
            prev = tj
        A[j], B[j], EA[j], EB[j] = a_acc, b_acc, ea_acc, eb_acc
    D = np.maximum(ts * A - B, 0.0)
    err = ts * EA + EB
    out = np.empty(times.size)
    out_err = np.empty(times.size)
    out[order] = D
    out_err[order] = err
    return out, out_err


def general_bound(v: VariationSpec, t, quad_tol: float = 1e-10):
    """||O|| (exp(lambda^2 D(t)) - 1) with the quadrature error added to D."""
    scalar = np.ndim(t) == 0
    D, err = general_exponent(v, t, quad_tol)
    out = _exp_bound(v.observable_norm, v.coupling * (D + err))
    return float(out[0]) if scalar else out


@dataclass
class BoundReport:
    kind: str
    times: np.ndarray
    values: np.ndarray
    condition: ConditionStatus
    certified: bool = True
    params: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    refused: str = ""

    @property
    def curve(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.values.tolist()))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "certified": self.certified,
            "refused": self.refused,
            "params": self.params,
            "condition": self.condition.to_dict(),
            "metadata": self.metadata,
            "curve": self.curve,
        }


def bound_reports(v: VariationSpec, times, kind: str = "all", quad_tol: float = 1e-10,
                  horizon: float | None = None) -> dict[str, BoundReport]:
    """Bound curves of the requested kind(s) plus the pointwise minimum ``best``."""
    if kind not in ("all", "general", "weak", "strong"):
        raise DomainError(f"unknown bound kind {kind!r}")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    nan = np.full(times.size, np.nan)
    reports: dict[str, BoundReport] = {}
    if v.is_zero:
        cond = ConditionStatus(SATISFIED, 0.0, "zero variation")
    elif v.has_delta:
        cond = ConditionStatus(NOT_SATISFIED, None, "delta mode: dxi oscillates without decay")
    else:
        cond = None
    meta = {"quad_tol": quad_tol}

    if kind in ("all", "general"):
        D, err = general_exponent(v, times, quad_tol)
        vals = _exp_bound(v.observable_norm, v.coupling * (D + err))
        reports["general"] = BoundReport("general", times, vals, cond or ConditionStatus(UNDETERMINED),
                                         True, {"D_error_max": float(err.max(initial=0.0))}, meta)
    if kind in ("all", "weak"):
        C = certified_sup(v)
        certified = C is not None
        if C is None:
            T = horizon or default_horizon(v)
            C = sup_estimate(v.xi, T)
        reports["weak"] = BoundReport("weak", times, weak_bound(v, C, times),
                                      cond or ConditionStatus(UNDETERMINED), certified, {"C": C}, meta)
    if kind in ("all", "strong"):
        if v.has_delta:
            reports["strong"] = BoundReport("strong", times, nan, cond, False, {}, meta,
                                            refused="condition not satisfied: delta mode in the variation")
        else:
            try:
                ge = gamma_eta(v, quad_tol, horizon)
            except NoTailCertificate as exc:
                reports["strong"] = BoundReport("strong", times, nan, ConditionStatus(UNDETERMINED, None, str(exc)),
                                                False, {}, meta, refused=str(exc))
            else:
                cond = ConditionStatus(SATISFIED, ge.c, f"horizon {ge.horizon:.6g}")
                params = {"gamma": ge.gamma, "eta": ge.eta, "c_direct": ge.c, "horizon": ge.horizon,
                          "tail": ge.tail}
                reports["strong"] = BoundReport("strong", times, strong_bound(v, ge.gamma, ge.eta, times),
                                                cond, ge.certified, params, meta)
                reports["strong"].metadata = dict(meta, c_direct_curve=_exp_bound(
                    v.observable_norm, v.coupling * ge.c * times).tolist())
    if cond is not None:
        for r in reports.values():
            if r.condition.status == UNDETERMINED:
                r.condition = cond
    usable = [r.values for r in reports.values() if r.certified and not r.refused]
    if usable:
        best = np.nanmin(np.vstack(usable), axis=0)
        reports["best"] = BoundReport("best", times, best, cond or ConditionStatus(UNDETERMINED), True, {}, meta)
    return reports
