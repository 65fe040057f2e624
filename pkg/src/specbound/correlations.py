"""Bath correlation functions xi_J(t) for the density variants.

    xi_J(t) = int_0^inf dw/pi J(w) (coth(beta w/2) cos(w t) + i sin(w t))

Closed forms are used where they exist; everything else goes through the
oscillatory quadrature in :mod:`specbound.quadrature`.  All closed forms are
for unit-weight shapes (see :mod:`specbound.densities`) and are combined
linearly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .densities import SpectralDensity, ShapeKey, canonical_terms, unit_shape
from .errors import DeltaNotEvaluable, DomainError, TailNotCertifiable
from .quadrature import EvalCounter, QuadResult, adaptive, fourier_integral
from .special import coth, polygamma, thermal_factor

INF = math.inf
MAX_MATSUBARA_TERMS = 2_000_000


@dataclass(frozen=True)
class BathSpec:
    """A density together with the inverse temperature and coupling lambda^2."""

    density: SpectralDensity
    beta: float = INF
    lambda_sq: float = 1.0

    def __post_init__(self):
        beta = float(self.beta)
        if not beta > 0:
            raise DomainError(f"beta must be > 0 (inf for zero temperature), got {beta!r}")
        if not float(self.lambda_sq) >= 0:
            raise DomainError(f"lambda_sq must be >= 0, got {self.lambda_sq!r}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "lambda_sq", float(self.lambda_sq))

    @property
    def zero_temperature(self) -> bool:
        return math.isinf(self.beta)


# ----------------------------------------------------------------------------
# Matsubara machinery
# ----------------------------------------------------------------------------


def matsubara_frequencies(beta: float, count: int, start: int = 1) -> np.ndarray:
    """nu_k = 2 pi k / beta for k = start, ..., start + count - 1."""
    return 2.0 * math.pi * np.arange(start, start + count, dtype=float) / beta


def lorentzian_denominator(omega: float, gamma: float, nu: np.ndarray) -> np.ndarray:
    """(W^2 + G^2 - nu^2)^2 + 4 W^2 nu^2."""
    r2 = omega * omega + gamma * gamma
    return (r2 - nu * nu) ** 2 + 4.0 * omega * omega * nu * nu


def safe_matsubara_index(omega: float, gamma: float, beta: float) -> int:
    """Smallest K with nu_K >= 2 sqrt(W^2 + G^2), where the integral tail bound applies."""
    radius = math.hypot(omega, gamma)
    return max(1, math.ceil(2.0 * radius * beta / (2.0 * math.pi)))


def matsubara_tail_bound(omega: float, gamma: float, beta: float, t: float, K: int) -> float:
    """Certified bound on sum_{k>K} (2/beta) nu_k e^{-nu_k t} / D_k (all terms positive).

    Each term is majorised by (2/beta) nu e^{-nu t} / (nu^2 - R^2)^2, which is
    decreasing once nu >= R; comparing with the integral from K gives
    e^{-nu_K t} / (2 pi (nu_K^2 - R^2)).  Terms below the safe index are added
    explicitly.
    """
    k_safe = safe_matsubara_index(omega, gamma, beta)
    explicit = 0.0
    if K < k_safe:
        nu = matsubara_frequencies(beta, k_safe - K, start=K + 1)
        explicit = float(np.sum((2.0 / beta) * nu * np.exp(-nu * t) / lorentzian_denominator(omega, gamma, nu)))
        K = k_safe
    nu_k = 2.0 * math.pi * K / beta
    r2 = omega * omega + gamma * gamma
    return explicit + math.exp(-nu_k * t) / (2.0 * math.pi * (nu_k * nu_k - r2))


@dataclass(frozen=True)
class MatsubaraSum:
    """Truncated Matsubara series with a certified bound on the omitted tail."""

    beta: float
    terms: int
    value: float
    tail_bound: float

    @property
    def frequencies(self) -> np.ndarray:
        return matsubara_frequencies(self.beta, self.terms)


def lorentzian_matsubara_sum(omega: float, gamma: float, beta: float, t: float, K: int) -> MatsubaraSum:
    """(2/beta) sum_{k=1}^K nu_k e^{-nu_k t} / D_k and its tail certificate."""
    if K < 0:
        raise DomainError("number of Matsubara terms must be >= 0")
    nu = matsubara_frequencies(beta, K)
    vals = (2.0 / beta) * nu * np.exp(-nu * t) / lorentzian_denominator(omega, gamma, nu)
    return MatsubaraSum(beta, K, math.fsum(vals[::-1]), matsubara_tail_bound(omega, gamma, beta, t, K))


def matsubara_tail_integral(omega: float, gamma: float, beta: float, t: float, nu_a: float,
                            counter: EvalCounter | None = None) -> QuadResult:
    """(1/pi) int_{nu_a}^inf nu e^{-nu t} / D(nu) dnu, the integral analogue of the tail.

    Exact (arctan form) at t = 0; otherwise adaptive quadrature on nu = nu_a/u.
    """
    if t == 0.0:
        a = gamma * gamma - omega * omega
        b = 2.0 * omega * gamma
        return QuadResult(math.atan2(b, nu_a * nu_a - a) / (4.0 * math.pi * omega * gamma), 0.0)

    def f(u):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore", under="ignore"):
            nu = nu_a / u
            y = nu * np.exp(-nu * t) / lorentzian_denominator(omega, gamma, nu) * nu_a / (u * u)
        return np.where(np.isfinite(y), y, 0.0) / math.pi

    return adaptive(f, np.linspace(0.0, 1.0, 9), abs_tol=1e-300, rel_tol=1e-14, counter=counter)


def matsubara_remainder(omega: float, gamma: float, beta: float, t: float, K: int,
                        counter: EvalCounter | None = None) -> tuple[float, float]:
    """Estimate and certified half-width of sum_{k>K} (2/beta) nu_k e^{-nu_k t} / D_k.

    For k >= K beyond the safe index the summand is decreasing in k, so the
    sum lies between the integrals from K+1 and from K; the midpoint is
    returned.  Below the safe index the missing terms are summed explicitly.
    """
    k_safe = safe_matsubara_index(omega, gamma, beta)
    explicit = 0.0
    if K < k_safe:
        nu = matsubara_frequencies(beta, k_safe - K, start=K + 1)
        explicit = math.fsum((2.0 / beta) * nu * np.exp(-nu * t) / lorentzian_denominator(omega, gamma, nu))
        K = k_safe
    step = 2.0 * math.pi / beta
    hi = matsubara_tail_integral(omega, gamma, beta, t, K * step, counter)
    lo = matsubara_tail_integral(omega, gamma, beta, t, (K + 1) * step, counter)
    half = 0.5 * (hi.value - lo.value)
    return explicit + lo.value + half, abs(half) + hi.error + lo.error


def _summand(omega: float, gamma: float, beta: float, t: float, k: int) -> float:
    nu = 2.0 * math.pi * k / beta
    return (2.0 / beta) * nu * math.exp(-nu * t) / float(lorentzian_denominator(omega, gamma, nu))


def terms_for_tolerance(omega: float, gamma: float, beta: float, t: float, tol: float) -> int:
    """A K (within a factor two of the smallest) whose remainder half-width is below ``tol``.

    The half-width is at most half the K-th summand, which is what is tested.
    """
    k = safe_matsubara_index(omega, gamma, beta)
    while 0.5 * _summand(omega, gamma, beta, t, k) > 0.5 * tol:
        k *= 2
        if k > MAX_MATSUBARA_TERMS:
            raise TailNotCertifiable(
                f"Matsubara remainder above {tol:.3g} even with {MAX_MATSUBARA_TERMS} terms at t={t}"
            )
    return k


# ----------------------------------------------------------------------------
# closed forms (unit weight)
# ----------------------------------------------------------------------------


def _times(t) -> tuple[np.ndarray, bool]:
    scalar = np.ndim(t) == 0
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("closed-form correlations need t >= 0")
    return arr, scalar


def _out(values: np.ndarray, scalar: bool):
    return complex(values[0]) if scalar else values


def xi_power_zero_temperature(n: float, cutoff: float, t):
    """Zero-temperature correlation of pi w^n e^{-w/W}: Gamma(n+1) W^{n+1} / (1 - i W t)^{n+1}."""
    arr, scalar = _times(t)
    vals = math.gamma(n + 1.0) * cutoff ** (n + 1.0) / (1.0 - 1j * cutoff * arr) ** (n + 1.0)
    return _out(vals, scalar)


def xi_superohmic_closed(n: int, cutoff: float, beta: float, t):
    """Correlation of J = pi w^n e^{-w/W} for integer n >= 1.

    Uses the polygamma form with one recurrence step peeled off,
        n! W^{n+1}/(1 - iWt)^{n+1} + [psi^(n)(z+1) + psi^(n)(conj z + 1)] / (-beta)^{n+1},
    z = (1 + iWt)/(beta W), which is algebraically identical to
    [psi^(n)(z) + psi^(n)(conj z)]/(-beta)^{n+1} - n! (-iW/(Wt - i))^{n+1}
    but free of the cancellation between the two pieces at low temperature.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"exponent must be an integer >= 1, got {n!r}")
    if not (cutoff > 0 and beta > 0):
        raise DomainError("cutoff and beta must be positive")
    n = int(n)
    arr, scalar = _times(t)
    vac = math.factorial(n) * cutoff ** (n + 1) / (1.0 - 1j * cutoff * arr) ** (n + 1)
    if math.isinf(beta):
        return _out(vac, scalar)
    z = (1.0 + 1j * cutoff * arr) / (beta * cutoff)
    thermal = 2.0 * polygamma(n, z + 1.0).real / (-beta) ** (n + 1)
    return _out(vac + thermal, scalar)


def xi_ohmic_closed(cutoff: float, beta: float, t):
    """Correlation of J = pi w e^{-w/W} (ohmic, unit prefactor)."""
    return xi_superohmic_closed(1, cutoff, beta, t)


def xi_subohmic_limit(cutoff: float, t, limit: str, beta: float | None = None):
    """Zero- and high-temperature forms for J = pi sqrt(w) e^{-w/W}.

    zeroT: Gamma(3/2) W^{3/2} e^{i (3/2) arctan(Wt)} / (1 + W^2 t^2)^{3/4}   (exact)
    infT:  leading 1/beta real part  (2/beta) sqrt(pi W) sqrt((1 + s)/(2 s^2)),
           s = sqrt(1 + W^2 t^2), plus the temperature-independent imaginary part.
    """
    arr, scalar = _times(t)
    x = cutoff * arr
    amp = 0.5 * math.sqrt(math.pi) * cutoff ** 1.5 / (1.0 + x * x) ** 0.75
    phase = 1.5 * np.arctan(x)
    if limit == "zeroT":
        return _out(amp * np.exp(1j * phase), scalar)
    if limit == "infT":
        if beta is None or not beta > 0 or math.isinf(beta):
            raise DomainError("the high-temperature limit needs a finite beta > 0")
        s = np.sqrt(1.0 + x * x)
        re = (2.0 / beta) * math.sqrt(math.pi * cutoff) * np.sqrt((1.0 + s) / (2.0 * s * s))
        return _out(re + 1j * amp * np.sin(phase), scalar)
    raise DomainError(f"limit must be 'zeroT' or 'infT', got {limit!r}")


def _lorentzian_pole_part(omega: float, gamma: float, beta: float, t: np.ndarray) -> np.ndarray:
    c = coth(0.5 * beta * complex(omega, gamma))
    damp = np.exp(-gamma * t) / (4.0 * omega * gamma)
    return damp * ((c * np.exp(1j * omega * t)).real + 1j * np.sin(omega * t))


def xi_lorentzian_closed(omega: float, gamma: float, beta: float, t, K: int):
    """Correlation of the antisymmetrised Lorentzian J_L (with its pi/2 prefactor).

    Returns ``(value, tail_bound)``: the pole contribution minus K Matsubara
    terms, and a certified bound on the modulus of the omitted Matsubara terms.
    """
    if not (omega > 0 and gamma > 0 and beta > 0) or math.isinf(beta):
        raise DomainError("Lorentzian closed form needs positive W, G and finite beta")
    arr, scalar = _times(t)
    pole = _lorentzian_pole_part(omega, gamma, beta, arr)
    mats = np.empty(arr.size)
    tails = np.empty(arr.size)
    nu = matsubara_frequencies(beta, K)
    base = (2.0 / beta) * nu / lorentzian_denominator(omega, gamma, nu)
    for i, ti in enumerate(arr):
        mats[i] = math.fsum((base * np.exp(-nu * ti))[::-1])
        tails[i] = matsubara_tail_bound(omega, gamma, beta, ti, K)
    half_pi = 0.5 * math.pi
    vals = half_pi * (pole - mats)
    tails = half_pi * tails
    if scalar:
        return complex(vals[0]), float(tails[0])
    return vals, tails


def xi_lorentzian_certified(omega: float, gamma: float, beta: float, t, tol: float,
                            crude_cap: int = 4096):
    """Lorentzian correlation with a certified error of at most ``tol``.

    Per time, K doubles from the safe index until the plain tail bound is
    below tol; if that needs more than ``crude_cap`` terms, the remainder is
    instead estimated by the integral sandwich.  Returns ``(value, error_bound)``.
    """
    if not (omega > 0 and gamma > 0 and beta > 0) or math.isinf(beta):
        raise DomainError("Lorentzian closed form needs positive W, G and finite beta")
    arr, scalar = _times(t)
    half_pi = 0.5 * math.pi
    inner_tol = tol / half_pi
    k0 = safe_matsubara_index(omega, gamma, beta)
    Ks = np.empty(arr.size, dtype=np.int64)
    crude = np.zeros(arr.size, dtype=bool)
    for i, ti in enumerate(arr):
        k = k0
        while matsubara_tail_bound(omega, gamma, beta, ti, k) > inner_tol and k < crude_cap:
            k *= 2
        if matsubara_tail_bound(omega, gamma, beta, ti, k) <= inner_tol:
            Ks[i], crude[i] = k, True
        else:
            Ks[i] = max(k, terms_for_tolerance(omega, gamma, beta, ti, inner_tol))
    pole = _lorentzian_pole_part(omega, gamma, beta, arr)
    mats = np.empty(arr.size)
    errs = np.empty(arr.size)
    counter = EvalCounter()
    for K in np.unique(Ks):
        sel = np.nonzero(Ks == K)[0]
        nu = matsubara_frequencies(beta, int(K))
        base = (2.0 / beta) * nu / lorentzian_denominator(omega, gamma, nu)
        for j0 in range(0, sel.size, max(1, 1_000_000 // nu.size)):
            idx = sel[j0:j0 + max(1, 1_000_000 // nu.size)]
            # smallest terms first
            mats[idx] = (np.exp(-np.multiply.outer(arr[idx], nu[::-1])) * base[::-1]).sum(axis=1)
        for i in sel:
            if crude[i]:
                errs[i] = matsubara_tail_bound(omega, gamma, beta, arr[i], int(K))
            else:
                rem, rem_err = matsubara_remainder(omega, gamma, beta, arr[i], int(K), counter)
                mats[i] += rem
                errs[i] = rem_err
    vals = half_pi * (pole - mats)
    errs = half_pi * errs
    if scalar:
        return complex(vals[0]), float(errs[0])
    return vals, errs


def xi_delta_mode(kappa: float, omega0: float, beta: float, t):
    """Correlation of kappa delta(w - w0): (kappa/pi)(coth(beta w0/2) cos w0 t + i sin w0 t)."""
    if not omega0 > 0:
        raise DomainError("omega0 must be positive")
    scalar = np.ndim(t) == 0
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    c = float(thermal_factor(beta, omega0))
    vals = (kappa / math.pi) * (c * np.cos(omega0 * arr) + 1j * np.sin(omega0 * arr))
    return _out(vals, scalar)


# ----------------------------------------------------------------------------
# quadrature of the defining integral
# ----------------------------------------------------------------------------


def _integrands(J: SpectralDensity, beta: float):
    terms = canonical_terms(J)
    if any(k[0] == "delta" for k in terms):
        raise DeltaNotEvaluable("delta modes cannot be integrated numerically; use the analytic form")

    def density(om):
        out = np.zeros_like(om)
        for key, w in terms.items():
            out = out + w * unit_shape(key, om)
        return out

    def g_cos(om):
        with np.errstate(over="ignore", invalid="ignore"):
            return density(om) * thermal_factor(beta, om) / math.pi

    def g_sin(om):
        return density(om) / math.pi

    return g_cos, g_sin


def magnitude_scale(spec: BathSpec, counter: EvalCounter | None = None) -> float:
    """int dw/pi |J(w)| coth(beta w/2), an upper bound on sup_t |xi(t)| (delta-free part)."""
    g_cos, _ = _integrands(spec.density, spec.beta)
    split = 4.0 * spec.density.frequency_scale()
    counter = counter or EvalCounter()
    head = adaptive(lambda u: 2.0 * u * np.abs(g_cos(u * u)), np.sqrt(np.linspace(0, split, 9)),
                    abs_tol=1e-300, rel_tol=1e-10, counter=counter)

    def tail_f(u):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            y = np.abs(g_cos(split / u)) * split / (u * u)
        return np.where(np.isfinite(y), y, 0.0)

    tail = adaptive(tail_f, np.linspace(0.0, 1.0, 9), abs_tol=1e-300, rel_tol=1e-10, counter=counter)
    return head.value + tail.value + head.error + tail.error


def xi_quadrature(
    spec: BathSpec,
    t: float,
    tol: float | None = None,
    rel_tol: float = 1e-11,
    counter: EvalCounter | None = None,
    return_error: bool = False,
):
    """Numerical value of the defining frequency integral at one time ``t``.

    The absolute target is ``max(tol, rel_tol * M)`` with M = int |J| coth/pi,
    the natural scale of |xi|.  Negative t is accepted (the integral extends
    naturally: real part even, imaginary part odd).
    """
    counter = counter or EvalCounter()
    J = spec.density
    g_cos, g_sin = _integrands(J, spec.beta)
    if J.is_zero:
        return (0j, 0.0) if return_error else 0j
    scale = magnitude_scale(spec, counter)
    target = max(tol or 0.0, rel_tol * scale)
    if target <= 0:
        target = 1e-300
    split = 4.0 * J.frequency_scale()
    re = fourier_integral(g_cos, float(t), "cos", split, 0.5 * target, counter)
    im = fourier_integral(g_sin, float(t), "sin", split, 0.5 * target, counter)
    val = complex(re.value, im.value)
    err = re.error + im.error
    if err > target:
        from .errors import ToleranceNotMet

        raise ToleranceNotMet(f"quadrature error {err:.3g} above target {target:.3g}")
    return (val, err) if return_error else val


# ----------------------------------------------------------------------------
# evaluable correlation functions
# ----------------------------------------------------------------------------

CLOSED_FORM_TAGS = {
    "ohmic": "ClosedFormOhmic",
    "superohmic": "ClosedFormSuperohmic",
    "subohmic": "SubohmicLimit(zeroT)",
    "lorentz": "ClosedFormLorentzian",
    "delta": "DeltaModeAnalytic",
}


def _closed_form_tag(key: ShapeKey, beta: float) -> str | None:
    kind = key[0]
    if kind == "delta":
        return CLOSED_FORM_TAGS["delta"]
    if kind == "lorentz":
        return None if math.isinf(beta) else CLOSED_FORM_TAGS["lorentz"]
    s = key[1]
    if s == 1.0:
        return CLOSED_FORM_TAGS["ohmic"]
    if s == 0.5:
        return CLOSED_FORM_TAGS["subohmic"] if math.isinf(beta) else None
    return CLOSED_FORM_TAGS["superohmic"]


@dataclass
class CorrelationFn:
    """Evaluable xi(t) for a bath, with per-component provenance.

    ``components`` lists ``(shape key, weight, method tag)``; the method tag is
    one of the closed-form tags or ``"Quadrature"``.  Calling the object
    returns complex values; :meth:`evaluate` also returns an error bound per
    time (Matsubara tail certificates plus quadrature error estimates).
    """

    source: BathSpec
    method: str
    components: list = field(default_factory=list)
    tol: float = 1e-12
    quad_rel_tol: float = 1e-11

    def __call__(self, t):
        return self.evaluate(t)[0] if np.ndim(t) else complex(self.evaluate(t)[0][0])

    def evaluate(self, t) -> tuple[np.ndarray, np.ndarray]:
        scalar = np.ndim(t) == 0
        arr = np.atleast_1d(np.asarray(t, dtype=float))
        vals = np.zeros(arr.size, dtype=complex)
        errs = np.zeros(arr.size)
        beta = self.source.beta
        quad_keys = []
        for key, w, tag in self.components:
            if tag == "Quadrature":
                quad_keys.append((key, w))
                continue
            if tag == CLOSED_FORM_TAGS["delta"]:
                v = xi_delta_mode(1.0, key[1], beta, np.abs(arr))
                v = v.real + 1j * np.sign(arr) * v.imag
                vals += w * v
                continue
            if np.any(arr < 0):
                raise DomainError("closed-form evaluation needs t >= 0")
            if tag == CLOSED_FORM_TAGS["lorentz"]:
                tol = self.tol / max(abs(w), 1e-300) / max(len(self.components), 1)
                v, tail = xi_lorentzian_certified(key[1], key[2], beta, arr, tol)
                vals += w * v
                errs += abs(w) * tail
            elif tag == CLOSED_FORM_TAGS["subohmic"]:
                vals += w * xi_subohmic_limit(key[2], arr, "zeroT")
            else:
                vals += w * xi_superohmic_closed(int(key[1]), key[2], beta, arr)
        if quad_keys:
            from .densities import Combination, _unit_density

            sub = Combination(tuple((w, _unit_density(k)) for k, w in quad_keys))
            spec = BathSpec(sub, beta, self.source.lambda_sq)
            for i, ti in enumerate(arr):
                # the evaluation budget applies per time point
                v, e = xi_quadrature(spec, ti, tol=self.tol, rel_tol=self.quad_rel_tol,
                                     counter=EvalCounter(), return_error=True)
                vals[i] += v
                errs[i] += e
        if scalar:
            return vals[:1], errs[:1]
        return vals, errs

    @property
    def is_real(self) -> bool:
        return False


def correlation_function(
    spec: BathSpec, method: str = "auto", tol: float = 1e-12, quad_rel_tol: float = 1e-11
) -> CorrelationFn:
    """Build the evaluable correlation function of ``spec``.

    ``method`` is ``"auto"`` (closed forms where available), ``"closed"``
    (fail if some component has none) or ``"quadrature"`` (delta modes are
    still treated analytically since they have no integrable form).
    """
    if method not in ("auto", "closed", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    comps = []
    for key, w in canonical_terms(spec.density).items():
        tag = _closed_form_tag(key, spec.beta)
        if method == "quadrature" and key[0] != "delta":
            tag = "Quadrature"
        elif tag is None:
            if method == "closed":
                raise DomainError(f"no closed form for component {key} at beta={spec.beta}")
            tag = "Quadrature"
        comps.append((key, w, tag))
    tags = {c[2] for c in comps}
    if not comps:
        overall = "closed-form"
    elif tags == {"Quadrature"}:
        overall = "quadrature"
    elif "Quadrature" in tags:
        overall = "mixed"
    else:
        overall = "closed-form"
    return CorrelationFn(spec, overall, comps, tol, quad_rel_tol)


def xi(spec: BathSpec, t, method: str = "auto"):
    """Convenience wrapper: values of xi_J at ``t``."""
    return correlation_function(spec, method)(t)
