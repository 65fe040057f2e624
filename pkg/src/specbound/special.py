"""Special functions: polygamma of complex argument and overflow-safe coth."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, SpecialFunctionFailure

_SHIFT_RADIUS = 12.0
_N_BERNOULLI = 40


@lru_cache(maxsize=None)
def bernoulli_even(count: int = _N_BERNOULLI) -> tuple[float, ...]:
    """B_2, B_4, ..., B_{2*count} from the Akiyama-Tanigawa recurrence."""
    n_max = 2 * count
    a = [Fraction(0)] * (n_max + 1)
    out = []
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(float(a[0]))
    return tuple(out)


def polygamma(n: int, z) -> np.ndarray | complex:
    """psi^(n)(z) for integer n >= 1 and Re z > 0.

    The argument is shifted with psi^(n)(z) = psi^(n)(z+1) + (-1)^(n+1) n!/z^(n+1)
    until |z| >= 12, then the Bernoulli asymptotic series is summed up to its
    smallest term.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"polygamma order must be an integer >= 1, got {n!r}")
    n = int(n)
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex)).copy()
    if np.any(~(z.real > 0)):
        raise DomainError("polygamma requires Re z > 0")

    sign = -1.0 if n % 2 == 0 else 1.0  # (-1)^(n+1)
    nfact = math.factorial(n)
    shift_sum = np.zeros_like(z)
    for _ in range(int(_SHIFT_RADIUS) + 1):
        small = np.abs(z) < _SHIFT_RADIUS
        if not small.any():
            break
        zs = z[small]
        shift_sum[small] += 1.0 / zs ** (n + 1)
        z[small] = zs + 1.0

    inv = 1.0 / z
    inv2 = inv * inv
    zn = inv ** n
    series = math.factorial(n - 1) * zn + 0.5 * nfact * zn * inv
    term_pow = zn * inv2
    prev = np.full(z.shape, np.inf)
    converged = np.zeros(z.shape, dtype=bool)
    for k, b2k in enumerate(bernoulli_even(), start=1):
        coeff = b2k * math.factorial(2 * k + n - 1) / math.factorial(2 * k)
        term = coeff * term_pow
        mag = np.abs(term)
        # stop each element at its smallest term
        active = ~converged & (mag < prev)
        series = np.where(active, series + term, series)
        converged |= ~active | (mag <= 1e-17 * np.abs(series))
        prev = np.where(active, mag, prev)
        if converged.all():
            break
        term_pow = term_pow * inv2
    else:
        if not converged.all():
            raise SpecialFunctionFailure(f"polygamma({n}) asymptotic series did not converge")

    out = sign * (series + nfact * shift_sum)
    return complex(out[0]) if scalar else out


def coth(z):
    """Hyperbolic cotangent without overflow for large |Re z|.

    Uses coth z = 1 + 2 e^{-2z} / (1 - e^{-2z}) on Re z > 0 and oddness
    elsewhere, so e^{-2z} never exceeds one in modulus.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z))
    is_complex = np.iscomplexobj(z)
    flip = z.real < 0
    w = np.where(flip, -z, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.exp(-2.0 * w)
        out = 1.0 + 2.0 * q / (-np.expm1(-2.0 * w))
    out = np.where(flip, -out, out)
    if not is_complex:
        out = out.real
    if scalar:
        return complex(out[0]) if is_complex else float(out[0])
    return out


def thermal_factor(beta: float, omega):
    """coth(beta*omega/2), with beta = inf meaning zero temperature."""
    omega = np.asarray(omega, dtype=float)
    if math.isinf(beta):
        return np.ones_like(omega)
    return coth(0.5 * beta * omega)
