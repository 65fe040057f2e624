"""Adaptive Gauss-Kronrod quadrature and Fourier-type integrals on [0, inf).

The panel error estimate is the plain |K21 - G10| difference (no QUADPACK
rescaling), which is conservative for smooth integrands.  Errors are
accumulated additively everywhere so callers can add them to results that
must stay upper bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BudgetExceeded, ToleranceNotMet

DEFAULT_BUDGET = 1_000_000
SLOW_WEIGHT = 1e-3

# 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
_XK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])  # 21 nodes, ascending
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_WEIGHTS = np.zeros(21)
# Gauss nodes are the odd-indexed Kronrod abscissae (x_k[1], x_k[3], ...).
for _i, _w in enumerate(_WG):
    GAUSS_WEIGHTS[1 + 2 * _i] = _w
    GAUSS_WEIGHTS[19 - 2 * _i] = _w


class EvalCounter:
    """Shared integrand-evaluation budget."""

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget
        self.count = 0

    def charge(self, n: int) -> None:
        self.count += n
        if self.count > self.budget:
            raise BudgetExceeded(f"integrand evaluation budget of {self.budget} exceeded")


@dataclass
class QuadResult:
    value: float
    error: float
    evaluations: int = 0

    def __iter__(self):
        yield self.value
        yield self.error


def _panels(f, lo: np.ndarray, hi: np.ndarray, counter: EvalCounter):
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    x = c[:, None] + h[:, None] * NODES[None, :]
    counter.charge(x.size)
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    k = h * (y @ KRONROD_WEIGHTS)
    g = h * (y @ GAUSS_WEIGHTS)
    err = np.abs(k - g)
    if not np.all(np.isfinite(k)):
        raise ToleranceNotMet("integrand returned non-finite values")
    return k, err


def adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints,
    abs_tol: float = 1e-12,
    rel_tol: float = 0.0,
    counter: EvalCounter | None = None,
    max_panels: int = 50_000,
) -> QuadResult:
    """Globally adaptive G10/K21 quadrature of a vectorised real integrand.

    ``breakpoints`` is an increasing sequence; the initial panels are the
    intervals between consecutive points.
    """
    counter = counter or EvalCounter()
    start = counter.count
    bp = np.asarray(breakpoints, dtype=float)
    lo, hi = bp[:-1].copy(), bp[1:].copy()
    keep = hi > lo
    lo, hi = lo[keep], hi[keep]
    if lo.size == 0:
        return QuadResult(0.0, 0.0, 0)
    vals, errs = _panels(f, lo, hi, counter)
    while True:
        total = math.fsum(vals)
        err = float(errs.sum())
        target = max(abs_tol, rel_tol * abs(total))
        if err <= target:
            return QuadResult(total, err, counter.count - start)
        if lo.size > max_panels:
            raise ToleranceNotMet(
                f"adaptive quadrature stalled at error {err:.3g} > {target:.3g} with {lo.size} panels"
            )
        order = np.argsort(errs)[::-1]
        csum = np.cumsum(errs[order])
        # split the fewest worst panels that leave at most half the target behind
        n_split = int(np.searchsorted(csum, err - 0.5 * target, side="left")) + 1
        n_split = min(max(n_split, 1), order.size)
        idx = order[:n_split]
        mid = 0.5 * (lo[idx] + hi[idx])
        if np.any((mid <= lo[idx]) | (mid >= hi[idx])):
            raise ToleranceNotMet(f"panel width underflow at error {err:.3g} > {target:.3g}")
        new_lo = np.concatenate([lo[idx], mid])
        new_hi = np.concatenate([mid, hi[idx]])
        nv, ne = _panels(f, new_lo, new_hi, counter)
        mask = np.ones(lo.size, dtype=bool)
        mask[idx] = False
        lo = np.concatenate([lo[mask], new_lo])
        hi = np.concatenate([hi[mask], new_hi])
        vals = np.concatenate([vals[mask], nv])
        errs = np.concatenate([errs[mask], ne])


def _epsilon_table(s: list[float]) -> float:
    prev = [0.0] * (len(s) + 1)
    cur = s[:]
    best = s[-1]
    col = 0
    while len(cur) > 1:
        nxt = []
        for j in range(len(cur) - 1):
            d = cur[j + 1] - cur[j]
            nxt.append(math.inf if d == 0.0 else prev[j + 1] + 1.0 / d)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0 and cur and math.isfinite(cur[-1]):
            best = cur[-1]
    return best


def wynn_epsilon(partial_sums) -> tuple[float, float]:
    """Wynn epsilon extrapolation of a sequence of partial sums.

    Returns the extrapolated limit and, as error estimate, the spread against
    the extrapolations of the two shorter prefixes.
    """
    s = [float(x) for x in partial_sums]
    if len(s) < 3:
        return s[-1], abs(s[-1] - s[-2]) if len(s) == 2 else math.inf
    e0 = _epsilon_table(s)
    e1 = _epsilon_table(s[:-1])
    e2 = _epsilon_table(s[:-2])
    return e0, abs(e0 - e1) + abs(e0 - e2)


def _weight(kind: str):
    return np.cos if kind == "cos" else np.sin


def fourier_tail(
    g: Callable[[np.ndarray], np.ndarray],
    t: float,
    kind: str,
    a: float,
    tol: float,
    counter: EvalCounter,
    max_segments: int = 4000,
) -> QuadResult:
    """int_a^inf g(w) cos|sin(w t) dw for t > 0 with a decaying envelope g.

    The range is cut at the zeros of the weight, the half-wave integrals are
    summed and the partial sums are extrapolated with the epsilon algorithm.
    """
    w = _weight(kind)
    period = math.pi / t
    offset = 0.5 * period if kind == "cos" else 0.0
    k0 = math.ceil((a - offset) / period)
    z0 = offset + k0 * period
    if z0 <= a:
        z0 += period

    def f(x):
        return g(x) * w(x * t)

    # geometric cuts keep the head resolved when the first zero lies far out
    n_cut = min(64, max(2, int(math.log2(z0 / a)) + 2))
    head = adaptive(f, np.geomspace(a, z0, n_cut + 1), abs_tol=0.1 * tol, counter=counter)
    sums = [head.value]
    seg_err = head.error
    running = head.value
    small_run = 0
    best, est_err = running, math.inf
    for j in range(max_segments):
        lo = z0 + j * period
        seg = adaptive(f, [lo, lo + 0.5 * period, lo + period],
                       abs_tol=0.1 * tol / (j + 1) ** 2, counter=counter)
        seg_err += seg.error
        running += seg.value
        sums.append(running)
        if abs(seg.value) <= 1e-3 * tol:
            small_run += 1
            if small_run >= 3:
                # envelope has died out; the raw sum is already converged
                best, est_err = running, 2.0 * abs(seg.value)
                break
        else:
            small_run = 0
        if len(sums) >= 5:
            best, est_err = wynn_epsilon(sums[-40:])
            if est_err <= 0.5 * tol and j >= 6:
                break
    else:
        if est_err > tol:
            raise ToleranceNotMet(
                f"oscillatory tail did not converge (estimate {est_err:.3g} > {tol:.3g})"
            )
    return QuadResult(best, est_err + seg_err)


def fourier_integral(
    g: Callable[[np.ndarray], np.ndarray],
    t: float,
    kind: str,
    split: float,
    tol: float,
    counter: EvalCounter | None = None,
) -> QuadResult:
    """int_0^inf g(w) cos|sin(w t) dw.

    On [0, split] the substitution w = u**2 removes square-root endpoint
    behaviour; beyond ``split`` the tail is handled by :func:`fourier_tail`
    or, when split*t is tiny (including t == 0), by the algebraic map w = split/u.
    """
    counter = counter or EvalCounter()
    start = counter.count
    if kind == "sin" and t == 0.0:
        return QuadResult(0.0, 0.0, 0)
    sign = 1.0
    if t < 0:
        t = -t
        if kind == "sin":
            sign = -1.0
    w = _weight(kind)

    def head_f(u):
        om = u * u
        return 2.0 * u * g(om) * w(om * t)

    n_head = max(4, int(math.ceil(split * t / math.pi)) + 1)
    om_bp = np.linspace(0.0, split, n_head + 1)
    head = adaptive(head_f, np.sqrt(om_bp), abs_tol=0.25 * tol, counter=counter)

    if split * t <= SLOW_WEIGHT:
        # weight barely varies before the envelope has decayed: map w = split/u
        def tail_f(u):
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                om = split / u
                y = g(om) * w(om * t) * split / (u * u)
            return np.where(np.isfinite(y), y, 0.0)

        tail = adaptive(tail_f, np.linspace(0.0, 1.0, 9), abs_tol=0.25 * tol, counter=counter)
    else:
        tail = fourier_tail(g, t, kind, split, 0.5 * tol, counter)
    return QuadResult(sign * (head.value + tail.value), head.error + tail.error,
                      counter.count - start)
