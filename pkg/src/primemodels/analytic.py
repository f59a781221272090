"""
Logarithmic integrals, partial sums of 1/ln^p, Euler-Maclaurin constants and
the two-sided normal coverage function.

Li(x) here is the offset integral from 2 to x of dt/ln t, and li2(x) the same
with ln^2 t.  Both are integrated in the variable u = ln t, where the
integrand e^u / u^p is smooth on [ln 2, ln x], with a globally adaptive
Gauss-Kronrod (7, 15) rule that bisects the worst subinterval.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

LN2 = math.log(2.0)

# Kronrod 15-point abscissae (nonnegative half) and weights; the Gauss 7-point
# rule uses the odd-indexed abscissae.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
# Gauss nodes sit at positions 1, 3, 5 (negative side), 7 (centre), 9, 11, 13
_GW[[1, 3, 5]] = _WG[:3]
_GW[7] = _WG[3]
_GW[[13, 11, 9]] = _WG[:3]

# rounding floor: error targets below this fraction of |value| are not
# resolvable in double precision
REL_FLOOR = 1e-14
MAX_SUBINTERVALS = 4000
DIRECT_SUM_CAP = 10**9
SUM_CHUNK = 1 << 20


class QuadratureError(RuntimeError):
    """Requested tolerance not reached within the subinterval budget."""


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_bound: float
    evaluations: int


@dataclass(frozen=True)
class EmConstantEstimate:
    """Euler-Maclaurin constant of F = 1/ln^p (or 1/ln - 1/ln^2) from A.

    ``raw`` is sum_{i=0..n} F(A+i) - int_A^{A+n} F.  ``estimate`` removes the
    endpoint terms F(A+n)/2 + F'(A+n)/12 that ``raw`` still carries at finite
    n, so it converges like F''' instead of like F.
    """

    power: int
    lower_limit: float
    n: int
    raw: float
    estimate: float
    stated_bound: float
    composite: bool = False


def _gk15(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    fx = f(centre + half * _NODES)
    k = half * float(_KW @ fx)
    g = half * float(_GW @ fx)
    return k, abs(k - g)


def integrate(
    f: Callable[[np.ndarray], np.ndarray], a: float, b: float, tol: float,
    max_subintervals: int = MAX_SUBINTERVALS,
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integral of a vectorised ``f`` over ``[a, b]``.

    Stops when the summed |K15 - G7| estimate falls below
    ``max(tol, REL_FLOOR * |value|)``.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    val, err = _gk15(f, a, b)
    # max-heap on error
    heap = [(-err, a, b, val)]
    total_val, total_err = val, err
    evals = 15
    while True:
        target = max(tol, REL_FLOOR * abs(total_val))
        if total_err <= target:
            break
        if len(heap) >= max_subintervals:
            raise QuadratureError(
                f"error estimate {total_err:.3g} above target {target:.3g} "
                f"after {len(heap)} subintervals"
            )
        neg_err, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        evals += 30
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        # resum rather than update in place to avoid drift
        total_val = math.fsum(item[3] for item in heap)
        total_err = math.fsum(-item[0] for item in heap)
    return QuadratureResult(total_val, total_err, evals)


def _inv_log_power_integral(a: float, b: float, p: int, tol: float) -> QuadratureResult:
    """Integral of dt / ln^p t over [a, b] (a > 1), substituted t = e^u."""
    if a <= 1:
        raise ValueError(f"lower limit must exceed 1, got {a}")
    return integrate(lambda u: np.exp(u) / u**p, math.log(a), math.log(b), tol)


def li(x: float, tol: float = 1e-9) -> QuadratureResult:
    """Offset logarithmic integral Li(x) = int_2^x dt / ln t."""
    if x < 2:
        raise ValueError(f"li needs x >= 2, got {x}")
    if x == 2:
        return QuadratureResult(0.0, 0.0, 0)
    return _inv_log_power_integral(2.0, x, 1, tol)


def li2(x: float, tol: float = 1e-9) -> QuadratureResult:
    """int_2^x dt / ln^2 t."""
    if x < 2:
        raise ValueError(f"li2 needs x >= 2, got {x}")
    if x == 2:
        return QuadratureResult(0.0, 0.0, 0)
    return _inv_log_power_integral(2.0, x, 2, tol)


def li_value(x: float) -> float:
    return li(x).value


def li2_value(x: float) -> float:
    return li2(x).value


def _sum_inv_log_range(lo: int, hi: int, p: int) -> float:
    """Compensated sum of 1/ln^p(i) over lo <= i <= hi."""
    parts = []
    for a in range(lo, hi + 1, SUM_CHUNK):
        b = min(a + SUM_CHUNK, hi + 1)
        parts.append(math.fsum(np.log(np.arange(a, b, dtype=np.float64)) ** -p))
    return math.fsum(parts)


def partial_sum_inv_log(x: int, p: int, start: int = 2) -> float:
    """sum_{i=start}^{x} 1 / ln^p(i) by direct compensated summation."""
    if p not in (1, 2):
        raise ValueError(f"p must be 1 or 2, got {p}")
    if x < 3:
        raise ValueError(f"x must be >= 3, got {x}")
    if x >= DIRECT_SUM_CAP:
        raise ValueError(f"x={x} too large for direct summation (cap {DIRECT_SUM_CAP})")
    if start < 2:
        raise ValueError(f"start must be >= 2, got {start}")
    return _sum_inv_log_range(start, x, p)


def _log_power(p: int, composite: bool):
    if composite:
        f = lambda t: 1.0 / math.log(t) - 1.0 / math.log(t) ** 2
        df = lambda t: (2.0 - math.log(t)) / (t * math.log(t) ** 3)
        fv = lambda t: 1.0 / np.log(t) - 1.0 / np.log(t) ** 2
    else:
        f = lambda t: math.log(t) ** -p
        df = lambda t: -p / (t * math.log(t) ** (p + 1))
        fv = lambda t: np.log(t) ** -p
    return f, df, fv


def em_constant_estimate(p: int, A: float, n: int, composite: bool = False) -> EmConstantEstimate:
    """Estimate lim_n [sum_{i=0}^n F(A+i) - int_A^{A+n} F] for F = 1/ln^p.

    With ``composite=True`` F is 1/ln - 1/ln^2, which only decreases for
    t > e^2, so A must be at least 8.
    """
    if p not in (1, 2):
        raise ValueError(f"p must be 1 or 2, got {p}")
    if n < 1000:
        raise ValueError(f"n must be >= 1000, got {n}")
    if composite and A < 8:
        raise ValueError(f"1/ln - 1/ln^2 is monotone only past e^2; need A >= 8, got {A}")
    if A < 2:
        raise ValueError(f"A must be >= 2, got {A}")
    f, df, fv = _log_power(p, composite)
    end = A + n
    if float(A).is_integer():
        a = int(A)
        if composite:
            s = _sum_inv_log_range(a, a + n, 1) - _sum_inv_log_range(a, a + n, 2)
        else:
            s = _sum_inv_log_range(a, a + n, p)
    else:
        s = math.fsum(
            math.fsum(fv(A + np.arange(i, min(i + SUM_CHUNK, n + 1), dtype=np.float64)))
            for i in range(0, n + 1, SUM_CHUNK)
        )
    if composite:
        integral = (end / math.log(end) - A / math.log(A))
    else:
        integral = _inv_log_power_integral(A, end, p, 1e-10).value
    raw = s - integral
    est = raw - f(end) / 2 - df(end) / 12
    bound = assertion3_bound(1 if composite else p)
    return EmConstantEstimate(p, float(A), n, raw, est, bound, composite)


@lru_cache(maxsize=None)
def em_constant(p: int, n: int = 10**7) -> float:
    """Cached Euler-Maclaurin constant for 1/ln^p from A = 2."""
    return em_constant_estimate(p, 2, n).estimate


def assertion2_bound(p: int, A: float) -> float:
    """F(A)/2 + |F'(A)|/12 for F = 1/ln^p."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if A <= 1:
        raise ValueError(f"A must exceed 1 (log singularity), got {A}")
    lnA = math.log(A)
    return 0.5 / lnA**p + p / (A * lnA ** (p + 1)) / 12


def assertion3_bound(p: int) -> float:
    """0.6202 * F(p + 1) with F = 1/ln^p."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return 0.6202 / math.log(p + 1) ** p


def small_range_sum_vs_integral() -> dict[str, float]:
    """Sum and integral of 1/ln - 1/ln^2 over the non-monotone stretch [2, 7].

    The discrete sum is reported under both endpoint conventions.
    """
    g = lambda i: 1 / math.log(i) - 1 / math.log(i) ** 2
    return {
        "sum_2_to_7": math.fsum(g(i) for i in range(2, 8)),
        "sum_2_to_6": math.fsum(g(i) for i in range(2, 7)),
        "integral_2_to_7": 7 / math.log(7) - 2 / LN2,
        "reported_sum": 0.117,
        "reported_integral": 0.7119,
    }


def normal_module_cdf(C: float) -> float:
    """P(|Z| < C) for a standard normal Z."""
    if C < 0 or math.isnan(C):
        raise ValueError(f"C must be >= 0, got {C}")
    return math.erf(C / math.sqrt(2.0))


def choose_c_for_coverage(target: float) -> float:
    """Smallest C with ``normal_module_cdf(C) >= target``, by bisection."""
    if not 0 < target < 1:
        raise ValueError(f"target must lie in (0, 1), got {target}")
    lo, hi = 0.0, 1.0
    while normal_module_cdf(hi) < target:
        hi *= 2
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if normal_module_cdf(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi
