"""
Desk-scale checks of the consequences drawn from the models: Legendre's
conjecture, gap-width comparisons, the Littlewood ratio, the sign of
Li(x) - pi(x), Chebyshev's bounds, the mod-4 residue race and
Elliott-Halberstam sums with their majorant chain.

Nothing here proves anything; each function evaluates an inequality at
concrete x and reports what it finds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy.optimize import brentq

from . import analytic
from .primes import (
    PrimeCountTable,
    iter_primes,
    iter_segments,
    prime_count,
    primes_in_interval,
    residue_counts,
    totient,
    totient_table,
)

CHEBYSHEV_LOWER = 0.921
CHEBYSHEV_UPPER = 1.106
CHEBYSHEV_FLOOR = 10**5
EH_WORK_BOUND = 10**4
E_E = math.exp(math.e)


@dataclass
class LegendreScan:
    n_max: int
    all_pass: bool
    # witnesses[n - 1] is the smallest prime in (n^2, (n+1)^2), or None
    witnesses: list[int | None]

    def failures(self) -> list[int]:
        return [n for n, w in enumerate(self.witnesses, 1) if w is None]


@dataclass(frozen=True)
class IntervalCheck:
    x: int
    C: float
    interval_len: float
    found: bool
    prime: int | None


@dataclass(frozen=True)
class GapBoundTriple:
    x: int
    riemann_gap: float
    model_gap: float
    cramer_gap: float
    A: float
    B: float
    C: float
    ordering_holds: bool
    # ordering holds for every x above this (None if not found below 1e18)
    threshold: float | None


@dataclass(frozen=True)
class ChebyshevCheck:
    x: int
    pi_x: int
    ratio: float
    lower_ok: bool
    upper_ok: bool


@dataclass(frozen=True)
class ResidueRace:
    x: int
    count_1: int
    count_3: int
    difference: int
    # difference / (sqrt(x) lnlnln x / ln x), defined for x > e^e
    normalized: float | None


@dataclass
class EhSumRecord:
    x: int
    a: float
    A_exp: float
    k_max: int
    sum: float
    # x / ln^A x, the bound with C = 1
    bound: float
    fitted_C: float
    li_x: float
    max_dev: list[float] = field(repr=False, default_factory=list)
    argmax_l: list[int] = field(repr=False, default_factory=list)


@dataclass
class EhBoundReport:
    x: int
    a: float
    A_exp: float
    eh_sum: float
    majorant: float  # sum_k sqrt(Li(x)/phi(k))
    weak_C1: float  # smallest C1 with max_l dev <= C1 sqrt(Li/phi(k)) for all k
    power_form: float  # x^((a+1)/2)
    target: float  # x / ln^A x
    crossover: float
    assertable: bool
    landau_C3: float
    inv_sqrt_phi_sum: float
    landau_middle: float
    landau_rhs: float
    inv_sqrt_sum: float
    checks: dict[str, bool] = field(default_factory=dict)
    reported: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _all_primes_below(hi: int) -> np.ndarray:
    chunks = list(iter_primes(2, hi))
    return np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)


def legendre_scan(n_max: int) -> LegendreScan:
    """Look for a prime strictly between n^2 and (n+1)^2 for every n <= n_max."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    primes = _all_primes_below((n_max + 1) ** 2)
    n = np.arange(1, n_max + 1, dtype=np.int64)
    idx = np.searchsorted(primes, n * n, side="right")
    witnesses: list[int | None] = []
    for i, j in zip(n.tolist(), idx.tolist()):
        if j < primes.size and primes[j] < (i + 1) ** 2:
            witnesses.append(int(primes[j]))
        else:
            witnesses.append(None)
    return LegendreScan(n_max, all(w is not None for w in witnesses), witnesses)


def model_gap_width(x: float, C: float) -> float:
    """C * sqrt(Li(x) - Li(x)^2 / x)."""
    li_x = analytic.li_value(x)
    return C * math.sqrt(li_x - li_x * li_x / x)


def interval_prime_check(x: int, C: float) -> IntervalCheck:
    """Find a prime in (x, x + C sqrt(Li(x) - Li(x)^2/x)]."""
    if x < 100:
        raise ValueError(f"x must be >= 100, got {x}")
    if not C > 0:
        raise ValueError(f"C must be positive, got {C}")
    length = model_gap_width(x, C)
    if length < 1:
        raise ValueError(f"degenerate interval: length {length:.3g} < 1 for C={C}")
    hi = x + math.floor(length)
    _, first = primes_in_interval(x, hi + 1)
    return IntervalCheck(x, C, length, first is not None, first)


def _gap_widths(x: float, A: float, B: float, C: float) -> tuple[float, float, float]:
    lx = math.log(x)
    return A * math.sqrt(x) * lx, model_gap_width(x, C), B * lx * lx


def _ordering(x: float, A: float, B: float, C: float) -> bool:
    r, m, c = _gap_widths(x, A, B, C)
    return c < m < r


@lru_cache(maxsize=64)
def gap_ordering_threshold(A: float, B: float, C: float, top_exp: float = 18.0) -> float | None:
    """Smallest x past which B ln^2 x < C sqrt(D1(x)) < A sqrt(x) ln x keeps holding.

    Scanned on a log grid (20 points per decade from 10 to 10**top_exp) and
    refined by bisection at the last sign change.
    """
    exps = np.arange(1.0, top_exp + 1e-9, 0.05)
    ok = [_ordering(10.0**e, A, B, C) for e in exps]
    if not ok[-1]:
        return None
    last_bad = max((i for i, v in enumerate(ok) if not v), default=None)
    if last_bad is None:
        return 10.0
    lo, hi = exps[last_bad], exps[last_bad + 1]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _ordering(10.0**mid, A, B, C):
            hi = mid
        else:
            lo = mid
    return float(10.0**hi)


def gap_bound_triple(x: int, A: float = 1.0, B: float = 1.0, C: float = 1.0) -> GapBoundTriple:
    """The three gap widths at x and where their ordering sets in."""
    if x < 1000:
        raise ValueError(f"x must be >= 1000, got {x}")
    if min(A, B, C) <= 0:
        raise ValueError(f"constants must be positive, got A={A}, B={B}, C={C}")
    r, m, c = _gap_widths(x, A, B, C)
    return GapBoundTriple(x, r, m, c, A, B, C, c < m < r, gap_ordering_threshold(A, B, C))


def littlewood_ratio(x: float) -> float:
    """x (lnlnln x)^2 / (ln^2 x (Li(x) - li2(x))).

    The integral difference is taken in its closed form x/ln x - 2/ln 2.
    """
    if x < 1e4:
        raise ValueError(f"x must be >= 1e4, got {x}")
    lx = math.log(x)
    lll = math.log(math.log(lx))
    return x * lll * lll / (lx * lx * (x / lx - 2 / analytic.LN2))


def li_expansion_constant(x: float) -> float:
    """C(x) solving Li(x) = x/ln x + C x / ln^2 x."""
    lx = math.log(x)
    return (analytic.li_value(x) - x / lx) * lx * lx / x


def li_minus_pi_sign(checkpoints: Iterable[int], table: PrimeCountTable | None = None) -> list[dict]:
    """Li(x) - pi(x) at each checkpoint; ``positive`` flags the sign."""
    xs = sorted(set(int(x) for x in checkpoints))
    for x in xs:
        if x < 2 or x > 10**9:
            raise ValueError(f"checkpoints must lie in [2, 1e9], got {x}")
    rows = []
    for x in xs:
        pi_x = table.pi(x) if table is not None and x in table.checkpoints else prime_count(x)
        li_x = analytic.li_value(x)
        rows.append({"x": x, "li": li_x, "pi": pi_x, "diff": li_x - pi_x, "positive": li_x - pi_x > 0})
    return rows


def chebyshev_bounds_check(x: int, pi_x: int | None = None) -> ChebyshevCheck:
    """Check 0.921 x/ln x < pi(x) < 1.106 x/ln x."""
    if x < CHEBYSHEV_FLOOR:
        raise ValueError(f"Chebyshev constants are only checked for x >= {CHEBYSHEV_FLOOR}, got {x}")
    if pi_x is None:
        pi_x = prime_count(x)
    base = x / math.log(x)
    return ChebyshevCheck(x, pi_x, pi_x / base, CHEBYSHEV_LOWER * base < pi_x, pi_x < CHEBYSHEV_UPPER * base)


def residue_race(x: int) -> ResidueRace:
    """|pi(x; 4, 1) - pi(x; 4, 3)| with its Littlewood normalisation."""
    if x < 10:
        raise ValueError(f"x must be >= 10, got {x}")
    c = residue_counts(x, 4)
    diff = abs(int(c[1]) - int(c[3]))
    norm = None
    if x > E_E:
        lx = math.log(x)
        norm = diff / (math.sqrt(x) * math.log(math.log(lx)) / lx)
    return ResidueRace(x, int(c[1]), int(c[3]), diff, norm)


def eh_k_max(x: int, a: float) -> int:
    """floor(x^a), robust to rounding when x^a is an integer."""
    k = int(math.floor(x**a))
    while (k + 1) ** (1 / a) <= x * (1 + 1e-12):
        k += 1
    while k > 0 and k ** (1 / a) > x * (1 + 1e-12):
        k -= 1
    return k


def _residue_count_tables(x: int, k_max: int) -> list[np.ndarray]:
    """counts[k][l] = pi(x; k, l) for every 1 <= k <= k_max, from one sieve pass."""
    tables = [np.zeros(k, dtype=np.int64) for k in range(1, k_max + 1)]
    for seg in iter_segments(2, x + 1):
        ps = seg.primes()
        for k, t in enumerate(tables, 1):
            t += np.bincount(ps % k, minlength=k)
    return tables


def eh_sum(x: int, a: float, A_exp: float = 2.0) -> EhSumRecord:
    """sum over 1 <= k <= x^a of max_l |pi(x; k, l) - Li(x)/phi(k)|."""
    if not 0 < a < 1:
        raise ValueError(f"a must lie in (0, 1), got {a}")
    if x < 1000:
        raise ValueError(f"x must be >= 1000, got {x}")
    k_max = eh_k_max(x, a)
    if k_max > EH_WORK_BOUND:
        raise ValueError(f"x^a = {k_max} exceeds the work bound {EH_WORK_BOUND}")
    li_x = analytic.li_value(x)
    devs, args = [], []
    for k, counts in enumerate(_residue_count_tables(x, k_max), 1):
        dev, l = _max_dev(counts, k, li_x)
        devs.append(dev)
        args.append(l)
    total = math.fsum(devs)
    bound = x / math.log(x) ** A_exp
    return EhSumRecord(x, a, A_exp, k_max, total, bound, total / bound, li_x, devs, args)


def _max_dev(counts: np.ndarray, k: int, li_x: float) -> tuple[float, int]:
    expected = li_x / totient(k)
    best, arg = -1.0, 0
    for l in range(k):
        if math.gcd(k, l) == 1:
            d = abs(int(counts[l]) - expected)
            if d > best:
                best, arg = d, l
    return best, arg


def eh_sum_bruteforce(x: int, a: float) -> float:
    """Same sum by explicit enumeration over every (k, l) pair.

    Independent of the sieve and the bucketing: primes come from trial
    division and each class is counted with its own filter.  Only for small x.
    """
    if x > 10**5:
        raise ValueError("brute-force EH sum is limited to x <= 1e5")
    primes = [n for n in range(2, x + 1) if all(n % d for d in range(2, math.isqrt(n) + 1))]
    li_x = analytic.li_value(x)
    terms = []
    for k in range(1, eh_k_max(x, a) + 1):
        phi = sum(1 for j in range(1, k + 1) if math.gcd(j, k) == 1)
        best = 0.0
        for l in range(k):
            if math.gcd(k, l) != 1:
                continue
            c = sum(1 for p in primes if p % k == l)
            best = max(best, abs(c - li_x / phi))
        terms.append(best)
    return math.fsum(terms)


@lru_cache(maxsize=8)
def landau_constant(n_max: int = 10**6) -> tuple[float, int]:
    """min over 3 <= n <= n_max of phi(n) lnln n / n, with its argmin."""
    if n_max < 3:
        raise ValueError(f"n_max must be >= 3, got {n_max}")
    phi = totient_table(n_max)
    n = np.arange(3, n_max + 1, dtype=np.float64)
    vals = phi[3:] * np.log(np.log(n)) / n
    i = int(np.argmin(vals))
    return float(vals[i]), i + 3


def power_log_crossover(a: float, A_exp: float) -> float:
    """Smallest x beyond which x^((1-a)/2) > ln^A x holds for good.

    Solved in u = ln x, where g(u) = (1-a)/2 u - A ln u is convex with its
    minimum at u* = 2A/(1-a); the crossover is the root of g right of u*.
    """
    if not 0 < a < 1 or A_exp <= 0:
        raise ValueError(f"need 0 < a < 1 and A > 0, got a={a}, A={A_exp}")
    s = (1 - a) / 2
    g = lambda u: s * u - A_exp * math.log(u)
    u_star = A_exp / s
    if g(u_star) > 0:
        # holds for every x > e (ln^A x defined and the inequality never fails)
        return math.e
    hi = 2 * u_star
    while g(hi) <= 0:
        hi *= 2
    return math.exp(brentq(g, u_star, hi, xtol=1e-12, rtol=1e-14))


def eh_bound_check(rec: EhSumRecord, A_exp: float | None = None, landau_n: int = 10**6) -> EhBoundReport:
    """Evaluate the majorant chain behind the EH bound at the record's x.

    Asserted (hold at any x): the weak estimate with the fitted C1, the
    Landau-based bound on sum 1/sqrt(phi(k)) and sum_{3<=k<=y} 1/sqrt(k) <=
    2 sqrt(y).  The final comparison with x / ln^A x is only asserted when x
    lies beyond the power-versus-log crossover.
    """
    A = rec.A_exp if A_exp is None else A_exp
    x, a, k_max = rec.x, rec.a, rec.k_max
    phis = np.array([totient(k) for k in range(1, k_max + 1)], dtype=np.float64)
    scales = np.sqrt(rec.li_x / phis)
    majorant = math.fsum(scales)
    weak_C1 = float(max(d / s for d, s in zip(rec.max_dev, scales)))
    power_form = x ** ((a + 1) / 2)
    target = x / math.log(x) ** A
    crossover = power_log_crossover(a, A)
    C3, _ = landau_constant(max(landau_n, k_max))
    ks = np.arange(3, k_max + 1, dtype=np.float64)
    inv_phi = math.fsum(1 / np.sqrt(phis))
    inv_sqrt = math.fsum(1 / np.sqrt(ks)) if ks.size else 0.0
    head = math.fsum(1 / np.sqrt(phis[:2]))
    middle = head + math.fsum(np.sqrt(np.log(np.log(ks)) / (C3 * ks))) if ks.size else head
    lnln_xa = math.log(a * math.log(x)) if a * math.log(x) > 1 else 0.0
    rhs = 2 + math.sqrt(lnln_xa / C3) * inv_sqrt
    rep = EhBoundReport(
        x, a, A, rec.sum, majorant, weak_C1, power_form, target, crossover,
        x > crossover, C3, inv_phi, middle, rhs, inv_sqrt,
    )
    rel = 1e-12
    rep.checks["sum<=C1*majorant"] = bool(rec.sum <= weak_C1 * majorant * (1 + rel))
    rep.checks["landau_chain"] = inv_phi <= middle * (1 + rel) and middle <= rhs * (1 + rel)
    rep.checks["inv_sqrt<=2sqrt(y)"] = inv_sqrt <= 2 * math.sqrt(k_max)
    if rep.assertable:
        rep.checks["majorant<=power_form"] = majorant <= power_form
        rep.checks["power_form<target"] = power_form < target
    rep.reported = {
        "fitted_C": rec.fitted_C,
        "majorant_over_power_form": majorant / power_form,
        "power_form_over_target": power_form / target,
    }
    return rep
