"""
Exact prime enumeration and counting.

Everything here is ground truth for the model checks: a segmented sieve of
Eratosthenes over ``[lo, hi)`` with base primes cached once, plus counting
helpers for pi(x), pi(x; k, l) and short intervals.  Counts are streamed
segment by segment; the full list of primes up to x is never held at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

INT64_MAX = 2**63 - 1
DEFAULT_SEGMENT_SIZE = 1 << 20
# hard cap on one segment's flag count (bytes of memory)
MAX_SEGMENT_SIZE = 1 << 28


@dataclass(frozen=True)
class SieveSegment:
    """Primality flags for the half-open range ``[lo, hi)``."""

    lo: int
    hi: int
    flags: np.ndarray = field(repr=False, compare=False)

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.flags).astype(np.int64) + self.lo

    def count(self) -> int:
        return int(np.count_nonzero(self.flags))


@dataclass(frozen=True)
class ProgressionClass:
    """Residue class ``l mod k`` with ``gcd(k, l) = 1``.

    ``k = 1`` is allowed with the single class ``l = 0``.
    """

    k: int
    l: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"modulus must be >= 1, got k={self.k}")
        if not 0 <= self.l < self.k:
            raise ValueError(f"residue must satisfy 0 <= l < k, got l={self.l}, k={self.k}")
        if math.gcd(self.k, self.l) != 1:
            raise ValueError(f"gcd(k, l) = {math.gcd(self.k, self.l)} != 1 for (k, l) = ({self.k}, {self.l})")

    @property
    def phi_k(self) -> int:
        return totient(self.k)


@dataclass
class PrimeCountTable:
    """pi(x) at increasing checkpoints, optionally with per-class counts.

    ``class_counts[k][j]`` is an array of length k holding pi(x_j; k, l) for
    every residue l (non-coprime residues hold at most one prime each).
    """

    checkpoints: list[int]
    counts: list[int]
    class_counts: dict[int, list[np.ndarray]] = field(default_factory=dict)

    def pi(self, x: int) -> int:
        return self.counts[self.checkpoints.index(x)]

    def pi_class(self, x: int, cls: ProgressionClass) -> int:
        return int(self.class_counts[cls.k][self.checkpoints.index(x)][cls.l])


def _check_int_range(name: str, v: int) -> None:
    if v > INT64_MAX:
        raise ValueError(f"{name}={v} exceeds the 64-bit limit 2**63 - 1")


@lru_cache(maxsize=8)
def _small_primes(limit: int) -> np.ndarray:
    """All primes <= limit by a plain sieve (limit is at most ~3e9, normally tiny)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def base_primes(hi: int) -> np.ndarray:
    """Primes up to sqrt(hi - 1), enough to sieve anything below ``hi``."""
    root = math.isqrt(max(hi - 1, 0))
    # round up to a power of two so the cache is reused across nearby calls
    limit = 1 << max(root, 1).bit_length()
    ps = _small_primes(limit)
    return ps[: np.searchsorted(ps, root, side="right")]


def sieve_segment(lo: int, hi: int, *, max_size: int = MAX_SEGMENT_SIZE) -> SieveSegment:
    """Mark the primes in ``[lo, hi)``.

    Raises ``ValueError`` on ``lo < 2``, ``hi <= lo``, a bound beyond 2**63 - 1
    or a range longer than ``max_size``.
    """
    if lo < 2 or hi <= lo:
        raise ValueError(f"need 2 <= lo < hi, got lo={lo}, hi={hi}")
    _check_int_range("hi", hi)
    if hi - lo > max_size:
        raise ValueError(f"segment length {hi - lo} exceeds cap {max_size}")
    flags = np.ones(hi - lo, dtype=bool)
    for p in base_primes(hi).tolist():
        start = max(p * p, -(-lo // p) * p)
        if start >= hi:
            # base primes are sorted, so later ones start even further out
            if p * p >= hi:
                break
            continue
        flags[start - lo :: p] = False
    return SieveSegment(lo, hi, flags)


def iter_segments(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> Iterator[SieveSegment]:
    """Sieve ``[lo, hi)`` in consecutive chunks of at most ``segment_size``."""
    lo = max(lo, 2)
    for a in range(lo, hi, segment_size):
        yield sieve_segment(a, min(a + segment_size, hi), max_size=segment_size)


def iter_primes(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> Iterator[np.ndarray]:
    """Yield int64 arrays of the primes in ``[lo, hi)``, one per segment."""
    for seg in iter_segments(lo, hi, segment_size):
        yield seg.primes()


def prime_count(x: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> int:
    """pi(x), the number of primes <= x."""
    if x < 2:
        return 0
    _check_int_range("x", x)
    return sum(seg.count() for seg in iter_segments(2, x + 1, segment_size))


def prime_count_table(
    checkpoints: Iterable[int],
    moduli: Sequence[int] = (),
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> PrimeCountTable:
    """Counts at every checkpoint from a single streaming pass.

    For each modulus in ``moduli`` the per-residue counts pi(x; k, l) are
    bucketed as well.
    """
    xs = sorted(set(int(x) for x in checkpoints))
    if not xs:
        raise ValueError("no checkpoints given")
    for k in moduli:
        if k < 1:
            raise ValueError(f"modulus must be >= 1, got {k}")
    running = 0
    buckets = {k: np.zeros(k, dtype=np.int64) for k in moduli}
    table = PrimeCountTable(xs, [], {k: [] for k in moduli})
    lo = 2
    for x in xs:
        hi = x + 1
        if hi > lo:
            for seg in iter_segments(lo, hi, segment_size):
                if moduli:
                    ps = seg.primes()
                    running += ps.size
                    for k, b in buckets.items():
                        b += np.bincount(ps % k, minlength=k)
                else:
                    running += seg.count()
            lo = hi
        table.counts.append(running)
        for k, b in buckets.items():
            table.class_counts[k].append(b.copy())
    return table


def residue_counts(x: int, k: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    """Array ``c`` of length k with ``c[l] = #{p <= x prime : p = l mod k}``."""
    if k < 1:
        raise ValueError(f"modulus must be >= 1, got {k}")
    counts = np.zeros(k, dtype=np.int64)
    if x < 2:
        return counts
    for ps in iter_primes(2, x + 1, segment_size):
        counts += np.bincount(ps % k, minlength=k)
    return counts


def prime_count_progression(x: int, cls: ProgressionClass, segment_size: int = DEFAULT_SEGMENT_SIZE) -> int:
    """pi(x; k, l), the number of primes p <= x with p = l (mod k)."""
    if not isinstance(cls, ProgressionClass):
        cls = ProgressionClass(*cls)
    if cls.k == 1:
        return prime_count(x, segment_size)
    return int(residue_counts(x, cls.k, segment_size)[cls.l])


def primes_in_interval(a: int, b: int) -> tuple[int, int | None]:
    """Count the primes in the open interval (a, b) and return the smallest one."""
    if a < 0 or b <= a:
        raise ValueError(f"need 0 <= a < b, got a={a}, b={b}")
    lo = max(a + 1, 2)
    if lo >= b:
        return 0, None
    count = 0
    first = None
    for ps in iter_primes(lo, b):
        if first is None and ps.size:
            first = int(ps[0])
        count += ps.size
    return count, first


def totient(k: int) -> int:
    """Euler's phi(k) by trial-division factorization."""
    if k < 1:
        raise ValueError(f"totient needs k >= 1, got {k}")
    result = k
    n = k
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if n > 1:
        result -= result // n
    return result


def totient_table(n: int) -> np.ndarray:
    """phi(0..n) as an int64 array via a linear-in-n sieve (phi(0) is set to 0)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    phi = np.arange(n + 1, dtype=np.int64)
    for p in _small_primes(n).tolist():
        phi[p::p] -= phi[p::p] // p
    return phi


def residue_max_deviation(
    x: int, k: int, li_x: float, counts: np.ndarray | None = None
) -> tuple[float, int]:
    """Largest |pi(x; k, l) - Li(x)/phi(k)| over residues l coprime to k.

    Ties go to the smallest l.  ``counts`` may carry precomputed residue
    counts (as returned by :func:`residue_counts`) to skip the sieve.
    """
    if k < 1:
        raise ValueError(f"modulus must be >= 1, got {k}")
    if x < k:
        raise ValueError(f"need x >= k, got x={x}, k={k}")
    if counts is None:
        counts = residue_counts(x, k)
    expected = li_x / totient(k)
    best, arg = -1.0, 0
    for l in range(k):
        if math.gcd(k, l) != 1:
            continue
        dev = abs(int(counts[l]) - expected)
        if dev > best:
            best, arg = dev, l
    return best, arg
