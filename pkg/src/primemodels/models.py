"""
Predicted moments of the four urn models of prime counts.

M1 (binomial, naturals)     mean Li(x),          var Li(x) - Li(x)^2 / x
M2 (Cramer, naturals)       mean sum p_i,        var sum p_i - sum p_i^2,   p_i = 1/ln i
M3 (binomial, progression)  mean Li(x)/phi(k),   var Li(x)/phi(k) - k Li(x)^2 / (phi(k)^2 x)
M4 (Cramer, progression)    mean Li(x)/phi(k),   var Li(x)/phi(k) - k/phi(k)^2 * li2(x)

M1 and M3 also have a CRUDE mode where the success probability is plain
1/ln x instead of the Li-corrected one.

Cramer probabilities above 1 (1/ln 2 and small members of a progression)
are not meaningful; urns are only opened from the first index whose raw
probability is below 1, and that start index is reported.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .analytic import normal_module_cdf
from .primes import ProgressionClass, totient

MIN_X = 10
# M2 switches from direct sums to li + Euler-Maclaurin constants above this
DIRECT_SUM_CROSSOVER = 10**7


class Variant(enum.Enum):
    M1_BINOMIAL_NATURAL = "M1"
    M2_CRAMER_NATURAL = "M2"
    M3_BINOMIAL_PROGRESSION = "M3"
    M4_CRAMER_PROGRESSION = "M4"

    @property
    def progression(self) -> bool:
        return self in (Variant.M3_BINOMIAL_PROGRESSION, Variant.M4_CRAMER_PROGRESSION)

    @property
    def cramer(self) -> bool:
        return self in (Variant.M2_CRAMER_NATURAL, Variant.M4_CRAMER_PROGRESSION)


class SuccessProbMode(enum.Enum):
    CRUDE_INV_LOG = "crude"
    LI_CORRECTED = "li"


@dataclass(frozen=True)
class ModelKind:
    variant: Variant
    success_prob_mode: SuccessProbMode = SuccessProbMode.LI_CORRECTED

    @property
    def name(self) -> str:
        if self.variant.cramer or self.success_prob_mode is SuccessProbMode.LI_CORRECTED:
            return self.variant.value
        return f"{self.variant.value}-crude"

    @classmethod
    def parse(cls, text: str) -> "ModelKind":
        """'M1', 'M1-crude', 'M2', ... as printed by :attr:`name`."""
        base, _, mode = text.strip().upper().partition("-")
        variant = Variant(base)
        if mode == "CRUDE":
            return cls(variant, SuccessProbMode.CRUDE_INV_LOG)
        if mode:
            raise ValueError(f"unknown model mode {mode!r}")
        return cls(variant)


M1 = ModelKind(Variant.M1_BINOMIAL_NATURAL)
M1_CRUDE = ModelKind(Variant.M1_BINOMIAL_NATURAL, SuccessProbMode.CRUDE_INV_LOG)
M2 = ModelKind(Variant.M2_CRAMER_NATURAL)
M3 = ModelKind(Variant.M3_BINOMIAL_PROGRESSION)
M3_CRUDE = ModelKind(Variant.M3_BINOMIAL_PROGRESSION, SuccessProbMode.CRUDE_INV_LOG)
M4 = ModelKind(Variant.M4_CRAMER_PROGRESSION)


@dataclass(frozen=True)
class ModelMoments:
    mean: float
    variance: float
    x: int
    model: ModelKind
    cls: ProgressionClass | None = None
    # quadrature/boundary slack carried by the values
    error_bound: float = 0.0
    start_index: int | None = None

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class DeviationBand:
    center: float
    halfwidth: float
    C: float
    coverage: float

    @property
    def lo(self) -> float:
        return self.center - self.halfwidth

    @property
    def hi(self) -> float:
        return self.center + self.halfwidth

    def contains(self, value: float) -> bool:
        return abs(value - self.center) < self.halfwidth


@dataclass
class VarianceChainReport:
    x: int
    li: float
    d1: float
    d2: float
    cls: ProgressionClass | None = None
    d3: float | None = None
    d4: float | None = None
    li_over_phi: float | None = None
    slack: float = 0.0
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def cramer_probabilities(x: int, cls: ProgressionClass | None = None) -> tuple[int, np.ndarray]:
    """Urn probabilities of the Cramer models up to x.

    Returns ``(start, p)`` where ``p[j]`` belongs to the j-th member
    ``m_j = start + j * k`` of the progression (k = 1 for the naturals) and
    ``start`` is the first member >= 2 with raw probability below 1.
    """
    if cls is None:
        cls = ProgressionClass(1, 0)
    k, l = cls.k, cls.l
    scale = k / totient(k)
    # smallest member m of l mod k with m >= 2 and scale / ln m < 1
    m_min = max(2, math.floor(math.exp(scale)) + 1)
    start = m_min + ((l - m_min) % k)
    if start > x:
        return start, np.empty(0)
    members = np.arange(start, x + 1, k, dtype=np.float64)
    return start, scale / np.log(members)


def _check_class(model: ModelKind, cls: ProgressionClass | None, x: int) -> None:
    if model.variant.progression:
        if cls is None:
            raise ValueError(f"{model.name} needs a progression class")
        if x < MIN_X * cls.k:
            raise ValueError(f"{model.name} needs x/k >= {MIN_X}, got x={x}, k={cls.k}")
    elif cls is not None:
        raise ValueError(f"{model.name} takes no progression class")
    if x < MIN_X:
        raise ValueError(f"x must be >= {MIN_X}, got {x}")


def _m2_moments(x: int, crossover: int) -> tuple[float, float, float, int]:
    start, _ = cramer_probabilities(min(x, 10))
    if x <= crossover:
        s1 = analytic.partial_sum_inv_log(x, 1, start)
        s2 = analytic.partial_sum_inv_log(x, 2, start)
        return s1, s1 - s2, 1e-9 * s1, start
    # integral form: sum_{i=2}^x F(i) = int_2^x F + C_F + F(x)/2 + F'(x)/12 + ...
    lx = math.log(x)
    head1 = math.fsum(1 / math.log(i) for i in range(2, start))
    head2 = math.fsum(1 / math.log(i) ** 2 for i in range(2, start))
    r1 = analytic.li(x)
    r2 = analytic.li2(x)
    c1, c2 = analytic.em_constant(1), analytic.em_constant(2)
    s1 = r1.value + c1 + 0.5 / lx - 1 / (12 * x * lx**2) - head1
    s2 = r2.value + c2 + 0.5 / lx**2 - 2 / (12 * x * lx**3) - head2
    return s1, s1 - s2, r1.abs_error_bound + r2.abs_error_bound + 1e-6, start


def model_moments(
    model: ModelKind,
    x: int,
    cls: ProgressionClass | None = None,
    *,
    crossover: int = DIRECT_SUM_CROSSOVER,
) -> ModelMoments:
    """Mean and variance of the modelled prime count up to x."""
    _check_class(model, cls, x)
    v = model.variant
    crude = model.success_prob_mode is SuccessProbMode.CRUDE_INV_LOG
    lx = math.log(x)
    if v is Variant.M2_CRAMER_NATURAL:
        mean, var, err, start = _m2_moments(x, crossover)
        return ModelMoments(mean, var, x, model, None, err, start)

    if v is Variant.M1_BINOMIAL_NATURAL:
        if crude:
            mean = x / lx
            return ModelMoments(mean, mean * (1 - 1 / lx), x, model)
        r = analytic.li(x)
        return ModelMoments(r.value, r.value - r.value**2 / x, x, model, None, 2 * r.abs_error_bound)

    k = cls.k
    phi = totient(k)
    if v is Variant.M3_BINOMIAL_PROGRESSION:
        if crude:
            p = k / (phi * lx)
            mean = x * p / k
            return ModelMoments(mean, mean * (1 - p), x, model, cls)
        r = analytic.li(x)
        mean = r.value / phi
        var = mean - k * r.value**2 / (phi**2 * x)
        return ModelMoments(mean, var, x, model, cls, 2 * r.abs_error_bound)

    # M4: integral form over [2, x]; the dropped boundary pieces
    # int_2^{k+l} are bounded by (k + l - 2)/ln^p 2
    r1, r2 = analytic.li(x), analytic.li2(x)
    mean = r1.value / phi
    var = mean - k / phi**2 * r2.value
    boundary = (k + cls.l - 2) / analytic.LN2 / phi if k + cls.l > 2 else 0.0
    start, _ = cramer_probabilities(min(x, 10 * k), cls)
    if var <= 0:
        raise ValueError(f"M4 variance nonpositive at x={x}, k={k}; x too small for this modulus")
    return ModelMoments(mean, var, x, model, cls, r1.abs_error_bound + r2.abs_error_bound + boundary, start)


def deviation_band(moments: ModelMoments, C: float) -> DeviationBand:
    """The interval mean +/- C sd with its normal coverage F(C)."""
    if not C > 0:
        raise ValueError(f"C must be positive, got {C}")
    return DeviationBand(moments.mean, C * moments.sd, C, normal_module_cdf(C))


def z_score(actual: float, moments: ModelMoments) -> float:
    if moments.variance <= 0:
        raise ValueError("z-score undefined for zero variance")
    return (actual - moments.mean) / moments.sd


def variance_chain_check(x: int, cls: ProgressionClass | None = None, rel_slack: float = 1e-6) -> VarianceChainReport:
    """Evaluate D2 <= D1 <= Li(x) and, with a class, D4 < D3 < Li(x)/phi(k).

    Inequalities allow ``rel_slack`` relative to Li(x) plus the quadrature
    error bounds of the compared values.
    """
    if x < MIN_X:
        raise ValueError(f"x must be >= {MIN_X}, got {x}")
    m1 = model_moments(M1, x)
    m2 = model_moments(M2, x)
    li_x = m1.mean
    slack = rel_slack * li_x + m1.error_bound + m2.error_bound
    rep = VarianceChainReport(x, li_x, m1.variance, m2.variance, slack=slack)
    rep.checks["D2<=D1"] = m2.variance <= m1.variance + slack
    rep.checks["D1<=Li"] = m1.variance <= li_x + slack
    if cls is not None:
        m3 = model_moments(M3, x, cls)
        m4 = model_moments(M4, x, cls)
        rep.cls = cls
        rep.d3, rep.d4 = m3.variance, m4.variance
        rep.li_over_phi = li_x / totient(cls.k)
        # the strict checks use the quadrature error only; boundary slack is
        # about model fidelity, not about the arithmetic of the chain
        eps = rel_slack * rep.li_over_phi
        rep.checks["D4<D3"] = m4.variance < m3.variance + eps
        rep.checks["D3<Li/phi"] = m3.variance < rep.li_over_phi + eps
    return rep
