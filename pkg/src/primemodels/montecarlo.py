"""
Monte Carlo simulation of the Cramer urn models.

One trajectory opens every urn from the start index up to x and counts the
white balls: I(x) = sum_j [U_j < p_j] with one uniform U_j per urn.  Trial t
of an experiment draws its uniforms from
``np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(t,)))``,
so each trial's stream depends only on (master_seed, t) and trials can run in
any order or in parallel.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analytic import normal_module_cdf
from .models import ModelKind, ModelMoments, cramer_probabilities, model_moments
from .primes import ProgressionClass

MIN_TRIALS = 100
DEFAULT_TRIALS = 2000
DEFAULT_C_LIST = (1.0, 2.0, 3.0)


@dataclass(frozen=True)
class TrialConfig:
    model: ModelKind
    x: int
    cls: ProgressionClass | None = None
    trials: int = DEFAULT_TRIALS
    master_seed: int = 0
    C_list: tuple[float, ...] = DEFAULT_C_LIST

    def __post_init__(self):
        if not self.model.variant.cramer:
            raise ValueError(f"only Cramer models can be simulated, got {self.model.name}")
        if self.trials < MIN_TRIALS:
            raise ValueError(f"need at least {MIN_TRIALS} trials, got {self.trials}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if not self.C_list or any(c <= 0 for c in self.C_list):
            raise ValueError(f"C_list must hold positive values, got {self.C_list}")


@dataclass
class SimReport:
    config: TrialConfig
    moments: ModelMoments
    start_index: int
    empirical_mean: float
    empirical_variance: float
    # exact mean and variance of the simulated urn sequence
    urn_mean: float
    urn_variance: float
    coverage: dict[float, float]
    z_summary: dict[str, float]
    trials: int
    draws: np.ndarray = field(repr=False)

    @property
    def x(self) -> int:
        return self.config.x


def _trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial_index,)))


def _draw(p: np.ndarray, rng: np.random.Generator) -> int:
    return int(np.count_nonzero(rng.random(p.size) < p))


def _check_model(model: ModelKind, x: int, cls: ProgressionClass | None) -> None:
    if not model.variant.cramer:
        raise ValueError(f"only Cramer models can be simulated, got {model.name}")
    if model.variant.progression and cls is None:
        raise ValueError(f"{model.name} needs a progression class")
    if not model.variant.progression and cls is not None:
        raise ValueError(f"{model.name} takes no progression class")
    if x < 10:
        raise ValueError(f"x must be >= 10, got {x}")


def simulate_trajectory(model: ModelKind, x: int, cls: ProgressionClass | None = None, seed: int = 0) -> int:
    """One draw of I(x) for a Cramer model, deterministic in ``seed``."""
    _check_model(model, x, cls)
    _, p = cramer_probabilities(x, cls)
    return _draw(p, np.random.default_rng(seed))


def run_experiment(cfg: TrialConfig, workers: int = 1) -> SimReport:
    """Run ``cfg.trials`` independent trajectories and compare with the model band."""
    _check_model(cfg.model, cfg.x, cfg.cls)
    start, p = cramer_probabilities(cfg.x, cfg.cls)
    moments = model_moments(cfg.model, cfg.x, cfg.cls)

    def one(t: int) -> int:
        return _draw(p, _trial_rng(cfg.master_seed, t))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            draws = np.fromiter(pool.map(one, range(cfg.trials)), dtype=np.int64, count=cfg.trials)
    else:
        draws = np.fromiter((one(t) for t in range(cfg.trials)), dtype=np.int64, count=cfg.trials)

    dev = np.abs(draws - moments.mean)
    coverage = {float(c): float(np.count_nonzero(dev < c * moments.sd)) / cfg.trials for c in cfg.C_list}
    z = (draws - moments.mean) / moments.sd
    q1, med, q3 = np.quantile(z, [0.25, 0.5, 0.75])
    z_summary = {
        "min": float(z.min()),
        "q1": float(q1),
        "median": float(med),
        "q3": float(q3),
        "max": float(z.max()),
        "frac_abs_lt_1": float(np.count_nonzero(np.abs(z) < 1)) / cfg.trials,
    }
    return SimReport(
        config=cfg,
        moments=moments,
        start_index=start,
        empirical_mean=float(draws.mean()),
        empirical_variance=float(draws.var(ddof=1)),
        urn_mean=math.fsum(p),
        urn_variance=math.fsum(p * (1 - p)),
        coverage=coverage,
        z_summary=z_summary,
        trials=cfg.trials,
        draws=draws,
    )


def binomial_tolerance(prob: float, trials: int, n_sigma: float = 3.0) -> float:
    return n_sigma * math.sqrt(prob * (1 - prob) / trials)


def coverage_report(reports, C: float, n_sigma: float = 3.0) -> dict:
    """Empirical coverage at ``C`` against F(C), one row per report, sorted by x.

    Each row passes when the gap is within ``n_sigma`` binomial standard
    errors; the table passes when every row does.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to tabulate")
    expected = normal_module_cdf(C)
    rows = []
    for rep in sorted(reports, key=lambda r: (r.x, r.config.cls.k if r.config.cls else 1)):
        if C not in rep.coverage:
            raise ValueError(f"C={C} not among the simulated C values {sorted(rep.coverage)}")
        tol = binomial_tolerance(expected, rep.trials, n_sigma)
        emp = rep.coverage[C]
        cls = rep.config.cls
        rows.append({
            "x": rep.x,
            "model": rep.config.model.name,
            "k": cls.k if cls else 1,
            "l": cls.l if cls else 0,
            "trials": rep.trials,
            "C": C,
            "empirical": emp,
            "expected": expected,
            "tolerance": tol,
            "status": "PASS" if abs(emp - expected) <= tol else "FAIL",
        })
    return {"rows": rows, "status": "PASS" if all(r["status"] == "PASS" for r in rows) else "FAIL"}
