"""Generalized-Pareto tail perturbation: quantile vs expectile sensitivity.

Draw a GP sample, add a constant to every value above the sample quantile at
``level`` and compare how the quantiles and the expectiles move. Quantiles
only see frequencies, so they stay put; expectiles see distances and grow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EmptyInputError, InvalidArgumentError
from .risk_measures import (
    Level,
    expectile_level_of_value,
    return_period_from_level,
    sample_expectile,
    sample_quantile,
)

BIT_GENERATOR = "PCG64"
DELTA_LEVELS = (0.5, 0.75, 0.9, 0.95)
_XI_EPS = 1e-12


@dataclass(frozen=True)
class GpParams:
    mu: float = 0.0
    sigma: float = 1.0
    xi: float = 0.2

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.xi)):
            raise InvalidArgumentError("GP location and shape must be finite")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise InvalidArgumentError(f"GP scale must be positive, got {self.sigma}")

    def cdf(self, x):
        z = np.maximum((np.asarray(x, dtype=np.float64) - self.mu) / self.sigma, 0.0)
        if abs(self.xi) < _XI_EPS:
            return 1.0 - np.exp(-z)
        base = np.maximum(1.0 + self.xi * z, 0.0)
        with np.errstate(divide="ignore"):
            return 1.0 - base ** (-1.0 / self.xi)

    def mean(self) -> float:
        if self.xi >= 1:
            return math.inf
        return self.mu + self.sigma / (1.0 - self.xi)


def gp_inverse_cdf(p, params: GpParams):
    """GP quantile function; ``p`` may be a scalar or an array in [0, 1)."""
    p_arr = np.asarray(p, dtype=np.float64)
    if np.any(~((p_arr >= 0.0) & (p_arr < 1.0))):
        raise DomainError("probability must lie in [0, 1)")
    if abs(params.xi) < _XI_EPS:
        out = params.mu - params.sigma * np.log1p(-p_arr)
    else:
        out = params.mu + params.sigma * np.expm1(-params.xi * np.log1p(-p_arr)) / params.xi
    return float(out) if out.ndim == 0 else out


def gp_sample(params: GpParams, n: int, seed: int) -> np.ndarray:
    """Inverse-transform sample of size ``n`` from a seeded PCG64 stream."""
    if n < 1:
        raise EmptyInputError("sample size must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    return gp_inverse_cdf(rng.random(int(n)), params)


@dataclass
class TailReport:
    level: float
    q_before: float
    e_before: float
    q_after: float
    e_after: float
    rp_before: float
    rp_after: float
    lower_level_quantile_deltas: list[tuple[float, float]] = field(default_factory=list)
    all_level_expectile_deltas: list[tuple[float, float]] = field(default_factory=list)
    seed: int = 0
    n: int = 0
    shift: float = 0.0
    params: GpParams = field(default_factory=GpParams)
    bit_generator: str = BIT_GENERATOR
    level_check: float = math.nan  # expectile level of e_before in the unshifted sample

    def rows(self) -> list[tuple[str, str]]:
        """Key/value rows for the ``tail_report.csv`` table."""
        out = [
            ("mu", repr(self.params.mu)),
            ("sigma", repr(self.params.sigma)),
            ("xi", repr(self.params.xi)),
            ("n", str(self.n)),
            ("seed", str(self.seed)),
            ("bit_generator", self.bit_generator),
            ("level", repr(self.level)),
            ("shift", repr(self.shift)),
            ("q_before", repr(self.q_before)),
            ("e_before", repr(self.e_before)),
            ("q_after", repr(self.q_after)),
            ("e_after", repr(self.e_after)),
            ("rp_before", repr(self.rp_before)),
            ("rp_after", repr(self.rp_after)),
            ("level_check", repr(self.level_check)),
        ]
        out += [(f"quantile_delta_{lv}", repr(d)) for lv, d in self.lower_level_quantile_deltas]
        out += [(f"expectile_delta_{lv}", repr(d)) for lv, d in self.all_level_expectile_deltas]
        return out


def run_tail_experiment(
    params: GpParams = GpParams(),
    n: int = 1_000_000,
    level: float = 0.975,
    shift: float = 0.1,
    seed: int = 42,
    delta_levels=DELTA_LEVELS,
) -> TailReport:
    level = float(Level(level))
    if not shift > 0:
        raise InvalidArgumentError(f"shift must be positive, got {shift}")
    x = gp_sample(params, n, seed)

    q_before = sample_quantile(x, level)
    e_before = sample_expectile(x, level)
    level_check = expectile_level_of_value(x, e_before)

    y = np.where(x > q_before, x + shift, x)
    q_after = sample_quantile(y, level)
    e_after = sample_expectile(y, level)

    q_deltas = [(lv, sample_quantile(y, lv) - sample_quantile(x, lv)) for lv in delta_levels]
    e_deltas = [(lv, sample_expectile(y, lv) - sample_expectile(x, lv)) for lv in delta_levels]

    return TailReport(
        level=level,
        q_before=q_before,
        e_before=e_before,
        q_after=q_after,
        e_after=e_after,
        # e_before is the level-expectile of x by construction
        rp_before=return_period_from_level(level),
        rp_after=return_period_from_level(expectile_level_of_value(y, e_before)),
        lower_level_quantile_deltas=q_deltas,
        all_level_expectile_deltas=e_deltas,
        seed=seed,
        n=int(n),
        shift=float(shift),
        params=params,
        level_check=level_check,
    )


def histogram_bins(x, bin_width: float = 0.1, upper: float = 8.0, lower: float = 0.0):
    """Histogram of ``x`` on ``[lower, upper]``; values above ``upper`` are dropped.

    Returns ``(edges, counts)``.
    """
    if not bin_width > 0:
        raise InvalidArgumentError("bin_width must be positive")
    n_bins = int(round((upper - lower) / bin_width))
    edges = lower + bin_width * np.arange(n_bins + 1)
    x = np.asarray(x)
    counts, _ = np.histogram(x[(x >= lower) & (x <= upper)], bins=edges)
    return edges, counts
