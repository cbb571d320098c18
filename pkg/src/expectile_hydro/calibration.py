"""Derivative-free calibration against the mean expectile or quantile loss.

Two deterministic phases in a transformed parameter space (log for positive
parameters, ``asinh(x/4)`` for the signed GR4J exchange coefficient):

1. screening: a seeded scrambled Halton sequence over the search box;
2. compass search from the best screened point: each coordinate is probed
   at ``+step`` and ``-step``, the better probe is taken if it strictly
   improves, and the step shrinks when a full sweep brings nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import qmc

from .errors import CoverageError, InvalidArgumentError, ScreeningError
from .hydro import Forcings, get_model, run_model
from .risk_measures import Level, loss_function
from .series import DailySeries, DateInterval


@dataclass(frozen=True)
class SearchConfig:
    screen_count: int = 200
    initial_step: float = 0.25
    step_shrink: float = 0.5
    min_step: float = 1e-3
    max_evals: int = 20000
    seed: int = 0

    def __post_init__(self):
        if self.screen_count < 1:
            raise InvalidArgumentError("screen_count must be at least 1")
        if not 0 < self.step_shrink < 1:
            raise InvalidArgumentError("step_shrink must lie in (0, 1)")
        if not 0 < self.min_step <= self.initial_step:
            raise InvalidArgumentError("need 0 < min_step <= initial_step")
        if self.max_evals < self.screen_count:
            raise InvalidArgumentError("max_evals must cover the screening phase")


@dataclass(frozen=True)
class Objective:
    loss_kind: str
    level: float
    calib_range: DateInterval
    warmup_range: DateInterval

    def __post_init__(self):
        loss_function(self.loss_kind)
        object.__setattr__(self, "level", float(Level(self.level)))
        if not self.warmup_range.end < self.calib_range.start:
            raise InvalidArgumentError(
                f"warm-up {self.warmup_range} must precede calibration {self.calib_range}"
            )

    @property
    def sim_range(self) -> DateInterval:
        return DateInterval(self.warmup_range.start, self.calib_range.end)


@dataclass
class CalibResult:
    model_id: str
    params: dict[str, float]
    objective_value: float
    n_evals: int
    trace: list[tuple[int, float]] = field(default_factory=list)
    seed: int = 0
    screening_value: float = math.nan
    budget_exhausted: bool = False

    def param_values(self) -> list[float]:
        return list(self.params.values())


class _Scorer:
    """Mean loss over the calibration window for raw parameter vectors."""

    def __init__(self, model_id, forcings: Forcings, obs: DailySeries, objective: Objective):
        sim_range = objective.sim_range
        if not forcings.precip.interval.contains(sim_range):
            raise CoverageError(f"forcing {forcings.precip.interval} does not cover {sim_range}")
        if not obs.interval.contains(objective.calib_range):
            raise CoverageError(
                f"observations {obs.interval} do not cover {objective.calib_range}"
            )
        self.model_id = model_id
        self.p = forcings.precip.window(sim_range).values
        self.e = forcings.pet.window(sim_range).values
        self.skip = (objective.calib_range.start - sim_range.start).days
        self.x = obs.window(objective.calib_range).values
        self.loss = loss_function(objective.loss_kind)
        self.level = objective.level

    def simulated(self, params) -> np.ndarray:
        return run_model(self.model_id, params, self.p, self.e)["q"][self.skip :]

    def __call__(self, params) -> float:
        return float(np.mean(self.loss(self.simulated(params), self.x, self.level)))


def objective_score(params, model_id: str, forcings: Forcings, obs: DailySeries, objective: Objective) -> float:
    """Mean per-day loss on the calibration range after a warm-up run."""
    return _Scorer(model_id, forcings, obs, objective)(params)


def screening_points(model_id: str, config: SearchConfig) -> np.ndarray:
    """Screening candidates in natural units, shape ``(screen_count, n_params)``."""
    spec = get_model(model_id)
    box = spec.search_bounds()
    unit = qmc.Halton(d=spec.n_params, scramble=True, seed=config.seed).random(config.screen_count)
    u = box[:, 0] + unit * (box[:, 1] - box[:, 0])
    return np.array([_natural(spec, row) for row in u])


def _natural(spec, u) -> np.ndarray:
    lo, hi = np.array(spec.bounds).T
    return np.clip(spec.from_search(u), lo, hi)


def _safe(fn, params) -> float:
    value = fn(params)
    return value if math.isfinite(value) else math.inf


def screen_candidates(model_id: str, objective_fn: Callable, config: SearchConfig):
    """Best screening point and its score.

    ``objective_fn`` maps a natural-unit parameter vector to a scalar.
    """
    best, best_score = None, math.inf
    for point in screening_points(model_id, config):
        score = _safe(objective_fn, point)
        if score < best_score:
            best, best_score = point, score
    if best is None:
        raise ScreeningError(f"all {config.screen_count} screening candidates gave non-finite scores")
    return best, best_score


def pattern_search(model_id: str, objective_fn: Callable, config: SearchConfig = SearchConfig()) -> CalibResult:
    """Screening followed by compass search on an arbitrary objective."""
    spec = get_model(model_id)
    box = spec.search_bounds()
    n_evals = 0
    best, f_best = None, math.inf
    best_index = 0
    for point in screening_points(model_id, config):
        score = _safe(objective_fn, point)
        n_evals += 1
        if score < f_best:
            best, f_best, best_index = point, score, n_evals
    if best is None:
        raise ScreeningError(f"all {config.screen_count} screening candidates gave non-finite scores")
    screening_value = f_best
    trace = [(best_index, f_best)]

    u = spec.to_search(best)
    x = best
    step = config.initial_step
    exhausted = False
    while step > config.min_step and not exhausted:
        improved = False
        for i in range(spec.n_params):
            move = None
            f_move = f_best
            for sign in (1.0, -1.0):
                cand = u.copy()
                cand[i] = min(max(u[i] + sign * step, box[i, 0]), box[i, 1])
                if cand[i] == u[i]:
                    continue
                if n_evals >= config.max_evals:
                    exhausted = True
                    break
                x_cand = _natural(spec, cand)
                f_cand = _safe(objective_fn, x_cand)
                n_evals += 1
                if f_cand < f_move:
                    move, f_move = (cand, x_cand), f_cand
            if move is not None:
                u, x = move
                f_best = f_move
                trace.append((n_evals, f_best))
                improved = True
            if exhausted:
                break
        if not improved:
            step *= config.step_shrink

    return CalibResult(
        model_id=model_id,
        params=dict(zip(spec.param_names, (float(v) for v in x))),
        objective_value=f_best,
        n_evals=n_evals,
        trace=trace,
        seed=config.seed,
        screening_value=screening_value,
        budget_exhausted=exhausted,
    )


def calibrate(
    model_id: str,
    forcings: Forcings,
    obs: DailySeries,
    objective: Objective,
    config: SearchConfig = SearchConfig(),
) -> CalibResult:
    """Calibrate ``model_id`` by minimising the mean loss of ``objective``."""
    scorer = _Scorer(model_id, forcings, obs, objective)
    return pattern_search(model_id, scorer, config)
