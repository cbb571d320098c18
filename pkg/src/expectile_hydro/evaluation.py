"""Split-sample scoring, relative scores and cross-basin aggregation."""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field

import numpy as np

from .calibration import CalibResult
from .errors import CoverageError, EmptyInputError, InvalidArgumentError, SplitError
from .risk_measures import (
    Level,
    expectile_loss,
    is_degenerate_level,
    mean_loss,
    prediction_expectile_level,
    quantile_loss,
)
from .series import DailySeries, DateInterval, check_aligned

DEFAULT_LEVELS = (0.5, 0.9, 0.95, 0.975)
DEFAULT_BIN_WIDTH = 0.02
ALL_LEVELS = "all"


@dataclass(frozen=True)
class SplitSpec:
    warmup: DateInterval
    calibration: DateInterval
    evaluation: DateInterval

    def named(self):
        return (("warmup", self.warmup), ("calibration", self.calibration), ("evaluation", self.evaluation))

    @property
    def full(self) -> DateInterval:
        return DateInterval(self.warmup.start, self.evaluation.end)

    @classmethod
    def from_dates(cls, warmup, calibration, evaluation) -> SplitSpec:
        return cls(DateInterval(*warmup), DateInterval(*calibration), DateInterval(*evaluation))


DEFAULT_SPLIT = SplitSpec.from_dates(
    ("1980-01-01", "1981-12-31"),
    ("1982-01-01", "1997-12-31"),
    ("1998-01-01", "2013-12-31"),
)


def make_split(record: DateInterval, spec: SplitSpec) -> SplitSpec:
    """Validate ``spec`` against the data record and return it unchanged.

    Intervals must follow each other day after day with no overlap or gap,
    and all must lie inside ``record``.
    """
    named = spec.named()
    for (name_a, a), (name_b, b) in zip(named, named[1:]):
        if b.start <= a.end:
            raise SplitError(f"overlaps {name_a} {a}", interval=f"{name_b} {b}")
        if b.start != a.end + dt.timedelta(days=1):
            raise SplitError(f"leaves a gap after {name_a} {a}", interval=f"{name_b} {b}")
    for name, interval in named:
        if not record.contains(interval):
            raise CoverageError(f"{name} {interval} is not covered by the record {record}")
    return spec


def evaluate_run(sim: DailySeries, obs: DailySeries, loss_kind: str, level, eval_range: DateInterval):
    """Mean loss and expectile-level diagnostic over ``eval_range``.

    Returns ``(eval_score, diag_level)``.
    """
    s = sim.window(eval_range).values
    o = obs.window(eval_range).values
    return mean_loss(loss_kind, s, o, level), prediction_expectile_level(o, s)


def relative_score(score_bench: float, score_model: float) -> float:
    """``(bench - model) / bench``; NaN (undefined) when the benchmark scores 0."""
    if not (math.isfinite(score_bench) and math.isfinite(score_model)):
        raise InvalidArgumentError("scores must be finite")
    if score_bench < 0 or score_model < 0:
        raise InvalidArgumentError("scores must be non-negative")
    if score_bench == 0:
        return math.nan
    return (score_bench - score_model) / score_bench


def aggregate_median(values) -> float:
    """Exact median; even counts average the two middle values."""
    v = np.sort(np.asarray(values, dtype=np.float64).reshape(-1))
    if v.size == 0:
        raise EmptyInputError("no values to take a median of")
    mid = v.size // 2
    if v.size % 2:
        return float(v[mid])
    return float((v[mid - 1] + v[mid]) / 2.0)


def histogram_truncated(values, bin_width: float = DEFAULT_BIN_WIDTH, lo: float = -0.5, hi: float = 0.5):
    """Counts on ``[lo, hi]``; values outside are clamped into the edge bins.

    Returns ``(edges, counts)`` with ``len(edges) == len(counts) + 1``.
    """
    if not bin_width > 0:
        raise InvalidArgumentError("bin_width must be positive")
    if not hi > lo:
        raise InvalidArgumentError("need hi > lo")
    n_bins = max(1, int(round((hi - lo) / bin_width)))
    edges = lo + bin_width * np.arange(n_bins + 1)
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    idx = np.floor((v - lo) / bin_width).astype(np.int64)
    counts = np.bincount(np.clip(idx, 0, n_bins - 1), minlength=n_bins)
    return edges, counts


def loss_curve_table(x: float, levels, r_grid) -> list[tuple[str, float, float, float]]:
    """Rows ``(kind, level, r, loss)`` for both losses at every level and ``r``."""
    r_grid = np.asarray(r_grid, dtype=np.float64)
    if r_grid.size == 0:
        raise EmptyInputError("r grid is empty")
    rows = []
    for kind, fn in (("quantile", quantile_loss), ("expectile", expectile_loss)):
        for level in levels:
            losses = fn(r_grid, float(x), level)
            rows += [(kind, float(level), float(r), float(l)) for r, l in zip(r_grid, np.atleast_1d(losses))]
    return rows


@dataclass
class RunRecord:
    basin_id: str
    model_id: str
    loss_kind: str
    level: float
    calib: CalibResult
    eval_score: float
    diag_level: float
    diag_degenerate: bool = False
    eval_mean_sim: float = math.nan
    eval_mean_obs: float = math.nan


def score_run(basin_id, model_id, loss_kind, level, calib, sim: DailySeries, obs: DailySeries, split: SplitSpec) -> RunRecord:
    check_aligned(sim, obs)
    score, diag = evaluate_run(sim, obs, loss_kind, level, split.evaluation)
    s = sim.window(split.evaluation).values
    o = obs.window(split.evaluation).values
    return RunRecord(
        basin_id=basin_id,
        model_id=model_id,
        loss_kind=loss_kind,
        level=float(Level(level)),
        calib=calib,
        eval_score=score,
        diag_level=diag,
        diag_degenerate=is_degenerate_level(o, s),
        eval_mean_sim=float(np.mean(s)),
        eval_mean_obs=float(np.mean(o)),
    )


@dataclass
class RelativeRow:
    record: RunRecord
    benchmark_id: str
    bench_score: float  # NaN when the benchmark run is missing
    relative: float  # NaN when undefined

    @property
    def defined(self) -> bool:
        return math.isfinite(self.relative)


@dataclass
class MedianEntry:
    model_id: str
    loss_kind: str
    level: float | str
    median: float
    n_defined: int
    n_undefined: int


@dataclass
class HistogramEntry:
    model_id: str
    loss_kind: str
    level: float | str
    edges: np.ndarray
    counts: np.ndarray


@dataclass
class AggregateReport:
    benchmark_id: str = ""
    relative: list[RelativeRow] = field(default_factory=list)
    medians: list[MedianEntry] = field(default_factory=list)
    diag_medians: list[MedianEntry] = field(default_factory=list)
    histograms: list[HistogramEntry] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    loss_curves: list[tuple[str, float, float, float]] = field(default_factory=list)
    tail_report: object = None

    @property
    def records(self) -> list[RunRecord]:
        return [row.record for row in self.relative]


def _groups(rows, key):
    out: dict = {}
    for row in rows:
        out.setdefault(key(row), []).append(row)
    return out


def aggregate(records: list[RunRecord], benchmark_id: str, bin_width: float = DEFAULT_BIN_WIDTH) -> AggregateReport:
    """Relative scores against ``benchmark_id`` plus medians and histograms.

    Groups are ``(model, loss kind, level)`` with an extra ``level="all"``
    group per ``(model, loss kind)``. Undefined relative scores are left out
    of medians and histograms and counted in ``n_undefined``.
    """
    bench = {
        (r.basin_id, r.loss_kind, r.level): r.eval_score
        for r in records
        if r.model_id == benchmark_id
    }
    relative = []
    for r in records:
        b = bench.get((r.basin_id, r.loss_kind, r.level), math.nan)
        rel = relative_score(b, r.eval_score) if math.isfinite(b) else math.nan
        relative.append(RelativeRow(r, benchmark_id, b, rel))

    report = AggregateReport(benchmark_id=benchmark_id, relative=relative)
    by_level = _groups(relative, lambda row: (row.record.model_id, row.record.loss_kind, row.record.level))
    by_kind = _groups(relative, lambda row: (row.record.model_id, row.record.loss_kind))
    groups = [(k, v) for k, v in sorted(by_level.items())]
    groups += [((m, k, ALL_LEVELS), v) for (m, k), v in sorted(by_kind.items())]

    for (model_id, kind, level), rows in groups:
        defined = [row.relative for row in rows if row.defined]
        n_undef = len(rows) - len(defined)
        if defined:
            report.medians.append(
                MedianEntry(model_id, kind, level, aggregate_median(defined), len(defined), n_undef)
            )
            edges, counts = histogram_truncated(defined, bin_width)
            report.histograms.append(HistogramEntry(model_id, kind, level, edges, counts))
        else:
            report.warnings.append(
                f"no defined relative scores for model={model_id} loss={kind} level={level}"
            )
        diags = [row.record.diag_level for row in rows]
        report.diag_medians.append(MedianEntry(model_id, kind, level, aggregate_median(diags), len(diags), 0))
    return report
