"""End-to-end split-sample experiment over a set of basins.

For each basin, model, loss kind and level: calibrate on the calibration
period (after warm-up), simulate continuously through the evaluation period
with the calibrated parameters, score the evaluation period and compare
against the benchmark model at the same basin, loss kind and level.
"""

from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .basin import BasinRecord
from .calibration import Objective, SearchConfig, calibrate
from .errors import ConfigError, ValidationError
from .evaluation import (
    DEFAULT_BIN_WIDTH,
    DEFAULT_LEVELS,
    DEFAULT_SPLIT,
    AggregateReport,
    RunRecord,
    SplitSpec,
    aggregate,
    loss_curve_table,
    make_split,
    score_run,
)
from .hydro import MODELS, get_model, simulate
from .risk_measures import LOSS_KINDS, Level
from .tail_demo import GpParams, run_tail_experiment

log = logging.getLogger(__name__)

CURVE_LEVELS = (0.05, 0.25, 0.75, 0.95)


@dataclass
class RunConfig:
    models: tuple[str, ...] = ("gr4j", "lr2")
    benchmark_model: str = "lr2"
    loss_kinds: tuple[str, ...] = ("expectile",)
    levels: tuple[float, ...] = DEFAULT_LEVELS
    split: SplitSpec = DEFAULT_SPLIT
    search: SearchConfig = field(default_factory=SearchConfig)
    seed: int = 0
    basins: tuple[str, ...] = ()
    synthetic: tuple[dict, ...] = ()
    out_dir: str = "out"
    convert_units: bool = False
    workers: int = 1
    strict: bool = False
    bin_width: float = DEFAULT_BIN_WIDTH
    loss_curves: dict = field(default_factory=lambda: {"x": 0.0, "levels": list(CURVE_LEVELS), "r_min": -2.0, "r_max": 2.0, "n": 81})
    tail_demo: dict | None = None

    def __post_init__(self):
        for m in self.models:
            get_model(m)
        if self.benchmark_model not in self.models:
            raise ConfigError(f"benchmark_model {self.benchmark_model!r} is not among models {list(self.models)}")
        for k in self.loss_kinds:
            if k not in LOSS_KINDS:
                raise ConfigError(f"unknown loss kind {k!r}")
        try:
            self.levels = tuple(float(Level(v)) for v in self.levels)
        except ValidationError as exc:
            raise ConfigError(str(exc)) from exc
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        # the run seed drives the search
        self.search = dataclasses.replace(self.search, seed=self.seed)

    def echo(self) -> dict:
        """JSON-friendly copy of the configuration."""
        return {
            "models": list(self.models),
            "benchmark_model": self.benchmark_model,
            "loss_kinds": list(self.loss_kinds),
            "levels": list(self.levels),
            "split": {name: [str(iv.start), str(iv.end)] for name, iv in self.split.named()},
            "search": dataclasses.asdict(self.search),
            "seed": self.seed,
            "basins": [str(b) for b in self.basins],
            "synthetic": [dict(s) for s in self.synthetic],
            "convert_units": self.convert_units,
            "strict": self.strict,
            "bin_width": self.bin_width,
            "loss_curves": self.loss_curves,
            "tail_demo": self.tail_demo,
        }


_KNOWN_KEYS = {f.name for f in dataclasses.fields(RunConfig)}


def config_from_dict(doc: dict, base_dir=None) -> RunConfig:
    """Build a :class:`RunConfig` from a parsed YAML/JSON mapping."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a mapping")
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    kw = dict(doc)
    if "split" in kw:
        s = kw["split"]
        try:
            kw["split"] = SplitSpec.from_dates(s["warmup"], s["calibration"], s["evaluation"])
        except (KeyError, TypeError) as exc:
            raise ConfigError("split needs warmup/calibration/evaluation as [start, end] pairs") from exc
    if "search" in kw:
        try:
            kw["search"] = SearchConfig(**kw["search"])
        except TypeError as exc:
            raise ConfigError(f"bad search section: {exc}") from exc
    for key in ("models", "loss_kinds", "levels", "basins", "synthetic"):
        if key in kw:
            kw[key] = tuple(kw[key])
    if base_dir is not None and "basins" in kw:
        kw["basins"] = tuple(str(Path(base_dir, b)) for b in kw["basins"])
    if base_dir is not None and "out_dir" in kw:
        kw["out_dir"] = str(Path(base_dir, kw["out_dir"]))
    return RunConfig(**kw)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return config_from_dict(doc or {}, base_dir=path.parent)


def run_basin(basin: BasinRecord, config: RunConfig) -> list[RunRecord]:
    """All (model, loss, level) runs for one basin."""
    split = make_split(basin.interval, config.split)
    full = split.full
    forcings = basin.forcings()
    obs = basin.obs_series()
    precip = forcings.precip.window(full)
    pet = forcings.pet.window(full)
    obs_full = obs.window(full)
    records = []
    for model_id in config.models:
        for kind in config.loss_kinds:
            for level in config.levels:
                objective = Objective(kind, level, split.calibration, split.warmup)
                calib = calibrate(model_id, forcings, obs, objective, config.search)
                sim = simulate(model_id, calib.params, precip, pet)
                records.append(score_run(basin.basin_id, model_id, kind, level, calib, sim, obs_full, split))
                log.info(
                    "%s %s %s %.3f: objective %.6g after %d evaluations",
                    basin.basin_id, model_id, kind, level, calib.objective_value, calib.n_evals,
                )
    return records


def _load_basins(config: RunConfig):
    from .io import load_basin_csv
    from .synthetic import synth_basin

    for path in config.basins:
        yield str(path), lambda p=path: load_basin_csv(p, convert_units=config.convert_units)
    for spec in config.synthetic:
        spec = dict(spec)
        label = spec.get("basin_id") or f"synth-{spec.get('seed', 1)}"
        yield label, lambda s=spec: synth_basin(**s)


@dataclass
class PipelineResult:
    report: AggregateReport
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def records(self) -> list[RunRecord]:
        return self.report.records


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Run every basin and aggregate. Basin failures are collected unless ``strict``."""
    jobs = list(_load_basins(config))
    results: list[list[RunRecord] | None] = [None] * len(jobs)
    failures = []

    def handle(i, fn):
        label = jobs[i][0]
        try:
            results[i] = fn()
        except (ValidationError, OSError) as exc:
            if config.strict:
                raise
            log.warning("basin %s failed: %s", label, exc)
            failures.append((label, f"{type(exc).__name__}: {exc}"))

    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_run_job, config, i) for i in range(len(jobs))]
            for i, fut in enumerate(futures):
                handle(i, fut.result)
    else:
        for i, (_, loader) in enumerate(jobs):
            handle(i, lambda loader=loader: run_basin(loader(), config))

    records = [r for batch in results if batch for r in batch]
    report = aggregate(records, config.benchmark_model, config.bin_width)
    lc = config.loss_curves
    if lc:
        grid = np.linspace(lc["r_min"], lc["r_max"], int(lc["n"]))
        report.loss_curves = loss_curve_table(lc["x"], lc["levels"], grid)
    if config.tail_demo:
        td = dict(config.tail_demo)
        gp = GpParams(**{k: td.pop(k) for k in ("mu", "sigma", "xi") if k in td})
        report.tail_report = run_tail_experiment(gp, **td)
    return PipelineResult(report, sorted(failures))


def _run_job(config: RunConfig, i: int):
    # worker entry point: rebuild the loader in the child process
    _, loader = list(_load_basins(config))[i]
    return run_basin(loader(), config)


def manifest_extras(config: RunConfig, result: PipelineResult) -> dict:
    return {
        "config": config.echo(),
        "seeds": {"search": config.search.seed, "synthetic": [s.get("seed", 1) for s in config.synthetic]},
        "failures": [list(f) for f in result.failures],
        "models": {m: list(MODELS[m].param_names) for m in config.models},
    }


__all__ = [
    "PipelineResult",
    "RunConfig",
    "config_from_dict",
    "load_config",
    "manifest_extras",
    "run_basin",
    "run_pipeline",
]
