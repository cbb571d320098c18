"""Command-line entry point: ``expectile-hydro <command> ...``.

Exit status is 0 on success, 1 on validation failures (bad data, bad
configuration, failed basins) and 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .calibration import Objective, SearchConfig, calibrate
from .errors import ValidationError
from .evaluation import (
    DEFAULT_SPLIT,
    SplitSpec,
    evaluate_run,
    loss_curve_table,
    make_split,
)
from .hydro import simulate
from .io import (
    LOSS_CURVE_COLUMNS,
    TAIL_COLUMNS,
    load_basin_csv,
    write_basin_csv,
    write_report,
    write_table,
)
from .pipeline import CURVE_LEVELS, load_config, manifest_extras, run_pipeline
from .series import DateInterval
from .tail_demo import GpParams, gp_sample, histogram_bins, run_tail_experiment

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2


def _interval(text: str) -> DateInterval:
    try:
        start, end = text.split(":")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START:END, got {text!r}") from None
    return DateInterval(start, end)


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _split(args) -> SplitSpec:
    if getattr(args, "config", None):
        return load_config(args.config).split
    return SplitSpec(
        args.warmup or DEFAULT_SPLIT.warmup,
        args.calibration or DEFAULT_SPLIT.calibration,
        args.evaluation or DEFAULT_SPLIT.evaluation,
    )


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def cmd_tail_demo(args):
    params = GpParams(args.mu, args.sigma, args.xi)
    rep = run_tail_experiment(params, n=args.n, level=args.level, shift=args.shift, seed=args.seed)
    out = _out(args)
    write_table(out / "tail_report.csv", TAIL_COLUMNS, rep.rows())
    edges, counts = histogram_bins(gp_sample(params, args.n, args.seed), bin_width=0.1, upper=8.0)
    write_table(
        out / "tail_histogram.csv", ("bin_lo", "bin_hi", "count"),
        [(float(edges[i]), float(edges[i + 1]), int(c)) for i, c in enumerate(counts)],
    )
    print(
        f"q {rep.q_before:.4f} -> {rep.q_after:.4f}; e {rep.e_before:.4f} -> {rep.e_after:.4f}; "
        f"return period {rep.rp_before:.2f} -> {rep.rp_after:.2f}"
    )


def cmd_pet(args):
    basin = load_basin_csv(args.basin, latitude=args.latitude)
    rows = zip((d.isoformat() for d in basin.dates()), basin.tmean(), basin.pet_values())
    write_table(_out(args) / "pet.csv", ("date", "tmean_c", "pet_mm"), rows)


def cmd_simulate(args):
    basin = load_basin_csv(args.basin, latitude=args.latitude)
    f = basin.forcings()
    sim = simulate(args.model, args.params, f.precip, f.pet)
    rows = zip((d.isoformat() for d in sim.dates()), sim.values)
    write_table(_out(args) / "simulated.csv", ("date", "q_sim_mm"), rows)


def _search(args) -> SearchConfig:
    if args.config:
        return load_config(args.config).search
    return SearchConfig(seed=args.seed)


def cmd_calibrate(args):
    basin = load_basin_csv(args.basin, latitude=args.latitude)
    split = make_split(basin.interval, _split(args))
    objective = Objective(args.loss, args.level, split.calibration, split.warmup)
    res = calibrate(args.model, basin.forcings(), basin.obs_series(), objective, _search(args))
    _write_json(_out(args) / "calibration.json", {
        "basin_id": basin.basin_id,
        "model_id": res.model_id,
        "loss_kind": args.loss,
        "level": args.level,
        "params": res.params,
        "objective_value": res.objective_value,
        "screening_value": res.screening_value,
        "n_evals": res.n_evals,
        "budget_exhausted": res.budget_exhausted,
        "seed": res.seed,
        "trace": [list(t) for t in res.trace],
    })
    print(json.dumps(res.params))


def cmd_evaluate(args):
    basin = load_basin_csv(args.basin, latitude=args.latitude)
    split = make_split(basin.interval, _split(args))
    f = basin.forcings()
    full = split.full
    sim = simulate(args.model, args.params, f.precip.window(full), f.pet.window(full))
    score, diag = evaluate_run(sim, basin.obs_series(), args.loss, args.level, split.evaluation)
    _write_json(_out(args) / "evaluation.json", {
        "basin_id": basin.basin_id, "model_id": args.model, "loss_kind": args.loss,
        "level": args.level, "params": args.params, "eval_score": score, "diag_level": diag,
    })
    print(f"eval_score {score!r} diag_level {diag!r}")


def cmd_run(args):
    config = load_config(args.config)
    if args.strict:
        config.strict = True
    if args.workers:
        config.workers = args.workers
    result = run_pipeline(config)
    out = Path(args.out or config.out_dir)
    write_report(result.report, out, manifest_extras(config, result))
    for label, why in result.failures:
        print(f"basin {label} failed: {why}", file=sys.stderr)
    print(f"{len(result.records)} runs written to {out}")
    return EXIT_VALIDATION if result.failures else EXIT_OK


def cmd_loss_curves(args):
    grid = np.linspace(args.r_min, args.r_max, args.n)
    rows = loss_curve_table(args.x, args.levels, grid)
    write_table(_out(args) / "loss_curves.csv", LOSS_CURVE_COLUMNS, rows)


def cmd_synth(args):
    from .synthetic import synth_basin

    basin = synth_basin(seed=args.seed, n_years=args.years, noise=args.noise)
    path = write_basin_csv(basin, _out(args) / f"{basin.basin_id}.csv")
    print(path)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="expectile-hydro", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", default="out", help="output directory")
        sp.set_defaults(func=fn)
        return sp

    def basin_args(sp):
        sp.add_argument("--basin", required=True, help="basin CSV file")
        sp.add_argument("--latitude", type=float, help="degrees north (overrides the sidecar)")

    def split_args(sp):
        sp.add_argument("--config", help="run configuration supplying split and search settings")
        sp.add_argument("--warmup", type=_interval, help="START:END")
        sp.add_argument("--calibration", type=_interval, help="START:END")
        sp.add_argument("--evaluation", type=_interval, help="START:END")

    sp = add("tail-demo", cmd_tail_demo, "generalized-Pareto tail perturbation experiment")
    sp.add_argument("--n", type=int, default=1_000_000)
    sp.add_argument("--level", type=float, default=0.975)
    sp.add_argument("--shift", type=float, default=0.1)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--mu", type=float, default=0.0)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--xi", type=float, default=0.2)

    sp = add("pet", cmd_pet, "mean temperature and Oudin PET for a basin file")
    basin_args(sp)

    sp = add("simulate", cmd_simulate, "simulate discharge with given parameters")
    basin_args(sp)
    sp.add_argument("--model", default="gr4j")
    sp.add_argument("--params", type=_floats, required=True, help="comma-separated values")

    sp = add("calibrate", cmd_calibrate, "calibrate one model at one loss level")
    basin_args(sp)
    split_args(sp)
    sp.add_argument("--model", default="gr4j")
    sp.add_argument("--loss", default="expectile", choices=("expectile", "quantile"))
    sp.add_argument("--level", type=float, default=0.5)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("evaluate", cmd_evaluate, "score given parameters on the evaluation period")
    basin_args(sp)
    split_args(sp)
    sp.add_argument("--model", default="gr4j")
    sp.add_argument("--params", type=_floats, required=True)
    sp.add_argument("--loss", default="expectile", choices=("expectile", "quantile"))
    sp.add_argument("--level", type=float, default=0.5)

    sp = add("run", cmd_run, "full split-sample pipeline from a configuration file")
    sp.set_defaults(out=None)
    sp.add_argument("--config", required=True)
    sp.add_argument("--strict", action="store_true", help="abort on the first failing basin")
    sp.add_argument("--workers", type=int, help="parallel basin workers")

    sp = add("loss-curves", cmd_loss_curves, "tabulate quantile and expectile loss curves")
    sp.add_argument("--x", type=float, default=0.0)
    sp.add_argument("--levels", type=_floats, default=list(CURVE_LEVELS))
    sp.add_argument("--r-min", type=float, default=-2.0)
    sp.add_argument("--r-max", type=float, default=2.0)
    sp.add_argument("--n", type=int, default=81)

    sp = add("synth", cmd_synth, "write a synthetic basin CSV")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--years", type=int, default=34)
    sp.add_argument("--noise", type=float, default=0.25)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        status = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return status or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
