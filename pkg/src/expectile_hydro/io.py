"""Basin CSV files and report tables.

Basin files use the header ``date,precip_mm,tmin_c,tmax_c,q_mm[,pet_mm]``
with ISO-8601 dates. Optional metadata lives in a JSON sidecar next to the
CSV (``basin.csv`` -> ``basin.meta.json``) with keys ``basin_id``,
``latitude_deg``, ``area_km2`` and ``q_unit`` (``"mm/day"`` or ``"m3/s"``).

Report tables are plain CSV with ``\\n`` line endings and floats written
with ``repr`` so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .basin import BasinRecord
from .errors import ContiguityError, ParseError, ValidationError
from .evaluation import AggregateReport

BASIN_COLUMNS = ("date", "precip_mm", "tmin_c", "tmax_c", "q_mm")
PET_COLUMN = "pet_mm"
M3S_TO_MM_DAY_KM2 = 86.4  # (m3/s) * 86400 s / (km2 * 1e6 m2) * 1000 mm

RELATIVE_COLUMNS = (
    "basin_id", "model_id", "benchmark_id", "loss_kind", "level",
    "eval_score", "bench_score", "relative_score", "defined",
    "diag_level", "diag_degenerate", "objective_value", "n_evals",
    "eval_mean_sim", "eval_mean_obs",
)
MEDIAN_COLUMNS = ("model_id", "loss_kind", "level", "median_relative_score", "n_defined", "n_undefined")
DIAG_COLUMNS = ("model_id", "loss_kind", "level", "median_diag_level", "n")
HISTOGRAM_COLUMNS = ("model_id", "loss_kind", "level", "bin_lo", "bin_hi", "count")
LOSS_CURVE_COLUMNS = ("kind", "level", "r", "loss")
TAIL_COLUMNS = ("key", "value")
REPORT_FILES = (
    "relative_scores.csv",
    "medians_heatmap.csv",
    "diag_levels_heatmap.csv",
    "histogram.csv",
    "loss_curves.csv",
    "tail_report.csv",
)
MANIFEST = "manifest.json"


def meta_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + ".meta.json")


def read_meta(csv_path) -> dict:
    p = meta_path(csv_path)
    if not p.exists():
        return {}
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: {exc.msg}", line=exc.lineno) from exc


def _float(text, line, column):
    if not text:
        raise ParseError(f"missing value in {column!r}", line=line)
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"column {column!r}: cannot parse {text!r} as a number", line=line) from None


def load_basin_csv(path, latitude=None, basin_id=None, convert_units=False) -> BasinRecord:
    """Read and validate one basin file.

    Parameters
    ----------
    path : path-like
        CSV file with the basin schema.
    latitude : float, optional
        Degrees north; overrides the sidecar. Required when the file has no
        ``pet_mm`` column, since PET is then computed with Oudin's formula.
    basin_id : str, optional
        Defaults to the sidecar value, then to the file stem.
    convert_units : bool
        Convert ``q_mm`` from m3/s to mm/day using the sidecar ``area_km2``.
        Only meaningful when the sidecar declares ``q_unit: "m3/s"``.
    """
    path = Path(path)
    meta = read_meta(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError("file is empty", line=1) from None
        if tuple(header[:5]) != BASIN_COLUMNS or header[5:] not in ([], [PET_COLUMN]):
            raise ParseError(
                f"header must be {','.join(BASIN_COLUMNS)}[,{PET_COLUMN}], got {','.join(header)}",
                line=1,
            )
        has_pet = len(header) == 6
        dates, rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", line=lineno)
            try:
                day = dt.date.fromisoformat(row[0].strip())
            except ValueError:
                raise ParseError(f"bad date {row[0]!r}", line=lineno) from None
            values = [_float(c.strip(), lineno, header[i + 1]) for i, c in enumerate(row[1:])]
            for i, v in enumerate(values):
                if not math.isfinite(v):
                    raise ParseError(f"missing value in {header[i + 1]!r} on {day}", line=lineno)
            if dates:
                expected = dates[-1] + dt.timedelta(days=1)
                if day != expected:
                    kind = "gap" if day > expected else "out-of-order date"
                    raise ContiguityError(
                        f"line {lineno}: {kind} between {dates[-1]} and {day}"
                    )
            dates.append(day)
            rows.append(values)
    if not rows:
        raise ParseError("no data rows", line=2)

    data = np.array(rows, dtype=np.float64)
    q = data[:, 3]
    if meta.get("q_unit", "mm/day") == "m3/s":
        if not convert_units:
            raise ValidationError(f"{path}: streamflow is in m3/s; enable unit conversion")
        area = meta.get("area_km2")
        if not area or area <= 0:
            raise ValidationError(f"{path}: unit conversion needs a positive area_km2 in the sidecar")
        q = q * M3S_TO_MM_DAY_KM2 / float(area)

    if latitude is None:
        latitude = meta.get("latitude_deg")
    if latitude is None:
        if not has_pet:
            raise ValidationError(f"{path}: no pet_mm column and no latitude to compute PET")
        latitude = 0.0
    try:
        return BasinRecord(
            basin_id=basin_id or meta.get("basin_id") or path.stem,
            latitude=float(latitude),
            start_date=dates[0],
            precip=data[:, 0],
            tmin=data[:, 1],
            tmax=data[:, 2],
            q_obs=q,
            pet=data[:, 4] if has_pet else None,
        )
    except ValidationError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def write_basin_csv(record: BasinRecord, path) -> Path:
    """Write ``record`` and its sidecar; ``load_basin_csv`` reads it back unchanged."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = list(BASIN_COLUMNS) + ([PET_COLUMN] if record.pet is not None else [])
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, day in enumerate(record.dates()):
            row = [day.isoformat(), record.precip[i], record.tmin[i], record.tmax[i], record.q_obs[i]]
            if record.pet is not None:
                row.append(record.pet[i])
            w.writerow([row[0]] + [repr(float(v)) for v in row[1:]])
    meta = {"basin_id": record.basin_id, "latitude_deg": record.latitude, "q_unit": "mm/day"}
    meta_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "" if math.isnan(v) else repr(v)
    return str(v)


def write_table(path, columns, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def _run_entry(rec) -> dict:
    return {
        "basin_id": rec.basin_id,
        "model_id": rec.model_id,
        "loss_kind": rec.loss_kind,
        "level": rec.level,
        "params": rec.calib.params,
        "objective_value": rec.calib.objective_value,
        "screening_value": rec.calib.screening_value,
        "n_evals": rec.calib.n_evals,
        "budget_exhausted": rec.calib.budget_exhausted,
        "seed": rec.calib.seed,
        "trace": [[i, v] for i, v in rec.calib.trace],
    }


def write_report(report: AggregateReport, out_dir, manifest: dict | None = None) -> list[Path]:
    """Write every report table plus ``manifest.json`` into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    rel_rows = []
    for row in report.relative:
        r = row.record
        rel_rows.append((
            r.basin_id, r.model_id, row.benchmark_id, r.loss_kind, r.level,
            r.eval_score, row.bench_score, row.relative, row.defined,
            r.diag_level, r.diag_degenerate, r.calib.objective_value, r.calib.n_evals,
            r.eval_mean_sim, r.eval_mean_obs,
        ))
    written.append(write_table(out / "relative_scores.csv", RELATIVE_COLUMNS, rel_rows))
    written.append(write_table(
        out / "medians_heatmap.csv", MEDIAN_COLUMNS,
        [(m.model_id, m.loss_kind, m.level, m.median, m.n_defined, m.n_undefined) for m in report.medians],
    ))
    written.append(write_table(
        out / "diag_levels_heatmap.csv", DIAG_COLUMNS,
        [(m.model_id, m.loss_kind, m.level, m.median, m.n_defined) for m in report.diag_medians],
    ))
    hist_rows = [
        (h.model_id, h.loss_kind, h.level, float(h.edges[i]), float(h.edges[i + 1]), int(c))
        for h in report.histograms
        for i, c in enumerate(h.counts)
    ]
    written.append(write_table(out / "histogram.csv", HISTOGRAM_COLUMNS, hist_rows))
    written.append(write_table(out / "loss_curves.csv", LOSS_CURVE_COLUMNS, report.loss_curves))
    tail_rows = report.tail_report.rows() if report.tail_report is not None else []
    written.append(write_table(out / "tail_report.csv", TAIL_COLUMNS, tail_rows))

    doc = {
        "version": __version__,
        "benchmark_id": report.benchmark_id,
        "warnings": report.warnings,
        "runs": [_run_entry(r) for r in report.records],
    }
    doc.update(manifest or {})
    path = out / MANIFEST
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written
