import csv
import json

import numpy as np
import pytest
import yaml

from expectile_hydro.cli import main
from expectile_hydro.errors import ConfigError
from expectile_hydro.io import REPORT_FILES, write_basin_csv
from expectile_hydro.pipeline import config_from_dict, load_config, run_pipeline
from expectile_hydro.synthetic import synth_basin

SHORT = {
    "warmup": ["1980-01-01", "1980-12-31"],
    "calibration": ["1981-01-01", "1982-12-31"],
    "evaluation": ["1983-01-01", "1983-12-31"],
}
FAST_SEARCH = {"screen_count": 30, "max_evals": 600, "min_step": 0.02}


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def basin_file(tmp_path):
    return write_basin_csv(synth_basin(seed=2, n_years=4), tmp_path / "data" / "basin.csv")


def _config(tmp_path, **extra):
    doc = {"split": SHORT, "search": FAST_SEARCH, "synthetic": [{"seed": 1, "n_years": 4}], "out_dir": "out"}
    doc.update(extra)
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(doc))
    return path


def test_pipeline_counts_and_self_comparison(tmp_path):
    result = run_pipeline(load_config(_config(tmp_path)))
    assert len(result.records) == 8
    bench = [row for row in result.report.relative if row.record.model_id == "lr2"]
    assert len(bench) == 4 and all(row.relative == 0.0 for row in bench)
    assert all(0.0 <= r.diag_level <= 1.0 and r.eval_score >= 0 for r in result.records)


def test_config_validation(tmp_path):
    with pytest.raises(ConfigError):
        config_from_dict({"models": ["gr4j"], "benchmark_model": "lr2"})
    with pytest.raises(ConfigError):
        config_from_dict({"levels": [0.5, 1.0]})
    with pytest.raises(ConfigError):
        config_from_dict({"colour": "blue"})
    cfg = load_config(_config(tmp_path, seed=7))
    assert cfg.search.seed == 7 and cfg.out_dir == str(tmp_path / "out")


def test_template_config_loads():
    from pathlib import Path

    cfg = load_config(Path(__file__).parents[1] / "configs" / "run_template.yaml")
    assert cfg.levels == (0.5, 0.9, 0.95, 0.975) and cfg.benchmark_model == "lr2"


def test_cli_run_is_byte_identical(tmp_path):
    cfg = _config(tmp_path)
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "a")]) == 0
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "b")]) == 0
    for name in REPORT_FILES + ("manifest.json",):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert len(_rows(tmp_path / "a" / "relative_scores.csv")) == 8


def test_cli_run_reports_bad_basin(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("date,precip_mm,tmin_c,tmax_c,q_mm\n2000-01-01,1,0,8,0.5\n")
    cfg = _config(tmp_path, basins=["bad.csv"])
    assert main(["run", "--config", str(cfg)]) == 1
    assert "bad.csv" in capsys.readouterr().err
    assert len(_rows(tmp_path / "out" / "relative_scores.csv")) == 8
    assert main(["run", "--config", str(cfg), "--strict"]) == 1


def test_cli_workers_match_serial(tmp_path):
    cfg = _config(tmp_path, synthetic=[{"seed": 1, "n_years": 4}, {"seed": 2, "n_years": 4}])
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "s")]) == 0
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "p"), "--workers", "2"]) == 0
    for name in REPORT_FILES:
        assert (tmp_path / "s" / name).read_bytes() == (tmp_path / "p" / name).read_bytes()


def test_cli_tail_demo(tmp_path):
    assert main(["tail-demo", "--n", "20000", "--seed", "1", "--out", str(tmp_path)]) == 0
    report = {r["key"]: r["value"] for r in _rows(tmp_path / "tail_report.csv")}
    assert float(report["rp_before"]) == 40.0
    assert report["q_before"] == report["q_after"]
    assert len(_rows(tmp_path / "tail_histogram.csv")) == 80


def test_cli_loss_curves(tmp_path):
    assert main(["loss-curves", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "loss_curves.csv")
    assert len(rows) == 2 * 4 * 81
    pick = {(r["kind"], float(r["level"]), float(r["r"])): float(r["loss"]) for r in rows}
    assert pick[("expectile", 0.95, 1.0)] == pytest.approx(0.05)
    # indicator 1(0 <= -1) is 0, so the loss is (-1) * (0 - 0.05)
    assert pick[("quantile", 0.05, -1.0)] == pytest.approx(0.05)
    assert pick[("quantile", 0.25, 0.0)] == 0.0


def test_cli_basin_commands(tmp_path, basin_file):
    out = tmp_path / "o"
    args = ["--basin", str(basin_file), "--out", str(out)]
    assert main(["pet"] + args) == 0
    assert len(_rows(out / "pet.csv")) == 1461
    assert main(["simulate", "--params", "350,0.5,90,1.7"] + args) == 0
    assert len(_rows(out / "simulated.csv")) == 1461
    split = ["--warmup", "1980-01-01:1980-12-31", "--calibration", "1981-01-01:1982-12-31", "--evaluation", "1983-01-01:1983-12-31"]
    assert main(["calibrate", "--model", "lr2", "--level", "0.9"] + split + args) == 0
    calib = json.loads((out / "calibration.json").read_text())
    assert set(calib["params"]) == {"c", "k"} and calib["level"] == 0.9
    params = ",".join(repr(v) for v in calib["params"].values())
    assert main(["evaluate", "--model", "lr2", "--level", "0.9", "--params", params] + split + args) == 0
    ev = json.loads((out / "evaluation.json").read_text())
    assert 0.0 <= ev["diag_level"] <= 1.0


def test_cli_exit_codes(tmp_path, basin_file):
    assert main(["pet", "--basin", str(tmp_path / "missing.csv"), "--out", str(tmp_path)]) == 2
    bad = tmp_path / "gap.csv"
    bad.write_text("date,precip_mm,tmin_c,tmax_c,q_mm\n2000-01-01,1,0,8,0.5\n2000-01-05,1,0,8,0.5\n")
    assert main(["pet", "--basin", str(bad), "--latitude", "45", "--out", str(tmp_path)]) == 1
    # default split needs 1980-2013, the file covers four years
    assert main(["calibrate", "--basin", str(basin_file), "--out", str(tmp_path)]) == 1


def test_cli_synth(tmp_path, capsys):
    assert main(["synth", "--seed", "5", "--years", "2", "--noise", "0", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "synth-5.csv")
    assert len(rows) == 731
    assert np.isfinite([float(r["q_mm"]) for r in rows]).all()
