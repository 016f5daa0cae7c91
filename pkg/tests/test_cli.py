from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from modecast.cli import main
from modecast.data import write_csv
from modecast.pipeline import aggregate

from conftest import wavy_series


@pytest.fixture()
def series_csv(tmp_path) -> Path:
    from datetime import date

    series = wavy_series(n=220)
    stamps = tuple(date(2000 + i // 12, i % 12 + 1, 1) for i in range(len(series)))
    dated = type(series)(series.values, timestamps=stamps, name="wavy")
    return write_csv(dated, tmp_path / "series.csv")


@pytest.fixture()
def config_file(tmp_path) -> Path:
    path = tmp_path / "run.cfg"
    path.write_text("""
modes = 2
split.fraction = 0.8
vmd.alpha = 500
garch.k = 1
garch.l = 1
network.cell = rnn
network.layers = 2
network.hidden = 6
network.dropout = 0.1
network.seq_len = 10
train.epochs = 2
train.batch = 32
train.lr = 0.003
train.seed = 5
horizons = 5
""")
    return path


def test_decompose_writes_modes_and_metadata(tmp_path, series_csv, config_file, capsys):
    out = tmp_path / "dec"
    code = main(["decompose", "--input", str(series_csv), "--config", str(config_file),
                 "--out-dir", str(out)])
    assert code == 0
    header = (out / "modes.csv").read_text().splitlines()[0]
    assert header == "mode_1,mode_2"
    meta = json.loads((out / "modes_meta.json").read_text())
    assert len(meta["omegas"]) == 2
    assert meta["omegas"] == sorted(meta["omegas"])
    rows = np.loadtxt(out / "modes.csv", delimiter=",", skiprows=1)
    assert rows.shape == (220, 2)
    assert (out / "run_manifest.txt").exists()


def test_decompose_modes_flag_overrides_config(tmp_path, series_csv, config_file):
    out = tmp_path / "dec3"
    code = main(["decompose", "--input", str(series_csv), "--config", str(config_file),
                 "--modes", "3", "--out-dir", str(out)])
    assert code == 0
    assert (out / "modes.csv").read_text().splitlines()[0] == "mode_1,mode_2,mode_3"


def test_garch_fit_outputs_per_mode_files(tmp_path, series_csv, config_file):
    out = tmp_path / "g"
    code = main(["garch-fit", "--input", str(series_csv), "--config", str(config_file),
                 "--out-dir", str(out)])
    assert code == 0
    for k in (1, 2):
        payload = json.loads((out / f"garch_mode_{k}.json").read_text())
        assert payload["alpha0"] > 0
        sigma = np.loadtxt(out / f"sigma2_mode_{k}.csv", delimiter=",", skiprows=1)
        assert np.all(sigma[:, 1] > 0)


def test_train_then_forecast_from_model_dir(tmp_path, series_csv, config_file):
    model_dir = tmp_path / "model"
    assert main(["train", "--input", str(series_csv), "--config", str(config_file),
                 "--out-dir", str(model_dir), "--variant", "vmd-garch"]) == 0
    assert (model_dir / "forecaster.json").exists()
    out = tmp_path / "fc"
    assert main(["forecast", "--input", str(series_csv), "--config", str(config_file),
                 "--model-dir", str(model_dir), "--steps", "6", "--out-dir", str(out)]) == 0
    lines = (out / "predictions.csv").read_text().splitlines()
    assert lines[0] == "step,actual,predicted,mode_1,mode_2"
    assert len(lines) == 7


def test_forecast_per_mode_columns_sum_to_predicted(tmp_path, series_csv, config_file):
    out = tmp_path / "fc2"
    assert main(["forecast", "--input", str(series_csv), "--config", str(config_file),
                 "--steps", "5", "--out-dir", str(out), "--variant", "vmd"]) == 0
    rows = np.loadtxt(out / "predictions.csv", delimiter=",", skiprows=1)
    for row in rows:
        assert row[2] == aggregate(row[3:])  # bit-exact compensated sum


def test_manifest_rerun_is_bit_identical(tmp_path, series_csv, config_file):
    out1 = tmp_path / "r1"
    assert main(["forecast", "--input", str(series_csv), "--config", str(config_file),
                 "--steps", "4", "--out-dir", str(out1)]) == 0
    manifest = out1 / "run_manifest.txt"
    out2 = tmp_path / "r2"
    assert main(["forecast", "--input", str(series_csv), "--config", str(manifest),
                 "--steps", "4", "--out-dir", str(out2)]) == 0
    assert (out1 / "predictions.csv").read_bytes() == (out2 / "predictions.csv").read_bytes()


def test_compare_emits_structured_metrics(tmp_path, series_csv, config_file):
    out = tmp_path / "cmp"
    code = main(["compare", "--input", str(series_csv), "--config", str(config_file),
                 "--out-dir", str(out), "--cells", "rnn", "--horizons", "5"])
    assert code == 0
    lines = (out / "metrics.txt").read_text().splitlines()
    assert len(lines) == 3  # one cell, three variants, one horizon
    for line in lines:
        fields = dict(part.split("=", 1) for part in line.split())
        assert {"model", "cell", "horizon", "rmse", "mae", "mape_percent"} <= set(fields)
    assert (out / "metrics_table.txt").exists()


def test_compare_nine_rows_for_three_cells(tmp_path, series_csv, config_file):
    out = tmp_path / "cmp9"
    code = main(["compare", "--input", str(series_csv), "--config", str(config_file),
                 "--out-dir", str(out), "--horizons", "5"])
    assert code == 0
    lines = (out / "metrics.txt").read_text().splitlines()
    assert len(lines) == 9


def test_plot_predictions(tmp_path, series_csv, config_file):
    fc_dir = tmp_path / "fc3"
    main(["forecast", "--input", str(series_csv), "--config", str(config_file),
          "--steps", "5", "--out-dir", str(fc_dir)])
    svg = tmp_path / "chart.svg"
    assert main(["plot", "--predictions", str(fc_dir / "predictions.csv"),
                 "--out", str(svg)]) == 0
    assert svg.read_text().count("<polyline") == 2


def test_plot_modes_panels(tmp_path, series_csv, config_file):
    dec = tmp_path / "dec4"
    main(["decompose", "--input", str(series_csv), "--config", str(config_file),
          "--out-dir", str(dec)])
    svg = tmp_path / "modes.svg"
    assert main(["plot", "--modes-csv", str(dec / "modes.csv"), "--out", str(svg)]) == 0
    assert svg.read_text().count("<polyline") == 2


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------

def test_usage_error_exit_1(capsys):
    assert main(["decompose"]) == 1  # missing --input


def test_unknown_config_key_exit_1(tmp_path, series_csv, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("modes = 2\nvmd.bogus = 1\n")
    assert main(["decompose", "--input", str(series_csv), "--config", str(bad),
                 "--out-dir", str(tmp_path / "x")]) == 1


def test_missing_input_exit_2(tmp_path, config_file, capsys):
    assert main(["decompose", "--input", str(tmp_path / "absent.csv"),
                 "--config", str(config_file), "--out-dir", str(tmp_path / "y")]) == 2


def test_data_error_exit_2(tmp_path, config_file, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("date,value\n2020-01-01,1.0\n2020-02-01,oops\n")
    assert main(["decompose", "--input", str(bad), "--config", str(config_file),
                 "--out-dir", str(tmp_path / "z")]) == 2


def test_modes_required_without_config(tmp_path, series_csv, capsys):
    assert main(["decompose", "--input", str(series_csv),
                 "--out-dir", str(tmp_path / "w")]) == 1


def test_numerical_failure_exit_3(monkeypatch, capsys):
    from modecast.errors import NumericalError

    def boom(args):
        raise NumericalError("synthetic numerical failure")

    monkeypatch.setitem(__import__("modecast.cli", fromlist=["_COMMANDS"])._COMMANDS,
                        "plot", boom)
    assert main(["plot", "--predictions", "x.csv", "--out", "y.svg"]) == 3


def test_decompose_ten_modes_on_index_fixture(tmp_path):
    fixture = Path(__file__).resolve().parents[1] / "data" / "cpi_germany_synthetic.csv"
    out = tmp_path / "dec10"
    code = main(["decompose", "--input", str(fixture), "--modes", "10",
                 "--out-dir", str(out)])
    assert code == 0
    header = (out / "modes.csv").read_text().splitlines()[0]
    assert header == ",".join(f"mode_{i}" for i in range(1, 11))
    meta = json.loads((out / "modes_meta.json").read_text())
    omegas = meta["omegas"]
    assert len(omegas) == 10
    assert omegas == sorted(omegas)
