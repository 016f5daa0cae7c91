#!/usr/bin/env python3
"""Reference monthly-index experiment on the committed fixture.

Mirrors the full protocol: ten modes, tenth-order variance recursions,
50-step windows over (value, volatility) pairs, 85/15 split, one-step-ahead
rolling forecasts, nine-model comparison.  With the published settings
(--epochs 100) this takes a few hours on a laptop; the default here trims the
epoch count so a full pass finishes in tens of minutes.

Usage:
    python scripts/run_cpi_reference.py [--epochs N] [--horizons 10,20]
    python scripts/run_cpi_reference.py --quick   # 2-mode smoke run
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from modecast.data import load_csv
from modecast.garch import FitOptions, GarchSpec
from modecast.neural import CellKind, NetworkConfig, TrainConfig
from modecast.pipeline import PipelineConfig, compare_models
from modecast.series import SplitSpec
from modecast.vmd import VmdConfig

FIXTURE = Path(__file__).resolve().parents[1] / "data" / "cpi_germany_synthetic.csv"
OUT = Path(__file__).resolve().parents[1] / "out" / "cpi_reference"


def reference_config(epochs: int) -> PipelineConfig:
    return PipelineConfig(
        vmd=VmdConfig(n_modes=10, alpha=2000.0),
        garch=GarchSpec(k=10, l=10),
        network=NetworkConfig(cell=CellKind.LSTM, layers=2, hidden=64,
                              input_features=2, dropout_rate=0.2, seed=0),
        train=TrainConfig(epochs=epochs, batch_size=32, lr=1e-3, seed=0),
        split=SplitSpec(0.85),
        seq_len=50,
        garch_options=FitOptions(),
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--epochs", type=int, default=20)
    parser.add_argument("--horizons", default="10")
    parser.add_argument("--cells", default="rnn,gru,lstm")
    parser.add_argument("--quick", action="store_true",
                        help="2 modes, first-order variance model, 3 epochs")
    args = parser.parse_args()

    series = load_csv(FIXTURE)
    cfg = reference_config(args.epochs)
    if args.quick:
        cfg = replace(cfg, vmd=VmdConfig(n_modes=2, alpha=2000.0),
                      garch=GarchSpec(1, 1), seq_len=20,
                      train=replace(cfg.train, epochs=3))
    horizons = [int(h) for h in args.horizons.split(",")]
    cells = [CellKind[c.strip().upper()] for c in args.cells.split(",")]

    OUT.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    rows = compare_models(series, horizons, cells, cfg)
    print(f"finished in {time.time() - t0:.0f} s")
    lines = [f"{'model':<16} {'horizon':>7} {'rmse':>10} {'mae':>10} {'mape%':>8}"]
    for row in rows:
        mape = "n/a" if row.report.mape is None else f"{row.report.mape:.4f}"
        lines.append(f"{row.model:<16} {row.horizon:>7} {row.report.rmse:>10.4f} "
                     f"{row.report.mae:>10.4f} {mape:>8}")
    report = "\n".join(lines) + "\n"
    (OUT / "comparison.txt").write_text(report)
    print(report)


if __name__ == "__main__":
    main()
