"""Command-line driver: decompose | garch-fit | train | forecast | compare | plot.

Every run writes its outputs plus a `run_manifest.txt` (the fully resolved
configuration in the config-file grammar, with the command line recorded in
comments); rerunning the same command with `--config run_manifest.txt`
reproduces the outputs bit-for-bit.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from . import garch as garch_mod
from . import charts, data, persist, vmd
from .config import (
    RunConfig,
    cell_kind,
    load_config,
    render_config,
    to_pipeline_config,
)
from .errors import ConfigError, ModecastError
from .pipeline import (
    ForecastResult,
    Variant,
    compare_models,
    fit_forecaster,
    metrics,
    rolling_forecast,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems must exit 1, not argparse's 2
        raise ConfigError(message)


_VARIANTS = {"direct": Variant.DIRECT, "vmd": Variant.VMD, "vmd-garch": Variant.VMD_GARCH}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modecast", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"modecast {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="run configuration file")
        p.add_argument("--input", required=True, help="date,value CSV series")
        p.add_argument("--out-dir", default="out", help="output directory")
        p.add_argument("--modes", type=int, help="number of decomposition modes")
        p.add_argument("--seed", type=int, help="training seed override")

    p = sub.add_parser("decompose", help="write mode CSV + center-frequency metadata")
    common(p)

    p = sub.add_parser("garch-fit", help="fit per-mode volatility models")
    common(p)

    p = sub.add_parser("train", help="fit a full forecaster and save it")
    common(p)
    p.add_argument("--variant", choices=sorted(_VARIANTS), default="vmd-garch")
    p.add_argument("--cell", help="rnn | gru | lstm (default from config)")

    p = sub.add_parser("forecast", help="rolling one-step-ahead forecast")
    common(p)
    p.add_argument("--variant", choices=sorted(_VARIANTS), default="vmd-garch")
    p.add_argument("--cell", help="rnn | gru | lstm (default from config)")
    p.add_argument("--model-dir", help="reuse a saved forecaster instead of training")
    p.add_argument("--steps", type=int, required=True)

    p = sub.add_parser("compare", help="run the 3 variants x 3 cells matrix")
    common(p)
    p.add_argument("--horizons", help="comma-separated step counts (default from config)")
    p.add_argument("--cells", default="rnn,gru,lstm")

    p = sub.add_parser("plot", help="render SVG charts from result CSVs")
    p.add_argument("--predictions", help="forecast CSV to chart")
    p.add_argument("--modes-csv", help="decomposition CSV to chart as panels")
    p.add_argument("--out", required=True, help="output SVG path")
    return parser


def _resolve_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = load_config(args.config, base=cfg)
    # CLI flags outrank config values
    if getattr(args, "modes", None) is not None:
        cfg = replace(cfg, modes=args.modes)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, train_seed=args.seed)
    if getattr(args, "cell", None):
        cfg = replace(cfg, network_cell=args.cell)
    if getattr(args, "horizons", None):
        cfg = replace(cfg, horizons=tuple(int(h) for h in args.horizons.split(",")))
    return cfg


def _write_manifest(out_dir: Path, cfg: RunConfig, args) -> None:
    comments = [
        f"modecast {__version__} run manifest; rerun with --config {out_dir / 'run_manifest.txt'}",
        "command: " + " ".join(sys.argv[1:] if sys.argv[1:] else [args.command]),
        f"input: {getattr(args, 'input', '-')}",
    ]
    (out_dir / "run_manifest.txt").write_text(render_config(cfg, comments), encoding="utf-8")


def _load_series(args):
    return data.load_csv(args.input)


def _write_modes_csv(mode_set: vmd.ModeSet, out_dir: Path) -> Path:
    path = out_dir / "modes.csv"
    k = mode_set.n_modes
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(f"mode_{i + 1}" for i in range(k)) + "\n")
        for row in mode_set.modes.T:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    meta = {
        "omegas": mode_set.omegas.tolist(),
        "iterations": mode_set.iterations,
        "final_delta": mode_set.final_delta,
        "residual": mode_set.residual.tolist(),
    }
    (out_dir / "modes_meta.json").write_text(json.dumps(meta, indent=1), encoding="utf-8")
    return path


def _cmd_decompose(args) -> int:
    cfg = _resolve_config(args)
    pipe_cfg = to_pipeline_config(cfg)
    series = _load_series(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    mode_set = vmd.vmd_decompose(series, pipe_cfg.vmd)
    path = _write_modes_csv(mode_set, out_dir)
    _write_manifest(out_dir, cfg, args)
    print(f"wrote {path} ({mode_set.n_modes} modes, {mode_set.iterations} iterations, "
          f"final delta {mode_set.final_delta:.3e})")
    return 0


def _cmd_garch_fit(args) -> int:
    cfg = _resolve_config(args)
    pipe_cfg = to_pipeline_config(cfg)
    series = _load_series(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    mode_set = vmd.vmd_decompose(series, pipe_cfg.vmd)
    _write_modes_csv(mode_set, out_dir)
    for i in range(mode_set.n_modes):
        fit = garch_mod.fit(mode_set.modes[i], pipe_cfg.garch, pipe_cfg.garch_options)
        payload = {
            "mode": i + 1,
            "alpha0": fit.params.alpha0,
            "alphas": fit.params.alphas.tolist(),
            "betas": fit.params.betas.tolist(),
            "log_likelihood": fit.log_likelihood,
            "mean": fit.mean,
            "converged": fit.converged,
            "used_differencing": fit.used_differencing,
            "used_rolling_fallback": fit.used_rolling_fallback,
        }
        (out_dir / f"garch_mode_{i + 1}.json").write_text(json.dumps(payload, indent=1),
                                                          encoding="utf-8")
        with open(out_dir / f"sigma2_mode_{i + 1}.csv", "w", encoding="utf-8") as fh:
            fh.write("index,sigma2\n")
            for t, value in enumerate(fit.sigma2_path):
                fh.write(f"{t},{value:.17g}\n")
        print(f"mode {i + 1}: persistence {fit.params.persistence:.4f} "
              f"converged={fit.converged} differenced={fit.used_differencing}")
    _write_manifest(out_dir, cfg, args)
    return 0


def _cmd_train(args) -> int:
    cfg = _resolve_config(args)
    pipe_cfg = to_pipeline_config(cfg)
    series = _load_series(args)
    out_dir = Path(args.out_dir)
    forecaster = fit_forecaster(series, _VARIANTS[args.variant],
                                cell_kind(cfg.network_cell), pipe_cfg)
    persist.save_forecaster(forecaster, out_dir)
    _write_manifest(out_dir, cfg, args)
    print(f"saved {args.variant}/{cfg.network_cell} forecaster "
          f"({len(forecaster.mode_models)} mode models) to {out_dir}")
    return 0


def _write_predictions_csv(result: ForecastResult, path: Path) -> None:
    k = result.per_mode.shape[1]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("step,actual,predicted," + ",".join(f"mode_{i + 1}" for i in range(k)) + "\n")
        for s in range(result.predictions.size):
            row = [str(s + 1), f"{result.actuals[s]:.17g}", f"{result.predictions[s]:.17g}"]
            row += [f"{v:.17g}" for v in result.per_mode[s]]
            fh.write(",".join(row) + "\n")


def _cmd_forecast(args) -> int:
    cfg = _resolve_config(args)
    series = _load_series(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.model_dir:
        forecaster = persist.load_forecaster(args.model_dir)
    else:
        pipe_cfg = to_pipeline_config(cfg)
        forecaster = fit_forecaster(series, _VARIANTS[args.variant],
                                    cell_kind(cfg.network_cell), pipe_cfg)
    result = rolling_forecast(forecaster, series, args.steps)
    path = out_dir / "predictions.csv"
    _write_predictions_csv(result, path)
    _write_manifest(out_dir, cfg, args)
    if result.predictions.size:
        report = metrics(result.actuals, result.predictions, horizon=args.steps)
        mape = "n/a" if report.mape is None else f"{report.mape:.4f}%"
        print(f"{args.steps} steps: rmse={report.rmse:.6g} mae={report.mae:.6g} mape={mape}")
    print(f"wrote {path}")
    return 0


def _format_rows(rows) -> tuple[str, str]:
    structured_lines = []
    widths = (16, 6, 7)
    pretty = [f"{'model':<{widths[0]}} {'cell':<{widths[1]}} {'horizon':<{widths[2]}} "
              f"{'rmse':>12} {'mae':>12} {'mape_percent':>12}"]
    for row in rows:
        mape = "nan" if row.report.mape is None else f"{row.report.mape:.17g}"
        structured_lines.append(
            f"model={row.model} cell={row.cell.name} horizon={row.horizon} "
            f"rmse={row.report.rmse:.17g} mae={row.report.mae:.17g} mape_percent={mape}")
        mape_h = "n/a" if row.report.mape is None else f"{row.report.mape:.4f}"
        pretty.append(f"{row.model:<{widths[0]}} {row.cell.name:<{widths[1]}} "
                      f"{row.horizon:<{widths[2]}} {row.report.rmse:>12.4f} "
                      f"{row.report.mae:>12.4f} {mape_h:>12}")
    return "\n".join(structured_lines) + "\n", "\n".join(pretty) + "\n"


def _cmd_compare(args) -> int:
    cfg = _resolve_config(args)
    pipe_cfg = to_pipeline_config(cfg)
    series = _load_series(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells = [cell_kind(c) for c in args.cells.split(",")]
    rows = compare_models(series, list(cfg.horizons), cells, pipe_cfg)
    structured, pretty = _format_rows(rows)
    (out_dir / "metrics.txt").write_text(structured, encoding="utf-8")
    (out_dir / "metrics_table.txt").write_text(pretty, encoding="utf-8")
    _write_manifest(out_dir, cfg, args)
    print(pretty, end="")
    print(f"wrote {out_dir / 'metrics.txt'}")
    return 0


def _cmd_plot(args) -> int:
    if not args.predictions and not args.modes_csv:
        raise ConfigError("plot needs --predictions or --modes-csv")
    out = Path(args.out)
    if args.predictions:
        rows = np.genfromtxt(args.predictions, delimiter=",", names=True)
        series = [("actual", np.atleast_1d(rows["actual"])),
                  ("predicted", np.atleast_1d(rows["predicted"]))]
        charts.line_chart(series, "Rolling one-step-ahead forecast", out,
                          x_values=np.atleast_1d(rows["step"]))
    else:
        table = np.genfromtxt(args.modes_csv, delimiter=",", names=True)
        names = table.dtype.names
        panels = [(name, np.atleast_1d(table[name])) for name in names]
        charts.panel_chart(panels, "Decomposition", out)
    source = args.predictions or args.modes_csv
    Path(f"{out}.manifest.txt").write_text(
        f"# modecast {__version__} plot manifest\n# command: " + " ".join(sys.argv[1:])
        + f"\n# source: {source}\n", encoding="utf-8")
    print(f"wrote {out}")
    return 0


_COMMANDS = {
    "decompose": _cmd_decompose,
    "garch-fit": _cmd_garch_fit,
    "train": _cmd_train,
    "forecast": _cmd_forecast,
    "compare": _cmd_compare,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ModecastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
