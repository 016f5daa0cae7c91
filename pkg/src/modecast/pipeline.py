"""Orchestration: decompose, extract per-mode volatility, train one net per
mode, roll one-step-ahead forecasts, sum the per-mode predictions, evaluate.

Protocol notes baked in here rather than in the submodules:

* Decomposition runs once on the full series and the ordered train/test split
  is applied to the mode sequences afterwards ("decompose then split").  The
  look-ahead this introduces into the mode shapes is inherent to the protocol
  and is why the leakage canary in the tests perturbs mode test segments, not
  the raw input.
* Every scaler, volatility fit and network is trained on the leading split
  only.  During the rolling forecast the realized mode values are appended to
  the prediction windows after each step; networks are not retrained unless
  `retrain_every` is set.
* The volatility channel carries the conditional standard deviation (square
  root of the fitted variance path), min-max scaled like the value channel.
  The one-network-code-path baselines keep the tensor shape: the direct
  variant duplicates the value channel, the decomposition-only variant feeds
  zeros.
* Final predictions are compensated (Kahan) sums of the per-mode predictions,
  since mode magnitudes can span many orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import garch as garch_mod
from . import neural, vmd
from .errors import (
    HorizonTooLong,
    LengthMismatch,
    TooShort,
    ZeroActual,
)
from .series import MinMaxScaler, SplitSpec, TimeSeries, fit_scaler, validate


class Variant(Enum):
    """The three model families of the comparison matrix."""

    DIRECT = "direct"              # one net on the raw series
    VMD = "vmd"                    # per-mode nets, zero volatility channel
    VMD_GARCH = "vmd-garch"        # per-mode nets with conditional-volatility channel

    @property
    def label_prefix(self) -> str:
        return {"direct": "", "vmd": "VMD-", "vmd-garch": "VMD-GARCH-"}[self.value]


@dataclass(frozen=True)
class PipelineConfig:
    vmd: vmd.VmdConfig
    garch: garch_mod.GarchSpec = garch_mod.GarchSpec(k=10, l=10)
    network: neural.NetworkConfig = neural.NetworkConfig(cell=neural.CellKind.LSTM)
    train: neural.TrainConfig = neural.TrainConfig()
    split: SplitSpec = SplitSpec()
    seq_len: int = 50
    garch_options: garch_mod.FitOptions = garch_mod.FitOptions()
    retrain_every: int = 0  # 0: never retrain during the rolling forecast


@dataclass(frozen=True)
class WindowedDataset:
    """Sliding windows: sample i covers slots [i, i+seq_len), target slot i+seq_len."""

    inputs: np.ndarray   # (N, seq_len, 2): value column 0, volatility column 1
    targets: np.ndarray  # (N,)
    seq_len: int


@dataclass(frozen=True)
class ModeModel:
    """Everything fitted for one mode: scalers, volatility source, network."""

    mode_index: int
    scaler: MinMaxScaler
    vol_scaler: MinMaxScaler | None
    garch: garch_mod.GarchFit | None
    network: neural.RecurrentNetwork
    vol_kind: str  # "garch" | "rolling" | "zeros" | "value"


@dataclass(frozen=True)
class EnsembleForecaster:
    variant: Variant
    cell: neural.CellKind
    config: PipelineConfig
    modes: vmd.ModeSet | None       # None for the direct variant
    mode_values: np.ndarray         # (K, T) series each net is trained/evaluated on
    mode_models: tuple[ModeModel, ...]
    train_size: int


@dataclass(frozen=True)
class EvalReport:
    rmse: float
    mae: float
    mape: float | None  # percent; None when an actual value is zero
    horizon: int
    predictions: np.ndarray
    actuals: np.ndarray


@dataclass(frozen=True)
class ForecastResult:
    predictions: np.ndarray       # (steps,) summed forecasts
    actuals: np.ndarray           # (steps,) original series test values
    per_mode: np.ndarray          # (steps, K) inverse-scaled per-mode forecasts


@dataclass(frozen=True)
class ComparisonRow:
    model: str
    variant: Variant
    cell: neural.CellKind
    horizon: int
    report: EvalReport


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

def mape_percent(actual: np.ndarray, predicted: np.ndarray) -> float:
    """Mean absolute percentage error in percent; rejects zero actuals."""
    if (actual == 0.0).any():
        raise ZeroActual("an actual value is zero, percentage error undefined")
    with np.errstate(over="ignore"):  # denormal actuals legitimately blow up
        return float(100.0 * np.mean(np.abs((actual - predicted) / actual)))


def metrics(actual, predicted, horizon: int | None = None) -> EvalReport:
    """Exact RMSE / MAE / MAPE; MAPE is None when any actual value is zero."""
    a = np.asarray(actual, dtype=float).reshape(-1)
    p = np.asarray(predicted, dtype=float).reshape(-1)
    if a.size != p.size:
        raise LengthMismatch(f"{a.size} actuals vs {p.size} predictions")
    if a.size == 0:
        raise LengthMismatch("empty prediction set")
    err = a - p
    rmse = float(math.sqrt(np.mean(err * err)))
    mae = float(np.mean(np.abs(err)))
    try:
        mape = mape_percent(a, p)
    except ZeroActual:
        mape = None
    return EvalReport(rmse=rmse, mae=mae, mape=mape,
                      horizon=a.size if horizon is None else horizon,
                      predictions=p, actuals=a)


def aggregate(mode_predictions) -> float:
    """Compensated (Kahan) sum of the per-mode predictions."""
    total = 0.0
    comp = 0.0
    for v in np.asarray(mode_predictions, dtype=float).reshape(-1):
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


# ---------------------------------------------------------------------------
# Window construction
# ---------------------------------------------------------------------------

def build_windows(mode_scaled, vol_scaled, seq_len: int) -> WindowedDataset:
    m = np.asarray(mode_scaled, dtype=float).reshape(-1)
    v = np.asarray(vol_scaled, dtype=float).reshape(-1)
    if m.size != v.size:
        raise LengthMismatch(f"value series has {m.size} points, volatility {v.size}")
    if m.size <= seq_len:
        raise TooShort(f"need more than seq_len={seq_len} points, got {m.size}")
    n = m.size - seq_len
    inputs = np.empty((n, seq_len, 2))
    for i in range(n):
        inputs[i, :, 0] = m[i:i + seq_len]
        inputs[i, :, 1] = v[i:i + seq_len]
    return WindowedDataset(inputs=inputs, targets=m[seq_len:].copy(), seq_len=seq_len)


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

def _mode_seed(base_seed: int, mode_index: int) -> int:
    # same derivation across variants so initializations are seed-identical
    return base_seed * 1000 + mode_index


def _train_volatility(mode_train: np.ndarray, variant: Variant, cfg: PipelineConfig):
    """Return (vol_train array, garch fit or None, vol_kind) for one mode."""
    if variant is Variant.DIRECT:
        return mode_train.copy(), None, "value"
    if variant is Variant.VMD:
        return np.zeros_like(mode_train), None, "zeros"
    fit = garch_mod.fit(mode_train, cfg.garch, cfg.garch_options)
    vol = np.sqrt(fit.sigma2_path)
    kind = "rolling" if fit.used_rolling_fallback else "garch"
    return vol, fit, kind


def _fit_mode_models(mode_values: np.ndarray, train_size: int, variant: Variant,
                     cell: neural.CellKind, cfg: PipelineConfig) -> tuple[ModeModel, ...]:
    """Fit scalers, volatility and one network per mode from the leading
    `train_size` slots only; mode test segments are never read here."""
    models = []
    for idx in range(mode_values.shape[0]):
        mode_train = mode_values[idx, :train_size]
        scaler = fit_scaler(mode_train)
        vol_train, g_fit, vol_kind = _train_volatility(mode_train, variant, cfg)
        if vol_kind == "value":
            vol_scaler: MinMaxScaler | None = scaler
        elif vol_kind == "zeros" or vol_train.max() <= 0.0:
            vol_scaler = None
        else:
            # sigma shares the mode's units, so scale it by the value span
            # anchored at zero: a negligible volatility stays a negligible
            # input instead of being stretched into a full-range noise channel
            vol_scaler = MinMaxScaler(lo=0.0, hi=scaler.hi - scaler.lo)
        scaled_vol = vol_scaler.apply(vol_train) if vol_scaler is not None else np.zeros(train_size)
        windows = build_windows(scaler.apply(mode_train), scaled_vol, cfg.seq_len)
        seed = _mode_seed(cfg.train.seed, idx + 1)
        net_cfg = replace(cfg.network, cell=cell, input_features=2, seed=seed)
        net, _ = neural.train(windows.inputs, windows.targets, net_cfg,
                              replace(cfg.train, seed=seed))
        models.append(ModeModel(mode_index=idx + 1, scaler=scaler, vol_scaler=vol_scaler,
                                garch=g_fit, network=net, vol_kind=vol_kind))
    return tuple(models)


def fit_forecaster(series: TimeSeries, variant: Variant, cell: neural.CellKind,
                   cfg: PipelineConfig, modes: vmd.ModeSet | None = None) -> EnsembleForecaster:
    """Build the full per-mode model bundle for one (variant, cell) pair.

    `modes` may carry a precomputed decomposition of `series` (the comparison
    matrix reuses one decomposition across variants and cells).
    """
    validate(series)
    n = len(series)
    n_train = int(np.floor(cfg.split.train_fraction * n))
    if n_train <= cfg.seq_len or n_train >= n:
        raise TooShort(f"train size {n_train} incompatible with seq_len {cfg.seq_len} and length {n}")
    if variant is Variant.DIRECT:
        mode_set = None
        mode_values = series.values[None, :].copy()
    else:
        mode_set = modes if modes is not None else vmd.vmd_decompose(series, cfg.vmd)
        mode_values = mode_set.modes
    models = _fit_mode_models(mode_values, n_train, variant, cell, cfg)
    return EnsembleForecaster(variant=variant, cell=cell, config=cfg, modes=mode_set,
                              mode_values=mode_values, mode_models=models, train_size=n_train)


# ---------------------------------------------------------------------------
# Rolling one-step-ahead forecast
# ---------------------------------------------------------------------------

class _ModeState:
    """Mutable per-mode window state advanced one slot at a time."""

    def __init__(self, model: ModeModel, mode_series: np.ndarray, train_size: int):
        self.model = model
        self.raw = list(mode_series[:train_size])
        self.scaled_values = list(model.scaler.apply(np.asarray(self.raw)))
        fit = model.garch
        if model.vol_kind in ("garch", "rolling") and fit is not None:
            self.a = list(fit.residuals)
            self.s2 = list(fit.sigma2_path)
            vol = np.sqrt(fit.sigma2_path)
            self.scaled_vol = list(model.vol_scaler.apply(vol)) if model.vol_scaler is not None \
                else [0.0] * train_size
        elif model.vol_kind == "value":
            self.scaled_vol = list(self.scaled_values)
        else:
            self.scaled_vol = [0.0] * train_size

    def window(self, seq_len: int) -> np.ndarray:
        w = np.empty((seq_len, 2))
        w[:, 0] = self.scaled_values[-seq_len:]
        w[:, 1] = self.scaled_vol[-seq_len:]
        return w

    def append_actual(self, value: float) -> None:
        model = self.model
        self.raw.append(value)
        self.scaled_values.append(float(model.scaler.apply(value)))
        fit = model.garch
        if model.vol_kind == "garch" and fit is not None:
            s2_next = garch_mod.step_sigma2(fit.params, np.asarray(self.a), np.asarray(self.s2))
            if fit.used_differencing:
                shock = (self.raw[-1] - self.raw[-2]) - fit.mean
            else:
                shock = value - fit.mean
            self.a.append(shock)
            self.s2.append(s2_next)
            vol = math.sqrt(s2_next)
            self.scaled_vol.append(float(model.vol_scaler.apply(vol))
                                   if model.vol_scaler is not None else 0.0)
        elif model.vol_kind == "rolling" and fit is not None:
            window = np.asarray(self.raw[-12:], dtype=float)
            var = float(np.var(window - window.mean()))
            vol = math.sqrt(max(var, 1e-12))
            self.scaled_vol.append(float(model.vol_scaler.apply(vol))
                                   if model.vol_scaler is not None else 0.0)
        elif model.vol_kind == "value":
            self.scaled_vol.append(self.scaled_values[-1])
        else:
            self.scaled_vol.append(0.0)


def rolling_forecast(forecaster: EnsembleForecaster, series: TimeSeries,
                     steps: int) -> ForecastResult:
    """One-step-ahead rolling forecast with actual-value appending.

    At each step every mode network predicts the next scaled value from its
    latest window, the inverse-scaled predictions are summed, and only then
    is the realized mode value (plus the advanced volatility slot) appended
    to the windows.  Networks are retrained every `retrain_every` steps when
    that setting is positive.
    """
    cfg = forecaster.config
    n = len(series)
    k = len(forecaster.mode_models)
    if steps < 0:
        raise HorizonTooLong("steps must be >= 0")
    if steps > n - forecaster.train_size:
        raise HorizonTooLong(
            f"{steps} steps requested but only {n - forecaster.train_size} held-out points exist")
    per_mode = np.empty((steps, k))
    predictions = np.empty(steps)
    actuals = series.values[forecaster.train_size:forecaster.train_size + steps].copy()
    if steps == 0:
        return ForecastResult(predictions=predictions, actuals=actuals, per_mode=per_mode)

    states = [_ModeState(m, forecaster.mode_values[i], forecaster.train_size)
              for i, m in enumerate(forecaster.mode_models)]
    networks = [m.network for m in forecaster.mode_models]
    for s in range(steps):
        for i, state in enumerate(states):
            pred_scaled, _ = neural.forward(networks[i], state.window(cfg.seq_len), training=False)
            per_mode[s, i] = float(state.model.scaler.invert(pred_scaled))
        predictions[s] = aggregate(per_mode[s])
        for i, state in enumerate(states):
            state.append_actual(float(forecaster.mode_values[i, forecaster.train_size + s]))
        if cfg.retrain_every > 0 and (s + 1) % cfg.retrain_every == 0 and s + 1 < steps:
            for i, state in enumerate(states):
                windows = build_windows(np.asarray(state.scaled_values),
                                        np.asarray(state.scaled_vol), cfg.seq_len)
                seed = _mode_seed(cfg.train.seed, i + 1)
                net_cfg = replace(cfg.network, cell=forecaster.cell, input_features=2, seed=seed)
                networks[i], _ = neural.train(windows.inputs, windows.targets, net_cfg,
                                              replace(cfg.train, seed=seed))
    return ForecastResult(predictions=predictions, actuals=actuals, per_mode=per_mode)


# ---------------------------------------------------------------------------
# Comparison matrix
# ---------------------------------------------------------------------------

def compare_models(series: TimeSeries, steps_list: list[int],
                   cells: list[neural.CellKind], cfg: PipelineConfig) -> list[ComparisonRow]:
    """Run the 3 variants x len(cells) matrix at every horizon in steps_list.

    All models share one decomposition and identical per-mode seeds, so rows
    differ only by what the variant itself changes.  A rolling forecast is a
    prefix of any longer one, so each model runs once at max(steps_list).
    """
    if not steps_list:
        raise LengthMismatch("steps_list must be nonempty")
    validate(series)
    max_steps = max(steps_list)
    mode_set = vmd.vmd_decompose(series, cfg.vmd)
    rows: list[ComparisonRow] = []
    for cell in cells:
        for variant in (Variant.DIRECT, Variant.VMD, Variant.VMD_GARCH):
            fc = fit_forecaster(series, variant, cell, cfg,
                                modes=None if variant is Variant.DIRECT else mode_set)
            result = rolling_forecast(fc, series, max_steps)
            label = f"{variant.label_prefix}{cell.name}"
            for h in steps_list:
                rows.append(ComparisonRow(
                    model=label, variant=variant, cell=cell, horizon=h,
                    report=metrics(result.actuals[:h], result.predictions[:h], horizon=h)))
    return rows
