from __future__ import annotations

import numpy as np

from modecast.garch import FitOptions, GarchSpec
from modecast.neural import CellKind, NetworkConfig, TrainConfig
from modecast.pipeline import PipelineConfig
from modecast.series import SplitSpec, TimeSeries
from modecast.vmd import VmdConfig


def small_config(epochs=2, seq_len=10, n_modes=2, variant_cell=CellKind.RNN) -> PipelineConfig:
    """Tiny pipeline settings so integration tests stay fast."""
    return PipelineConfig(
        vmd=VmdConfig(n_modes=n_modes, alpha=500.0),
        garch=GarchSpec(1, 1),
        network=NetworkConfig(cell=variant_cell, layers=2, hidden=6, input_features=2,
                              dropout_rate=0.1, seed=0),
        train=TrainConfig(epochs=epochs, batch_size=32, lr=3e-3, seed=5),
        split=SplitSpec(0.8),
        seq_len=seq_len,
        garch_options=FitOptions(),
    )


def wavy_series(n=220, seed=0) -> TimeSeries:
    t = np.arange(n)
    rng = np.random.default_rng(seed)
    values = 20.0 + 0.02 * t + np.cos(2 * np.pi * 0.07 * t) + 0.2 * rng.standard_normal(n)
    return TimeSeries(values, name="wavy")
