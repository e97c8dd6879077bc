# -*- coding: utf-8 -*-
"""Fixtures compartidas: generadores con semilla, micro-configuraciones y datos sintéticos."""

from pathlib import Path
import numpy as np
import pytest
import yaml
from apps.data.synth import synth_series
from apps.data.table import TimeSeriesTable
from config.logger import start_logger
from config.run_config import ModelConfig
from config.run_config import TrainConfig


@pytest.fixture(autouse=True)
def _quiet_logger():
    start_logger()
    yield


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


def micro_model_config(**overrides) -> ModelConfig:
    fields = dict(
        d_input=1,
        d_model=8,
        heads=2,
        window=6,
        encoder_layers=1,
        decoder_layers=1,
        conv_kernels=4,
        lstm_hidden=6,
        ffn_width=16,
    )
    fields.update(overrides)
    return ModelConfig(**fields)


@pytest.fixture
def micro_config() -> ModelConfig:
    return micro_model_config()


@pytest.fixture
def micro_train_config() -> TrainConfig:
    return TrainConfig(epochs=2, batch_size=4, seed=7)


@pytest.fixture
def trend_table() -> TimeSeriesTable:
    return synth_series('trend+sine', 60, noise=0.02, seed=3)


@pytest.fixture
def synth_csv(tmp_path: Path, trend_table: TimeSeriesTable) -> Path:
    path = tmp_path / 'series.csv'
    trend_table.to_frame().to_csv(path, index=False)
    return path


@pytest.fixture
def micro_config_file(tmp_path: Path, synth_csv: Path) -> Path:
    """Configuración YAML de una corrida rápida sobre `synth_csv`."""
    tree = {
        'seed': 5,
        'out_dir': str(tmp_path / 'run'),
        'model': {
            'd_model': 8,
            'heads': 2,
            'window': 6,
            'encoder_layers': 1,
            'decoder_layers': 1,
            'conv_kernels': 4,
            'lstm_hidden': 6,
            'ffn_width': 16,
        },
        'train': {'epochs': 2, 'batch_size': 8},
        'data': {'path': str(synth_csv), 'train_size': 40, 'test_size': 20},
        'gradcheck': {'entries_per_parameter': 2},
    }
    path = tmp_path / 'config.yaml'
    path.write_text(yaml.safe_dump(tree), encoding='utf-8')
    return path
