# -*- coding: utf-8 -*-
"""Cadena compartida por los subcomandos: CSV → división → normalización → ventanas."""

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Literal
from typing import Optional
from loguru import logger
from apps.data.normalization import NormalizationState
from apps.data.normalization import fit_normalization
from apps.data.normalization import normalize
from apps.data.table import TimeSeriesTable
from apps.data.table import load_csv
from apps.data.table import split_table
from apps.data.windows import WindowedDataset
from apps.data.windows import make_windows
from config.exceptions import ConfigError
from config.run_config import RunConfig

Split = Literal['train', 'test']


@dataclass
class PreparedData:
    """Tramos normalizados; las ventanas de cada tramo se arman recién cuando se piden."""
    table: TimeSeriesTable
    train: TimeSeriesTable
    test: TimeSeriesTable
    state: NormalizationState
    window: int
    pad: bool = True

    @cached_property
    def train_windows(self) -> WindowedDataset:
        return self._make(self.train, 'train')

    @cached_property
    def test_windows(self) -> WindowedDataset:
        return self._make(self.test, 'test')

    def _make(self, table: TimeSeriesTable, name: Split) -> WindowedDataset:
        windows = make_windows(normalize(table, self.state), self.window, self.pad)
        logger.info(f'🪟 {len(windows)} ventanas de {name} (N={self.window}, relleno={self.pad})')
        return windows

    def split(self, name: Split) -> TimeSeriesTable:
        return self.train if name == 'train' else self.test

    def windows(self, name: Split) -> WindowedDataset:
        return self.train_windows if name == 'train' else self.test_windows

    def offset(self, name: Split) -> int:
        """Fila del archivo donde empieza el tramo."""
        return 0 if name == 'train' else self.train.length


def load_table(config: RunConfig) -> TimeSeriesTable:
    if not config.data.path:
        raise ConfigError('No se indicó el archivo de datos (--data o data.path)')
    return load_csv(Path(config.data.path), config.data.index_column, config.data.targets)


def bind_model_to_table(config: RunConfig, table: TimeSeriesTable) -> RunConfig:
    """Fija el ancho de entrada y las columnas objetivo del modelo a partir de la tabla."""
    tree = config.model_dump()
    tree['model']['d_input'] = table.width
    tree['model']['target_columns'] = list(table.target_columns)
    tree['data']['targets'] = table.target_names
    return RunConfig.model_validate(tree)


def check_compatible(config: RunConfig, table: TimeSeriesTable) -> None:
    """El modelo guardado debe coincidir con el ancho y los objetivos de los datos."""
    if table.width != config.model.d_input:
        raise ConfigError(
            f'El modelo espera {config.model.d_input} columnas de entrada y los datos tienen {table.width}'
        )
    if list(table.target_columns) != list(config.model.target_columns):
        raise ConfigError(
            f'Objetivos del modelo {config.model.target_columns} distintos de los de los datos {list(table.target_columns)}'
        )


def prepare(config: RunConfig, table: TimeSeriesTable, state: Optional[NormalizationState] = None) -> PreparedData:
    """Divide y fija la normalización con el tramo de entrenamiento (o con `state`)."""
    train, test = split_table(table, config.data.train_size, config.data.test_size, config.data.train_fraction)
    state = state if state is not None else fit_normalization(train)
    logger.info(f'✂️ División: {train.length} filas de entrenamiento y {test.length} de prueba')
    return PreparedData(table=table, train=train, test=test, state=state, window=config.model.window,
                        pad=config.data.pad)
