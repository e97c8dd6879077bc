# -*- coding: utf-8 -*-
"""Normalización min-max por columna, ajustada sólo con el tramo de entrenamiento."""

from dataclasses import dataclass
from dataclasses import replace
from typing import Any
from typing import Dict
from typing import Optional
from typing import Sequence
import numpy as np
from loguru import logger
from apps.data.table import TimeSeriesTable
from config.exceptions import DimensionError
from config.exceptions import UsageError


@dataclass(frozen=True)
class NormalizationState:
    minimum: np.ndarray
    maximum: np.ndarray

    @classmethod
    def fit(cls, table: TimeSeriesTable) -> 'NormalizationState':
        return cls(minimum=table.values.min(axis=0).copy(), maximum=table.values.max(axis=0).copy())

    @property
    def span(self) -> np.ndarray:
        return self.maximum - self.minimum

    def select(self, columns: Sequence[int]) -> 'NormalizationState':
        columns = list(columns)
        return NormalizationState(minimum=self.minimum[columns], maximum=self.maximum[columns])

    def transform(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64)
        self._check_width(values)
        span = self.span
        constant = span == 0.0
        # columnas constantes → 0.0
        safe = np.where(constant, 1.0, span)
        return np.where(constant, 0.0, (values - self.minimum) / safe)

    def inverse(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64)
        self._check_width(values)
        return values * self.span + self.minimum

    def _check_width(self, values: np.ndarray) -> None:
        if values.shape[-1] != self.minimum.shape[0]:
            raise DimensionError(f'{values.shape[-1]} columnas, el estado tiene {self.minimum.shape[0]}')

    def as_dict(self) -> Dict[str, Any]:
        return {'minimum': self.minimum.tolist(), 'maximum': self.maximum.tolist()}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> 'NormalizationState':
        return cls(minimum=np.asarray(payload['minimum'], dtype=np.float64),
                   maximum=np.asarray(payload['maximum'], dtype=np.float64))


def fit_normalization(table: TimeSeriesTable) -> NormalizationState:
    return NormalizationState.fit(table)


def normalize(table: TimeSeriesTable, state: NormalizationState) -> TimeSeriesTable:
    """x' = (x − min) / (max − min) con el estado del entrenamiento; sin recortar."""
    values = state.transform(table.values)
    if values.size and (values.min() < 0.0 or values.max() > 1.0):
        logger.warning('⚠️ Hay valores fuera de [0, 1] respecto al rango de entrenamiento; no se recortan')
    return replace(table, values=values)


def denormalize(table: TimeSeriesTable, state: Optional[NormalizationState]) -> TimeSeriesTable:
    if state is None:
        raise UsageError('denormalize requiere el estado ajustado en normalize')
    return replace(table, values=state.inverse(table.values))
