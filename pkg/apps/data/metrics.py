# -*- coding: utf-8 -*-
from dataclasses import dataclass
from typing import Any
from typing import Dict
from typing import Literal
from typing import Optional
from typing import Sequence
import numpy as np
from apps.data.normalization import NormalizationState
from config.exceptions import InputError
from config.exceptions import UsageError

Units = Literal['normalized', 'original']


@dataclass(frozen=True)
class MetricsReport:
    mae: np.ndarray
    rmse: np.ndarray
    units: Units
    targets: Sequence[str]

    def as_dict(self) -> Dict[str, Any]:
        return {
            'units': self.units,
            'targets': {
                name: {'mae': float(mae), 'rmse': float(rmse)}
                for name, mae, rmse in zip(self.targets, self.mae, self.rmse)
            },
        }


def metrics(pred: np.ndarray, truth: np.ndarray, norm_state: Optional[NormalizationState] = None,
            units: Units = 'normalized', targets: Optional[Sequence[str]] = None) -> MetricsReport:
    """MAE y RMSE por objetivo.

    Args:
        pred: predicciones K×m (o vector de largo K).
        truth: valores reales alineados con `pred`.
        norm_state: estado restringido a las columnas objetivo; obligatorio en unidades originales.
        units: 'normalized' compara tal cual; 'original' desnormaliza ambas series antes.
        targets: nombres de las columnas para el reporte.
    """
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.ndim == 1:
        pred = pred[:, None]
    if truth.ndim == 1:
        truth = truth[:, None]
    if pred.shape != truth.shape:
        raise InputError(f'Longitudes distintas: predicción {pred.shape}, real {truth.shape}')
    if pred.shape[0] == 0:
        raise InputError('No hay puntos que evaluar')

    if units == 'original':
        if norm_state is None:
            raise UsageError('Las métricas en unidades originales requieren el estado de normalización')
        pred, truth = norm_state.inverse(pred), norm_state.inverse(truth)

    error = pred - truth
    mae = np.mean(np.abs(error), axis=0)
    rmse = np.sqrt(np.mean(error ** 2, axis=0))
    names = list(targets) if targets is not None else [f'target_{j}' for j in range(pred.shape[1])]
    return MetricsReport(mae=mae, rmse=rmse, units=units, targets=names)
