# -*- coding: utf-8 -*-
"""Pronóstico de un tramo completo y sus métricas.

La predicción de la posición 0 del centro de cada ventana queda en el índice
de ese punto y pronostica el valor siguiente; la verdad se ensambla de los
objetivos de las mismas ventanas, así ambas series quedan alineadas por
construcción. La persistencia pronostica ese valor con la observación del
propio índice.
"""

from dataclasses import dataclass
from typing import Any
from typing import Dict
from typing import List
import numpy as np
import pandas as pd
from loguru import logger
from apps.data.assembly import assemble_predictions
from apps.data.baseline import persistence_baseline
from apps.data.metrics import metrics
from apps.data.normalization import NormalizationState
from apps.data.normalization import normalize
from apps.data.pipeline import PreparedData
from apps.data.pipeline import Split
from apps.forecaster.model import Forecaster


@dataclass(frozen=True)
class Forecast:
    split: Split
    indices: np.ndarray
    prediction: np.ndarray
    truth: np.ndarray
    baseline: np.ndarray
    targets: List[str]
    offset: int
    state: NormalizationState


def forecast_split(model: Forecaster, prepared: PreparedData, split: Split = 'test') -> Forecast:
    """Pasada en modo evaluación sobre cada ventana del tramo y ensamblado por cobertura."""
    dataset = prepared.windows(split)
    outputs = [model.predict(window.values.data) for window in dataset]
    predicted = assemble_predictions(outputs, dataset)
    truth = assemble_predictions([window.targets.data for window in dataset], dataset)

    table = normalize(prepared.split(split), prepared.state)
    columns = list(table.target_columns)
    series = table.values[:, columns]
    # el último índice cubierto con relleno pronostica la fila replicada
    extended = np.vstack([series, series[-1:]])
    baseline = persistence_baseline(extended)[predicted.indices]

    logger.info(f'🔮 {len(predicted)} puntos pronosticados en el tramo {split}')
    return Forecast(
        split=split,
        indices=predicted.indices,
        prediction=predicted.values,
        truth=truth.values,
        baseline=baseline,
        targets=table.target_names,
        offset=prepared.offset(split),
        state=prepared.state.select(columns),
    )


def predictions_frame(forecast: Forecast) -> pd.DataFrame:
    """Formato largo en unidades originales: index, target, truth, prediction."""
    truth = forecast.state.inverse(forecast.truth)
    prediction = forecast.state.inverse(forecast.prediction)
    frames = [
        pd.DataFrame({
            'index': forecast.indices + forecast.offset,
            'target': name,
            'truth': truth[:, j],
            'prediction': prediction[:, j],
        })
        for j, name in enumerate(forecast.targets)
    ]
    return pd.concat(frames, ignore_index=True)


def evaluate(forecast: Forecast) -> Dict[str, Any]:
    """MAE/RMSE del modelo y de la persistencia, en unidades normalizadas y originales."""
    summary = {'split': forecast.split, 'points': int(forecast.indices.shape[0])}
    for label, pred in (('model', forecast.prediction), ('baseline', forecast.baseline)):
        summary[label] = {
            units: metrics(pred, forecast.truth, forecast.state, units, forecast.targets).as_dict()['targets']
            for units in ('normalized', 'original')
        }
    return summary
