# -*- coding: utf-8 -*-
import numpy as np
from config.exceptions import InputError
from config.exceptions import ParameterError


def persistence_baseline(series: np.ndarray, horizon: int = 1) -> np.ndarray:
    """Pronóstico ingenuo: el valor en t es la observación en t − horizon.

    Devuelve las predicciones para t = horizon..T−1, alineadas con `series[horizon:]`.
    """
    series = np.asarray(series, dtype=np.float64)
    if horizon < 1:
        raise ParameterError(f'horizon debe ser ≥ 1, recibido {horizon}')
    if series.shape[0] < horizon + 1:
        raise InputError(f'La serie necesita al menos {horizon + 1} puntos, tiene {series.shape[0]}')
    return series[:-horizon].copy()
