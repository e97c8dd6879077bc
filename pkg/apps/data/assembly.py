# -*- coding: utf-8 -*-
"""Reconstrucción de una serie continua a partir de ventanas solapadas."""

from dataclasses import dataclass
from typing import Sequence
import numpy as np
from apps.data.windows import WindowedDataset
from config.exceptions import ConsistencyError


@dataclass(frozen=True)
class AssembledSeries:
    """Un valor por índice cubierto; `indices` es un rango entero contiguo."""
    indices: np.ndarray
    values: np.ndarray

    def __len__(self) -> int:
        return self.indices.shape[0]


def assemble_predictions(outputs: Sequence[np.ndarray], dataset: WindowedDataset) -> AssembledSeries:
    """De cada ventana salvo la última se toma la posición 0 del centro; de la última, el centro completo.

    Args:
        outputs: una matriz n×|objetivos| por ventana, en el orden de `dataset`.
        dataset: las ventanas que produjeron `outputs`.

    Raises:
        ConsistencyError: cantidad de salidas distinta, índices escritos dos veces o huecos.
    """
    if len(outputs) != len(dataset):
        raise ConsistencyError(f'{len(outputs)} salidas para {len(dataset)} ventanas')
    if not len(dataset):
        raise ConsistencyError('No hay ventanas que ensamblar')

    written = {}
    last = len(dataset) - 1
    for k, (output, window) in enumerate(zip(outputs, dataset)):
        output = np.asarray(output, dtype=np.float64).reshape(dataset.n, -1)
        positions = range(dataset.n) if k == last else (0,)
        for t in positions:
            index = window.first_center + t
            if index in written:
                raise ConsistencyError(f'El índice {index} se escribió dos veces (ventana {k})')
            written[index] = output[t]

    indices = np.array(sorted(written), dtype=np.int64)
    if indices[-1] - indices[0] + 1 != indices.shape[0]:
        raise ConsistencyError(f'Cobertura con huecos entre {indices[0]} y {indices[-1]}')
    return AssembledSeries(indices=indices, values=np.vstack([written[i] for i in indices]))
