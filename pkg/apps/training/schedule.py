# -*- coding: utf-8 -*-
"""Decaimiento de la tasa de aprendizaje por época.

En modo `compound` cada época multiplica la tasa anterior por base^e:

    lr(0) = lr0,  lr(e) = lr(e−1) · base^e   ⇒   lr(e) = lr0 · base^(e(e+1)/2)

El modo `exponential` es el decaimiento convencional lr0 · base^e.
"""

from typing import Literal
from config.exceptions import ParameterError

LrMode = Literal['compound', 'exponential']


def lr_schedule(epoch: int, lr0: float, base: float, mode: LrMode = 'compound') -> float:
    if epoch < 0:
        raise ParameterError(f'La época debe ser ≥ 0, recibido {epoch}')
    if mode == 'compound':
        return lr0 * base ** (epoch * (epoch + 1) / 2)
    if mode == 'exponential':
        return lr0 * base ** epoch
    raise ParameterError(f"Modo de decaimiento desconocido '{mode}'")


def lr_recursive(epoch: int, lr0: float, base: float) -> float:
    """Misma tasa que el modo `compound`, evaluada con la recurrencia."""
    if epoch < 0:
        raise ParameterError(f'La época debe ser ≥ 0, recibido {epoch}')
    lr = lr0
    for e in range(1, epoch + 1):
        lr *= base ** e
    return lr
