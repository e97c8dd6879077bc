# -*- coding: utf-8 -*-
"""Capa diferencial y codificación posicional.

Cada ventana X de N filas se parte en tres tramos solapados de n = N−2 filas:
el tramo hacia adelante x1 = X[0:n], el centro de entrenamiento x2 = X[1:n+1]
y el tramo hacia atrás x3 = X[2:n+2]. Las diferencias x2−x1 y x2−x3 exponen
el cambio local alrededor de cada instante del centro.
"""

from dataclasses import dataclass
import numpy as np
from apps.autodiff import functions as F
from apps.autodiff.tensor import Tensor
from config.exceptions import ConfigError
from config.exceptions import DimensionError
from config.exceptions import WindowTooShortError


@dataclass(frozen=True)
class PositionalEncoding:
    length: int
    d_model: int
    table: Tensor

    @classmethod
    def build(cls, length: int, d_model: int) -> 'PositionalEncoding':
        return cls(length=length, d_model=d_model, table=positional_encode(length, d_model))

    @classmethod
    def zeros(cls, length: int, d_model: int) -> 'PositionalEncoding':
        return cls(length=length, d_model=d_model, table=Tensor.zeros(length, d_model))


@dataclass(frozen=True)
class WindowTriple:
    forward: Tensor
    center: Tensor
    backward: Tensor
    diff_forward: Tensor
    diff_backward: Tensor

    @property
    def n(self) -> int:
        return self.center.rows


def positional_encode(n: int, d_model: int) -> Tensor:
    """Tabla senoidal: PE[p, 2i] = sin(p / 10000^(2i/d)), PE[p, 2i+1] = cos(...), p desde 0."""
    if d_model % 2:
        raise ConfigError(f'La codificación posicional requiere d_model par, recibido {d_model}')
    if n < 1:
        raise ConfigError(f'La codificación posicional requiere n ≥ 1, recibido {n}')
    positions = np.arange(n, dtype=np.float64)[:, None]
    divisor = 10000.0 ** (2.0 * np.arange(d_model // 2, dtype=np.float64) / d_model)
    table = np.empty((n, d_model))
    table[:, 0::2] = np.sin(positions / divisor)
    table[:, 1::2] = np.cos(positions / divisor)
    return Tensor.wrap(table)


def differential_split(window: Tensor) -> WindowTriple:
    N = window.rows
    if N < 4:
        raise WindowTooShortError(f'La ventana necesita al menos 4 filas, recibidas {N}')
    n = N - 2
    x1 = F.slice_rows(window, 0, n)
    x2 = F.slice_rows(window, 1, n + 1)
    x3 = F.slice_rows(window, 2, n + 2)
    return WindowTriple(
        forward=x1,
        center=x2,
        backward=x3,
        diff_forward=F.sub(x2, x1),
        diff_backward=F.sub(x2, x3),
    )


def embed_with_pe(x: Tensor, weight: Tensor, pe: PositionalEncoding) -> Tensor:
    """xW + PE; la codificación es aditiva e independiente de la entrada."""
    if pe.length < x.rows:
        raise DimensionError(f'La codificación posicional cubre {pe.length} posiciones, se necesitan {x.rows}')
    if pe.d_model != weight.cols:
        raise DimensionError(f'Codificación de ancho {pe.d_model} para un embedding de ancho {weight.cols}')
    rows = pe.table if pe.length == x.rows else Tensor.wrap(pe.table.data[: x.rows])
    return F.add(F.matmul(x, weight), rows)
