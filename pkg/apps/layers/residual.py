# -*- coding: utf-8 -*-
"""Capa residual: convolución por bloques, dos LSTM y suma del residuo.

La convolución recorre los bloques c^(t) (s filas por instante, s = 3 tras la
atención vecina y 2 en la unión) con 16 núcleos de s×d_model y paso s. La
primera LSTM lleva 16 → 32 y la segunda 32 → d_model; tras cada una se aplica
dropout de 0.5. La salida es e + LSTM2(...).
"""

from typing import List
from typing import Optional
import numpy as np
from apps.autodiff import functions as F
from apps.autodiff.tensor import Tensor
from apps.layers.base import Layer
from apps.layers.base import glorot
from apps.layers.base import parameter
from config.exceptions import DimensionError

CONV_KERNELS = 16
LSTM_HIDDEN = 32
DROPOUT = 0.5


class LSTM(Layer):
    """Pesos de una LSTM; compuertas en el orden entrada, olvido, salida, candidata."""

    def __init__(self, d_in: int, d_hidden: int, rng: np.random.Generator):
        self.d_in = d_in
        self.d_hidden = d_hidden
        self.w_x: Tensor = glorot(rng, (d_in, 4 * d_hidden))
        self.w_h: Tensor = glorot(rng, (d_hidden, 4 * d_hidden))
        bias = np.zeros((1, 4 * d_hidden))
        bias[0, d_hidden:2 * d_hidden] = 1.0
        self.bias: Tensor = parameter(bias)

    def forward(self, x: Tensor, h0: Optional[Tensor] = None, c0: Optional[Tensor] = None) -> Tensor:
        if x.cols != self.d_in:
            raise DimensionError(f'LSTM de entrada {self.d_in} recibió {x.rows}×{x.cols}')
        return F.lstm_sequence(x, self.w_x, self.w_h, self.bias, h0, c0)


def lstm_forward(x: Tensor, params: LSTM, h0: Optional[Tensor] = None, c0: Optional[Tensor] = None) -> Tensor:
    return params.forward(x, h0, c0)


class ResidualBlock(Layer):
    def __init__(self, stride: int, d_model: int, rng: np.random.Generator,
                 kernels: int = CONV_KERNELS, hidden: int = LSTM_HIDDEN, dropout: float = DROPOUT):
        self.stride = stride
        self.d_model = d_model
        self.dropout = dropout
        self.kernels: List[Tensor] = [
            glorot(rng, (stride, d_model), fan_in=stride * d_model, fan_out=kernels) for _ in range(kernels)
        ]
        self.conv_bias: Tensor = parameter(np.zeros((1, kernels)))
        self.lstm1 = LSTM(kernels, hidden, rng)
        self.lstm2 = LSTM(hidden, d_model, rng)

    def forward(self, e: Tensor, c_blocks: Tensor, training: bool = False,
                rng: Optional[np.random.Generator] = None) -> Tensor:
        if c_blocks.rows != self.stride * e.rows or c_blocks.cols != e.cols:
            raise DimensionError(
                f'Bloques {c_blocks.rows}×{c_blocks.cols} incompatibles con e {e.rows}×{e.cols} y paso {self.stride}'
            )
        features = F.conv1d_time(c_blocks, self.kernels, self.stride, self.conv_bias)
        hidden = F.dropout(self.lstm1.forward(features), self.dropout, training, rng)
        network = F.dropout(self.lstm2.forward(hidden), self.dropout, training, rng)
        return F.add(network, e)


def residual_block(e: Tensor, c_blocks: Tensor, params: ResidualBlock, training: bool = False,
                   rng: Optional[np.random.Generator] = None) -> Tensor:
    return params.forward(e, c_blocks, training, rng)
