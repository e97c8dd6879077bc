# -*- coding: utf-8 -*-
"""Atención multi-cabeza y atención vecina.

En la atención vecina Q y V salen del centro h_C y K del tramo vecino
(h_F o h_B). Cada cabeza devuelve d_model columnas, así que W^O es
(p·d_model)×d_model. Las sub-capas del codificador y del decodificador usan
la misma clase con el reparto clásico d_model/p por cabeza.
"""

import math
from typing import List
from typing import Optional
import numpy as np
from apps.autodiff import functions as F
from apps.autodiff.tensor import Tensor
from apps.layers.base import Layer
from apps.layers.base import glorot
from config.exceptions import DimensionError


class MultiHeadAttention(Layer):
    def __init__(self, d_model: int, heads: int, d_key: int, d_value: int, rng: np.random.Generator):
        self.d_model = d_model
        self.heads = heads
        self.d_key = d_key
        self.d_value = d_value
        self.w_q: List[Tensor] = [glorot(rng, (d_model, d_key)) for _ in range(heads)]
        self.w_k: List[Tensor] = [glorot(rng, (d_model, d_key)) for _ in range(heads)]
        self.w_v: List[Tensor] = [glorot(rng, (d_model, d_value)) for _ in range(heads)]
        self.w_o: Tensor = glorot(rng, (heads * d_value, d_model))

    def _check(self, *sources: Tensor) -> None:
        for source in sources:
            if source.cols != self.d_model:
                raise DimensionError(f'Atención de ancho {self.d_model} recibió una entrada {source.rows}×{source.cols}')

    def weights(self, query_src: Tensor, key_src: Tensor, mask: Optional[np.ndarray] = None) -> List[Tensor]:
        """softmax(QKᵀ/√d_key) de cada cabeza; cada fila suma 1."""
        self._check(query_src, key_src)
        scale = 1.0 / math.sqrt(self.d_key)
        out = []
        for w_q, w_k in zip(self.w_q, self.w_k):
            q = F.matmul(query_src, w_q)
            k = F.matmul(key_src, w_k)
            scores = F.scale(F.matmul(q, F.transpose(k)), scale)
            out.append(F.softmax_rows(scores, mask=mask))
        return out

    def attend(self, query_src: Tensor, key_src: Tensor, value_src: Tensor,
               mask: Optional[np.ndarray] = None) -> Tensor:
        if key_src.rows != value_src.rows:
            raise DimensionError(f'Claves ({key_src.rows} filas) y valores ({value_src.rows} filas) no coinciden')
        self._check(value_src)
        heads = [
            F.matmul(weights, F.matmul(value_src, w_v))
            for weights, w_v in zip(self.weights(query_src, key_src, mask), self.w_v)
        ]
        merged = heads[0] if len(heads) == 1 else F.concat_cols(heads)
        return F.matmul(merged, self.w_o)


class NeighborAttention(MultiHeadAttention):
    """Parámetros de la atención vecina: W_Q, W_K (d_model×d_attn), W_V (d_model×d_model) por cabeza y W^O."""

    def __init__(self, d_model: int, heads: int, d_attn: int, rng: np.random.Generator):
        super().__init__(d_model=d_model, heads=heads, d_key=d_attn, d_value=d_model, rng=rng)

    def forward(self, h_center: Tensor, h_side: Tensor) -> Tensor:
        if h_center.shape != h_side.shape:
            raise DimensionError(f'Centro {h_center.shape} y tramo vecino {h_side.shape} deben tener la misma forma')
        return self.attend(h_center, h_side, h_center)


def neighbor_attention(h_center: Tensor, h_side: Tensor, params: NeighborAttention) -> Tensor:
    return params.forward(h_center, h_side)
