# -*- coding: utf-8 -*-
"""Mecanismo de fusión deslizante.

Para cada instante t se apilan las filas t de las k matrices (c^(t), k×d),
se ponderan con W (w^(t) = c^(t)ᵀW) y se atenúan con el acarreo del instante
anterior s^(t−1) = σ(w^(t−1)), con s^(0) = unos:

    f^(t) = w^(t) ⊙ s^(t−1),    e = [f^(1); ...; f^(n)]

f^(t) sólo depende de los instantes t y t−1.
"""

from typing import Optional
from typing import Sequence
from typing import Tuple
import numpy as np
from apps.autodiff import functions as F
from apps.autodiff.tensor import Tensor
from apps.layers.base import Layer
from apps.layers.base import parameter
from config.exceptions import DimensionError


class SlidingFusion(Layer):
    """
    Parámetros de la fusión deslizante.

    Args:
        stack_height: k, número de matrices fusionadas (3 tras la atención vecina, 2 en la unión).
        d_model: ancho de cada matriz.
        steps: si se indica, un vector de pesos distinto por instante (W es k×steps);
            si no, un único W compartido (k×1).
    """

    def __init__(self, stack_height: int, d_model: int, steps: Optional[int] = None):
        self.stack_height = stack_height
        self.d_model = d_model
        self.steps = steps
        cols = 1 if steps is None else steps
        # arranca como promedio simple de la pila
        self.weight: Tensor = parameter(np.full((stack_height, cols), 1.0 / stack_height))

    def forward(self, stack: Sequence[Tensor]) -> Tuple[Tensor, Tensor]:
        if len(stack) != self.stack_height:
            raise DimensionError(f'La fusión espera {self.stack_height} matrices, recibió {len(stack)}')
        shapes = {m.shape for m in stack}
        if len(shapes) != 1:
            raise DimensionError(f'Formas heterogéneas en la pila: {sorted(shapes)}')
        n, d = stack[0].shape
        if d != self.d_model:
            raise DimensionError(f'Fusión de ancho {self.d_model} recibió matrices de ancho {d}')
        if self.steps is not None and n != self.steps:
            raise DimensionError(f'Pesos por instante para {self.steps} instantes, la pila tiene {n}')

        weighted = F.fuse_stack(stack, self.weight)
        carry = Tensor.ones(1, d)
        if n > 1:
            carry = F.concat_rows([carry, F.sigmoid(F.slice_rows(weighted, 0, n - 1))])
        e = F.mul(weighted, carry)
        return e, F.interleave_rows(stack)


def sliding_fusion(stack: Sequence[Tensor], params: SlidingFusion) -> Tuple[Tensor, Tensor]:
    return params.forward(stack)
