# -*- coding: utf-8 -*-
"""Adam con corrección de sesgo y recorte opcional por norma global."""

from typing import Any
from typing import Dict
from typing import Mapping
from typing import Tuple
import numpy as np
from apps.autodiff.tensor import Tensor
from config.exceptions import DimensionError
from config.exceptions import ParameterError


def adam_step(param: np.ndarray, grad: np.ndarray, m: np.ndarray, v: np.ndarray, t: int, lr: float,
              beta1: float = 0.9, beta2: float = 0.999, epsilon: float = 1e-8
              ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Un paso de Adam; `t` es el contador de pasos ya incrementado (≥ 1).

    Returns:
        (parámetro, primer momento, segundo momento) actualizados, como arreglos nuevos.
    """
    if t < 1:
        raise ParameterError(f'El contador de pasos debe ser ≥ 1, recibido {t}')
    if not (param.shape == grad.shape == m.shape == v.shape):
        raise DimensionError(f'Formas de Adam no coinciden: {param.shape}, {grad.shape}, {m.shape}, {v.shape}')
    m = beta1 * m + (1.0 - beta1) * grad
    v = beta2 * v + (1.0 - beta2) * grad * grad
    m_hat = m / (1.0 - beta1 ** t)
    v_hat = v / (1.0 - beta2 ** t)
    return param - lr * m_hat / (np.sqrt(v_hat) + epsilon), m, v


def clip_grad_norm(params: Mapping[str, Tensor], max_norm: float) -> float:
    """Escala todos los gradientes si su norma global supera `max_norm`; devuelve la norma previa."""
    grads = [p.grad for p in params.values() if p.grad is not None]
    total = float(np.sqrt(sum(float(np.sum(g * g)) for g in grads)))
    if np.isfinite(total) and total > max_norm:
        factor = max_norm / total
        for p in params.values():
            if p.grad is not None:
                p.grad = p.grad * factor
    return total


class Adam:
    """Estado del optimizador por parámetro con nombre.

    Ejemplo:
        optimizer = Adam(model.named_parameters())
        optimizer.step(lr=5e-4)
    """

    def __init__(self, params: Mapping[str, Tensor], beta1: float = 0.9, beta2: float = 0.999,
                 epsilon: float = 1e-8):
        self.params: Dict[str, Tensor] = dict(params)
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.t = 0
        self.m: Dict[str, np.ndarray] = {name: np.zeros_like(p.data) for name, p in self.params.items()}
        self.v: Dict[str, np.ndarray] = {name: np.zeros_like(p.data) for name, p in self.params.items()}

    def step(self, lr: float) -> None:
        self.t += 1
        for name, p in self.params.items():
            grad = p.grad if p.grad is not None else np.zeros_like(p.data)
            p.data, self.m[name], self.v[name] = adam_step(
                p.data, grad, self.m[name], self.v[name], self.t, lr, self.beta1, self.beta2, self.epsilon
            )

    def state_dict(self) -> Dict[str, Any]:
        return {
            't': self.t,
            'beta1': self.beta1,
            'beta2': self.beta2,
            'epsilon': self.epsilon,
            'm': {name: value.copy() for name, value in self.m.items()},
            'v': {name: value.copy() for name, value in self.v.items()},
        }

    def load_state_dict(self, state: Mapping[str, Any]) -> None:
        names = set(self.params)
        if set(state['m']) != names or set(state['v']) != names:
            raise DimensionError('El estado del optimizador no corresponde a los parámetros del modelo')
        self.t = int(state['t'])
        self.beta1 = float(state['beta1'])
        self.beta2 = float(state['beta2'])
        self.epsilon = float(state['epsilon'])
        for name, p in self.params.items():
            m = np.asarray(state['m'][name], dtype=np.float64).reshape(p.shape)
            v = np.asarray(state['v'][name], dtype=np.float64).reshape(p.shape)
            self.m[name], self.v[name] = m.copy(), v.copy()
