# -*- coding: utf-8 -*-
from typing import Dict
from typing import List
from typing import Mapping
from typing import Tuple
import numpy as np
from apps.autodiff.tensor import Tensor
from config.exceptions import DimensionError


def parameter(array: np.ndarray) -> Tensor:
    """Crea un tensor entrenable."""
    return Tensor(np.ascontiguousarray(array, dtype=np.float64), requires_grad=True)


def glorot(rng: np.random.Generator, shape: Tuple[int, int], fan_in: int = None, fan_out: int = None) -> Tensor:
    """Uniforme en ±√(6/(fan_in+fan_out)); por defecto los abanicos son la forma de la matriz."""
    fan_in = shape[0] if fan_in is None else fan_in
    fan_out = shape[1] if fan_out is None else fan_out
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return parameter(rng.uniform(-limit, limit, size=shape))


class Layer:
    """
    Contenedor base de parámetros.
    Descubre los tensores entrenables en sus atributos (directos, en listas
    o en sub-capas) y les asigna nombres con puntos, p. ej. `lstm1.w_x`
    o `kernels.3`. El orden es el de asignación de los atributos.
    """

    def named_parameters(self, prefix: str = '') -> Dict[str, Tensor]:
        named: Dict[str, Tensor] = {}
        for attr, value in vars(self).items():
            self._collect(named, f'{prefix}{attr}', value)
        return named

    @staticmethod
    def _collect(named: Dict[str, Tensor], key: str, value) -> None:
        if isinstance(value, Tensor):
            if value.requires_grad:
                named[key] = value
        elif isinstance(value, Layer):
            named.update(value.named_parameters(f'{key}.'))
        elif isinstance(value, (list, tuple)):
            for i, item in enumerate(value):
                Layer._collect(named, f'{key}.{i}', item)

    def parameters(self) -> List[Tensor]:
        return list(self.named_parameters().values())

    def parameter_count(self) -> int:
        return int(sum(p.data.size for p in self.parameters()))

    def zero_grad(self) -> None:
        for p in self.parameters():
            p.zero_grad()

    def export_arrays(self) -> Dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self.named_parameters().items()}

    def load_arrays(self, arrays: Mapping[str, np.ndarray]) -> None:
        """Copia valores por nombre; nombres o formas distintos son un error."""
        named = self.named_parameters()
        missing = sorted(set(named) - set(arrays))
        unexpected = sorted(set(arrays) - set(named))
        if missing or unexpected:
            raise DimensionError(f'Parámetros incompatibles: faltan {missing[:5]}, sobran {unexpected[:5]}')
        for name, p in named.items():
            value = np.asarray(arrays[name], dtype=np.float64)
            if value.shape != p.shape:
                raise DimensionError(f'{name}: forma {value.shape}, se esperaba {p.shape}')
            p.data = np.ascontiguousarray(value.copy())
