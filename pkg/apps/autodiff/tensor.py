# -*- coding: utf-8 -*-
"""Tensor denso 2-D y grafo de cómputo definido en ejecución.

Las operaciones sólo se registran dentro de un `Graph` activo; fuera de él
calculan valores sin guardar nada (modo inferencia). El grafo activo vive en
un `ContextVar`, así que cada hilo construye el suyo.
"""

from contextvars import ContextVar
from typing import Any
from typing import Callable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
import numpy as np
from config.exceptions import ShapeError

_active_graph: ContextVar[Optional['Graph']] = ContextVar('active_graph', default=None)


class Tensor:
    """Matriz real en doble precisión; el tiempo siempre es el eje de filas."""

    __slots__ = ('data', 'requires_grad', 'grad', 'node', 'name')

    def __init__(self, data: Any, requires_grad: bool = False, name: Optional[str] = None):
        array = np.array(data, dtype=np.float64)
        if array.ndim == 0:
            array = array.reshape(1, 1)
        elif array.ndim == 1:
            array = array.reshape(1, -1)
        elif array.ndim != 2:
            raise ShapeError(f'Tensor sólo admite 2 dimensiones, recibido {array.shape}')
        self.data: np.ndarray = array
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self.node: Optional['Node'] = None
        self.name = name

    @classmethod
    def wrap(cls, array: np.ndarray) -> 'Tensor':
        """Envuelve un arreglo float64 2-D ya construido, sin copiarlo."""
        tensor = cls.__new__(cls)
        tensor.data = array
        tensor.requires_grad = False
        tensor.grad = None
        tensor.node = None
        tensor.name = None
        return tensor

    @classmethod
    def zeros(cls, rows: int, cols: int, requires_grad: bool = False) -> 'Tensor':
        return cls(np.zeros((rows, cols)), requires_grad=requires_grad)

    @classmethod
    def ones(cls, rows: int, cols: int, requires_grad: bool = False) -> 'Tensor':
        return cls(np.ones((rows, cols)), requires_grad=requires_grad)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    def zero_grad(self) -> None:
        self.grad = None

    def detach(self) -> 'Tensor':
        return Tensor(self.data.copy())

    def item(self) -> float:
        if self.shape != (1, 1):
            raise ShapeError(f'item() requiere un tensor 1×1, recibido {self.shape}')
        return float(self.data[0, 0])

    def numpy(self) -> np.ndarray:
        return self.data

    def __repr__(self) -> str:
        label = f' {self.name}' if self.name else ''
        return f'Tensor{label}({self.rows}×{self.cols}, requires_grad={self.requires_grad})'


class Node:
    """Operación registrada: entradas, salida y regla hacia atrás."""

    __slots__ = ('op', 'inputs', 'output', 'backward_fn', 'graph', 'index')

    def __init__(self, op: str, inputs: Sequence[Tensor], output: Tensor,
                 backward_fn: Callable[[np.ndarray], Sequence[Optional[np.ndarray]]], graph: 'Graph', index: int):
        self.op = op
        self.inputs = tuple(inputs)
        self.output = output
        self.backward_fn = backward_fn
        self.graph = graph
        self.index = index


class Graph:
    """Lista ordenada de operaciones grabadas durante una pasada hacia adelante.

    Ejemplo:
        with Graph() as graph:
            loss = mse_loss(model.forward(window), target)
        backward(loss)
    """

    def __init__(self):
        self.nodes: List[Node] = []
        self._token = None

    def __enter__(self) -> 'Graph':
        self._token = _active_graph.set(self)
        return self

    def __exit__(self, *exc_info) -> None:
        _active_graph.reset(self._token)
        self._token = None

    def __len__(self) -> int:
        return len(self.nodes)

    def record(self, op: str, inputs: Sequence[Tensor], output: Tensor,
               backward_fn: Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]) -> Node:
        node = Node(op, inputs, output, backward_fn, self, len(self.nodes))
        self.nodes.append(node)
        output.node = node
        return node

    def first_non_finite(self) -> Optional[Node]:
        """Primera operación (en orden de grabación) cuya salida no es finita."""
        for node in self.nodes:
            if not np.all(np.isfinite(node.output.data)):
                return node
        return None


def active_graph() -> Optional[Graph]:
    return _active_graph.get()


def backward(loss: Tensor) -> None:
    """Acumula gradientes recorriendo el grafo en orden inverso de grabación.

    Los gradientes se suman cuando un tensor alimenta a varios consumidores.

    Raises:
        ShapeError: si `loss` no es 1×1.
    """
    if loss.shape != (1, 1):
        raise ShapeError(f'backward() requiere una pérdida escalar 1×1, recibido {loss.rows}×{loss.cols}')

    seed = np.ones((1, 1))
    loss.grad = seed if loss.grad is None else loss.grad + seed
    if loss.node is None:
        return

    graph = loss.node.graph
    for node in reversed(graph.nodes[: loss.node.index + 1]):
        upstream = node.output.grad
        if upstream is None:
            continue
        grads = node.backward_fn(upstream)
        for tensor, grad in zip(node.inputs, grads):
            if grad is None or not tensor.requires_grad:
                continue
            tensor.grad = grad if tensor.grad is None else tensor.grad + grad
