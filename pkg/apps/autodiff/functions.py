# -*- coding: utf-8 -*-
"""Primitivas diferenciables.

Cada primitiva es una subclase de `Function` con `forward` y `backward`
estáticos sobre arreglos numpy. `apply` graba la operación en el grafo
activo; la regla hacia atrás se resuelve al momento de retropropagar.
"""

from typing import Literal
from typing import Optional
from typing import Sequence
from typing import Tuple
import numpy as np
from apps.autodiff.tensor import Tensor
from apps.autodiff.tensor import active_graph
from config.exceptions import BoundsError
from config.exceptions import DimensionError
from config.exceptions import ParameterError
from config.exceptions import ShapeError


class Context(dict):
    """Valores guardados en la pasada hacia adelante para la regla hacia atrás."""
    __getattr__ = dict.__getitem__
    __setattr__ = dict.__setitem__


class Function:
    name = 'function'

    @staticmethod
    def forward(ctx: Context, *arrays: np.ndarray, **attrs) -> np.ndarray:
        raise NotImplementedError

    @staticmethod
    def backward(ctx: Context, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        raise NotImplementedError

    @classmethod
    def apply(cls, *inputs: Tensor, **attrs) -> Tensor:
        ctx = Context()
        out = Tensor.wrap(cls.forward(ctx, *(t.data for t in inputs), **attrs))
        graph = active_graph()
        if graph is not None and any(t.requires_grad for t in inputs):
            out.requires_grad = True
            graph.record(cls.name, inputs, out, lambda g: cls.backward(ctx, g))
        return out


def _same_shape(op: str, a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f'{op}: formas incompatibles {a.shape[0]}×{a.shape[1]} y {b.shape[0]}×{b.shape[1]}')


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


class MatMul(Function):
    name = 'matmul'

    @staticmethod
    def forward(ctx, a, b):
        if a.shape[1] != b.shape[0]:
            raise DimensionError(
                f'matmul: dimensiones internas no coinciden {a.shape[0]}×{a.shape[1]} · {b.shape[0]}×{b.shape[1]}'
            )
        ctx.a, ctx.b = a, b
        return a @ b

    @staticmethod
    def backward(ctx, grad):
        return grad @ ctx.b.T, ctx.a.T @ grad


class Add(Function):
    name = 'add'

    @staticmethod
    def forward(ctx, a, b):
        _same_shape('add', a, b)
        return a + b

    @staticmethod
    def backward(ctx, grad):
        return grad, grad


class Sub(Function):
    name = 'sub'

    @staticmethod
    def forward(ctx, a, b):
        _same_shape('sub', a, b)
        return a - b

    @staticmethod
    def backward(ctx, grad):
        return grad, -grad


class Mul(Function):
    name = 'mul'

    @staticmethod
    def forward(ctx, a, b):
        _same_shape('mul', a, b)
        ctx.a, ctx.b = a, b
        return a * b

    @staticmethod
    def backward(ctx, grad):
        return grad * ctx.b, grad * ctx.a


class Sigmoid(Function):
    name = 'sigmoid'

    @staticmethod
    def forward(ctx, a):
        ctx.y = _sigmoid(a)
        return ctx.y

    @staticmethod
    def backward(ctx, grad):
        return (grad * ctx.y * (1.0 - ctx.y),)


class Tanh(Function):
    name = 'tanh'

    @staticmethod
    def forward(ctx, a):
        ctx.y = np.tanh(a)
        return ctx.y

    @staticmethod
    def backward(ctx, grad):
        return (grad * (1.0 - ctx.y * ctx.y),)


class ReLU(Function):
    name = 'relu'

    @staticmethod
    def forward(ctx, a):
        ctx.mask = a > 0.0
        return np.where(ctx.mask, a, 0.0)

    @staticmethod
    def backward(ctx, grad):
        return (np.where(ctx.mask, grad, 0.0),)


class SoftmaxRows(Function):
    name = 'softmax_rows'

    @staticmethod
    def forward(ctx, a, mask=None):
        if mask is not None:
            a = np.where(mask, -np.inf, a)
        shifted = a - a.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        y = e / e.sum(axis=1, keepdims=True)
        ctx.y = y
        return y

    @staticmethod
    def backward(ctx, grad):
        y = ctx.y
        return (y * (grad - (grad * y).sum(axis=1, keepdims=True)),)


class ConcatRows(Function):
    name = 'concat_rows'

    @staticmethod
    def forward(ctx, *arrays):
        cols = {a.shape[1] for a in arrays}
        if len(cols) != 1:
            raise DimensionError(f'concat_rows: número de columnas distinto {sorted(cols)}')
        ctx.bounds = np.cumsum([0] + [a.shape[0] for a in arrays])
        return np.concatenate(arrays, axis=0)

    @staticmethod
    def backward(ctx, grad):
        b = ctx.bounds
        return tuple(grad[b[i]:b[i + 1]] for i in range(len(b) - 1))


class ConcatCols(Function):
    name = 'concat_cols'

    @staticmethod
    def forward(ctx, *arrays):
        rows = {a.shape[0] for a in arrays}
        if len(rows) != 1:
            raise DimensionError(f'concat_cols: número de filas distinto {sorted(rows)}')
        ctx.bounds = np.cumsum([0] + [a.shape[1] for a in arrays])
        return np.concatenate(arrays, axis=1)

    @staticmethod
    def backward(ctx, grad):
        b = ctx.bounds
        return tuple(grad[:, b[i]:b[i + 1]] for i in range(len(b) - 1))


class SliceRows(Function):
    name = 'slice_rows'

    @staticmethod
    def forward(ctx, a, start, stop):
        if not 0 <= start <= stop <= a.shape[0]:
            raise BoundsError(f'slice_rows: rango [{start}, {stop}) fuera de 0..{a.shape[0]}')
        ctx.shape, ctx.start, ctx.stop = a.shape, start, stop
        return a[start:stop]

    @staticmethod
    def backward(ctx, grad):
        full = np.zeros(ctx.shape)
        full[ctx.start:ctx.stop] = grad
        return (full,)


class Transpose(Function):
    name = 'transpose'

    @staticmethod
    def forward(ctx, a):
        return a.T.copy()

    @staticmethod
    def backward(ctx, grad):
        return (grad.T,)


class InterleaveRows(Function):
    """Empalma k matrices n×d por instante: fila t·k + j = fila t de la j-ésima."""
    name = 'interleave_rows'

    @staticmethod
    def forward(ctx, *arrays):
        shapes = {a.shape for a in arrays}
        if len(shapes) != 1:
            raise DimensionError(f'interleave_rows: formas heterogéneas {sorted(shapes)}')
        n, d = arrays[0].shape
        ctx.k, ctx.n, ctx.d = len(arrays), n, d
        return np.stack(arrays, axis=1).reshape(n * len(arrays), d)

    @staticmethod
    def backward(ctx, grad):
        blocks = grad.reshape(ctx.n, ctx.k, ctx.d)
        return tuple(blocks[:, j, :] for j in range(ctx.k))


class FuseStack(Function):
    """Suma ponderada de una pila: out[t] = Σ_j W[j, t] · M_j[t].

    `weights` es k×1 (compartido en el tiempo) o k×n (uno por instante).
    """
    name = 'fuse_stack'

    @staticmethod
    def forward(ctx, weights, *arrays):
        shapes = {a.shape for a in arrays}
        if len(shapes) != 1:
            raise DimensionError(f'fuse_stack: formas heterogéneas {sorted(shapes)}')
        n = arrays[0].shape[0]
        k = len(arrays)
        if weights.shape[0] != k or weights.shape[1] not in (1, n):
            raise DimensionError(f'fuse_stack: pesos {weights.shape} incompatibles con una pila de {k} matrices de {n} filas')
        stack = np.stack(arrays, axis=0)
        w = weights[:, :, None]
        ctx.stack, ctx.w, ctx.shared = stack, w, weights.shape[1] == 1
        return (w * stack).sum(axis=0)

    @staticmethod
    def backward(ctx, grad):
        d_weights = (ctx.stack * grad[None]).sum(axis=2)
        if ctx.shared:
            d_weights = d_weights.sum(axis=1, keepdims=True)
        return (d_weights,) + tuple(ctx.w[j] * grad for j in range(ctx.stack.shape[0]))


class Conv1dTime(Function):
    """Convolución por bloques no solapados de `stride` filas (núcleo = paso)."""
    name = 'conv1d_time'

    @staticmethod
    def forward(ctx, x, bias, *kernels, stride):
        rows, d = x.shape
        if rows % stride:
            raise ShapeError(f'conv1d_time: {rows} filas no es múltiplo del paso {stride}')
        for j, kernel in enumerate(kernels):
            if kernel.shape != (stride, d):
                raise DimensionError(f'conv1d_time: núcleo {j} es {kernel.shape}, se esperaba ({stride}, {d})')
        if bias.shape != (1, len(kernels)):
            raise DimensionError(f'conv1d_time: sesgo {bias.shape}, se esperaba (1, {len(kernels)})')
        n = rows // stride
        blocks = x.reshape(n, stride * d)
        weight = np.stack([k.reshape(-1) for k in kernels], axis=1)
        ctx.blocks, ctx.weight, ctx.kshape, ctx.xshape = blocks, weight, (stride, d), x.shape
        return blocks @ weight + bias

    @staticmethod
    def backward(ctx, grad):
        d_x = (grad @ ctx.weight.T).reshape(ctx.xshape)
        d_weight = ctx.blocks.T @ grad
        d_bias = grad.sum(axis=0, keepdims=True)
        d_kernels = tuple(d_weight[:, j].reshape(ctx.kshape) for j in range(d_weight.shape[1]))
        return (d_x, d_bias) + d_kernels


class Dropout(Function):
    name = 'dropout'

    @staticmethod
    def forward(ctx, a, mask):
        ctx.mask = mask
        return a * mask

    @staticmethod
    def backward(ctx, grad):
        return (grad * ctx.mask,)


class Scale(Function):
    name = 'scale'

    @staticmethod
    def forward(ctx, a, factor):
        ctx.factor = factor
        return a * factor

    @staticmethod
    def backward(ctx, grad):
        return (grad * ctx.factor,)


class AddBias(Function):
    name = 'add_bias'

    @staticmethod
    def forward(ctx, a, bias):
        if bias.shape != (1, a.shape[1]):
            raise DimensionError(f'add_bias: sesgo {bias.shape} para una matriz de {a.shape[1]} columnas')
        return a + bias

    @staticmethod
    def backward(ctx, grad):
        return grad, grad.sum(axis=0, keepdims=True)


class SumAll(Function):
    name = 'sum_all'

    @staticmethod
    def forward(ctx, a):
        ctx.shape = a.shape
        return np.array([[a.sum()]])

    @staticmethod
    def backward(ctx, grad):
        return (np.full(ctx.shape, grad[0, 0]),)


class LayerNorm(Function):
    name = 'layer_norm'

    @staticmethod
    def forward(ctx, x, gain, bias, eps):
        mean = x.mean(axis=1, keepdims=True)
        centered = x - mean
        inv_std = 1.0 / np.sqrt((centered * centered).mean(axis=1, keepdims=True) + eps)
        xhat = centered * inv_std
        ctx.xhat, ctx.inv_std, ctx.gain = xhat, inv_std, gain
        return xhat * gain + bias

    @staticmethod
    def backward(ctx, grad):
        xhat = ctx.xhat
        d_xhat = grad * ctx.gain
        d_x = ctx.inv_std * (
            d_xhat
            - d_xhat.mean(axis=1, keepdims=True)
            - xhat * (d_xhat * xhat).mean(axis=1, keepdims=True)
        )
        return d_x, (grad * xhat).sum(axis=0, keepdims=True), grad.sum(axis=0, keepdims=True)


class LSTMSequence(Function):
    """Recurrencia LSTM completa con retropropagación en el tiempo.

    Orden de las compuertas en las columnas: entrada, olvido, salida, candidata.
    """
    name = 'lstm_sequence'

    @staticmethod
    def forward(ctx, x, w_x, w_h, bias, h0, c0):
        hidden = w_h.shape[0]
        if w_x.shape != (x.shape[1], 4 * hidden) or w_h.shape != (hidden, 4 * hidden) or bias.shape != (1, 4 * hidden):
            raise DimensionError(
                f'lstm: pesos {w_x.shape}, {w_h.shape}, {bias.shape} incompatibles con entrada de ancho {x.shape[1]}'
            )
        if h0.shape != (1, hidden) or c0.shape != (1, hidden):
            raise DimensionError(f'lstm: estado inicial {h0.shape}/{c0.shape}, se esperaba (1, {hidden})')
        n = x.shape[0]
        projected = x @ w_x + bias
        hs = np.empty((n + 1, hidden))
        cs = np.empty((n + 1, hidden))
        gates = np.empty((n, 4 * hidden))
        hs[0], cs[0] = h0[0], c0[0]
        for t in range(n):
            z = projected[t] + hs[t] @ w_h
            i = _sigmoid(z[:hidden])
            f = _sigmoid(z[hidden:2 * hidden])
            o = _sigmoid(z[2 * hidden:3 * hidden])
            g = np.tanh(z[3 * hidden:])
            cs[t + 1] = f * cs[t] + i * g
            hs[t + 1] = o * np.tanh(cs[t + 1])
            gates[t] = np.concatenate([i, f, o, g])
        ctx.x, ctx.w_x, ctx.w_h, ctx.hs, ctx.cs, ctx.gates, ctx.hidden = x, w_x, w_h, hs, cs, gates, hidden
        return hs[1:].copy()

    @staticmethod
    def backward(ctx, grad):
        x, w_x, w_h, hs, cs, gates, hidden = ctx.x, ctx.w_x, ctx.w_h, ctx.hs, ctx.cs, ctx.gates, ctx.hidden
        n = x.shape[0]
        d_z = np.empty((n, 4 * hidden))
        dh_next = np.zeros(hidden)
        dc_next = np.zeros(hidden)
        for t in reversed(range(n)):
            i, f, o, g = np.split(gates[t], 4)
            tanh_c = np.tanh(cs[t + 1])
            dh = grad[t] + dh_next
            dc = dh * o * (1.0 - tanh_c * tanh_c) + dc_next
            d_z[t] = np.concatenate([
                dc * g * i * (1.0 - i),
                dc * cs[t] * f * (1.0 - f),
                dh * tanh_c * o * (1.0 - o),
                dc * i * (1.0 - g * g),
            ])
            dh_next = d_z[t] @ w_h.T
            dc_next = dc * f
        d_x = d_z @ w_x.T
        d_w_x = x.T @ d_z
        d_w_h = hs[:-1].T @ d_z
        d_bias = d_z.sum(axis=0, keepdims=True)
        return d_x, d_w_x, d_w_h, d_bias, dh_next[None, :], dc_next[None, :]


# ──────────────────────── API funcional ────────────────────────

ElementwiseKind = Literal['add', 'sub', 'mul']
ActivationKind = Literal['sigmoid', 'tanh', 'relu']

_ELEMENTWISE = {'add': Add, 'sub': Sub, 'mul': Mul}
_ACTIVATIONS = {'sigmoid': Sigmoid, 'tanh': Tanh, 'relu': ReLU}


def matmul(a: Tensor, b: Tensor) -> Tensor:
    return MatMul.apply(a, b)


def elementwise(a: Tensor, b: Tensor, kind: ElementwiseKind) -> Tensor:
    try:
        return _ELEMENTWISE[kind].apply(a, b)
    except KeyError:
        raise ParameterError(f'Operación elemento a elemento desconocida: {kind}') from None


def add(a: Tensor, b: Tensor) -> Tensor:
    return Add.apply(a, b)


def sub(a: Tensor, b: Tensor) -> Tensor:
    return Sub.apply(a, b)


def mul(a: Tensor, b: Tensor) -> Tensor:
    return Mul.apply(a, b)


def activation(a: Tensor, kind: ActivationKind) -> Tensor:
    try:
        return _ACTIVATIONS[kind].apply(a)
    except KeyError:
        raise ParameterError(f'Activación desconocida: {kind}') from None


def sigmoid(a: Tensor) -> Tensor:
    return Sigmoid.apply(a)


def tanh(a: Tensor) -> Tensor:
    return Tanh.apply(a)


def relu(a: Tensor) -> Tensor:
    return ReLU.apply(a)


def softmax_rows(a: Tensor, mask: Optional[np.ndarray] = None) -> Tensor:
    """Softmax por filas; las entradas con `mask=True` reciben probabilidad 0."""
    if mask is not None and mask.shape != a.shape:
        raise DimensionError(f'softmax_rows: máscara {mask.shape} para una matriz {a.shape}')
    return SoftmaxRows.apply(a, mask=mask)


def causal_mask(n: int) -> np.ndarray:
    """Máscara que oculta los instantes posteriores a cada fila."""
    return np.triu(np.ones((n, n), dtype=bool), k=1)


def concat_rows(tensors: Sequence[Tensor]) -> Tensor:
    return ConcatRows.apply(*tensors)


def concat_cols(tensors: Sequence[Tensor]) -> Tensor:
    return ConcatCols.apply(*tensors)


def slice_rows(a: Tensor, start: int, stop: int) -> Tensor:
    return SliceRows.apply(a, start=start, stop=stop)


def transpose(a: Tensor) -> Tensor:
    return Transpose.apply(a)


def interleave_rows(tensors: Sequence[Tensor]) -> Tensor:
    return InterleaveRows.apply(*tensors)


def fuse_stack(stack: Sequence[Tensor], weights: Tensor) -> Tensor:
    return FuseStack.apply(weights, *stack)


def conv1d_time(x: Tensor, kernels: Sequence[Tensor], stride: int, bias: Optional[Tensor] = None) -> Tensor:
    if bias is None:
        bias = Tensor.zeros(1, len(kernels))
    return Conv1dTime.apply(x, bias, *kernels, stride=stride)


def dropout(a: Tensor, rate: float, training: bool, rng: Optional[np.random.Generator] = None) -> Tensor:
    """Dropout invertido: en entrenamiento escala los sobrevivientes por 1/(1−rate)."""
    if not 0.0 <= rate < 1.0:
        raise ParameterError(f'dropout: la tasa debe estar en [0, 1), recibido {rate}')
    if not training or rate == 0.0:
        return a
    if rng is None:
        raise ParameterError('dropout: el modo entrenamiento requiere un generador aleatorio')
    mask = (rng.random(a.shape) >= rate) / (1.0 - rate)
    return Dropout.apply(a, mask=mask)


def scale(a: Tensor, factor: float) -> Tensor:
    return Scale.apply(a, factor=float(factor))


def add_bias(a: Tensor, bias: Tensor) -> Tensor:
    return AddBias.apply(a, bias)


def sum_all(a: Tensor) -> Tensor:
    return SumAll.apply(a)


def mean_all(a: Tensor) -> Tensor:
    return scale(sum_all(a), 1.0 / (a.rows * a.cols))


def layer_norm(x: Tensor, gain: Tensor, bias: Tensor, eps: float = 1e-5) -> Tensor:
    if gain.shape != (1, x.cols) or bias.shape != (1, x.cols):
        raise DimensionError(f'layer_norm: ganancia {gain.shape} / sesgo {bias.shape} para ancho {x.cols}')
    return LayerNorm.apply(x, gain, bias, eps=eps)


def lstm_sequence(x: Tensor, w_x: Tensor, w_h: Tensor, bias: Tensor,
                  h0: Optional[Tensor] = None, c0: Optional[Tensor] = None) -> Tensor:
    hidden = w_h.rows
    h0 = h0 if h0 is not None else Tensor.zeros(1, hidden)
    c0 = c0 if c0 is not None else Tensor.zeros(1, hidden)
    return LSTMSequence.apply(x, w_x, w_h, bias, h0, c0)
