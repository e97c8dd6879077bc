# -*- coding: utf-8 -*-
"""Bloques clásicos de codificador y decodificador (post-norma)."""

from typing import Optional
import numpy as np
from apps.autodiff import functions as F
from apps.autodiff.tensor import Tensor
from apps.layers.attention import MultiHeadAttention
from apps.layers.base import Layer
from apps.layers.base import glorot
from apps.layers.base import parameter


class Norm(Layer):
    def __init__(self, d_model: int, eps: float = 1e-5):
        self.eps = eps
        self.gain: Tensor = parameter(np.ones((1, d_model)))
        self.bias: Tensor = parameter(np.zeros((1, d_model)))

    def forward(self, x: Tensor) -> Tensor:
        return F.layer_norm(x, self.gain, self.bias, self.eps)


class FeedForward(Layer):
    def __init__(self, d_model: int, width: int, rng: np.random.Generator):
        self.w1: Tensor = glorot(rng, (d_model, width))
        self.b1: Tensor = parameter(np.zeros((1, width)))
        self.w2: Tensor = glorot(rng, (width, d_model))
        self.b2: Tensor = parameter(np.zeros((1, d_model)))

    def forward(self, x: Tensor) -> Tensor:
        hidden = F.relu(F.add_bias(F.matmul(x, self.w1), self.b1))
        return F.add_bias(F.matmul(hidden, self.w2), self.b2)


def _sublayer(norm: Norm, x: Tensor, update: Tensor, rate: float, training: bool,
              rng: Optional[np.random.Generator]) -> Tensor:
    return norm.forward(F.add(x, F.dropout(update, rate, training, rng)))


class EncoderBlock(Layer):
    def __init__(self, d_model: int, heads: int, ffn_width: int, dropout: float, rng: np.random.Generator):
        head_width = d_model // heads
        self.dropout = dropout
        self.self_attention = MultiHeadAttention(d_model, heads, head_width, head_width, rng)
        self.norm1 = Norm(d_model)
        self.ffn = FeedForward(d_model, ffn_width, rng)
        self.norm2 = Norm(d_model)

    def forward(self, x: Tensor, training: bool = False, rng: Optional[np.random.Generator] = None) -> Tensor:
        x = _sublayer(self.norm1, x, self.self_attention.attend(x, x, x), self.dropout, training, rng)
        return _sublayer(self.norm2, x, self.ffn.forward(x), self.dropout, training, rng)


class DecoderBlock(Layer):
    def __init__(self, d_model: int, heads: int, ffn_width: int, dropout: float, rng: np.random.Generator):
        head_width = d_model // heads
        self.dropout = dropout
        self.self_attention = MultiHeadAttention(d_model, heads, head_width, head_width, rng)
        self.norm1 = Norm(d_model)
        self.cross_attention = MultiHeadAttention(d_model, heads, head_width, head_width, rng)
        self.norm2 = Norm(d_model)
        self.ffn = FeedForward(d_model, ffn_width, rng)
        self.norm3 = Norm(d_model)

    def forward(self, x: Tensor, memory: Tensor, training: bool = False,
                rng: Optional[np.random.Generator] = None) -> Tensor:
        mask = F.causal_mask(x.rows)
        x = _sublayer(self.norm1, x, self.self_attention.attend(x, x, x, mask=mask), self.dropout, training, rng)
        x = _sublayer(self.norm2, x, self.cross_attention.attend(x, memory, memory), self.dropout, training, rng)
        return _sublayer(self.norm3, x, self.ffn.forward(x), self.dropout, training, rng)


def encoder_block(x: Tensor, params: EncoderBlock, training: bool = False,
                  rng: Optional[np.random.Generator] = None) -> Tensor:
    return params.forward(x, training, rng)


def decoder_block(x: Tensor, memory: Tensor, params: DecoderBlock, training: bool = False,
                  rng: Optional[np.random.Generator] = None) -> Tensor:
    return params.forward(x, memory, training, rng)
