# -*- coding: utf-8 -*-
"""Modelo completo de fusión de atención diferencial.

Flujo por ventana X (N×d_input), con n = N−2:

1. capa diferencial → x1, x2, x3 y las diferencias x2−x1, x2−x3;
2. embedding + codificación posicional → h_F, h_C, h_B, D_F, D_B;
3. rama hacia adelante: A_F = atención vecina(h_C, h_F), fusión de
   [D_F, h_C, A_F], capa residual de paso 3; la rama hacia atrás es simétrica;
4. un único codificador (pesos compartidos) aplicado a cada rama → o_F, o_B;
5. unión: fusión de [o_F, o_B] y capa residual de paso 2 → memoria;
6. decodificador sobre el centro x2 con su propio embedding, auto-atención
   causal y atención cruzada a la memoria;
7. cabeza afín d_model → |objetivos|: el valor un paso adelante de cada
   objetivo en cada posición del centro.
"""

from typing import Dict
from typing import List
from typing import Optional
import numpy as np
from apps.autodiff import functions as F
from apps.autodiff.tensor import Tensor
from apps.layers.attention import NeighborAttention
from apps.layers.base import Layer
from apps.layers.base import glorot
from apps.layers.base import parameter
from apps.layers.encoding import PositionalEncoding
from apps.layers.encoding import differential_split
from apps.layers.encoding import embed_with_pe
from apps.layers.fusion import SlidingFusion
from apps.layers.residual import ResidualBlock
from apps.layers.transformer import DecoderBlock
from apps.layers.transformer import EncoderBlock
from config.exceptions import DimensionError
from config.exceptions import UsageError
from config.run_config import ModelConfig

# prefijo del nombre de parámetro → grupo del reporte
PARAMETER_GROUPS = {
    'embed_forward': 'embedding',
    'embed_center': 'embedding',
    'embed_backward': 'embedding',
    'embed_diff_forward': 'embedding',
    'embed_diff_backward': 'embedding',
    'embed_decoder': 'embedding',
    'attention_forward': 'attention_forward',
    'attention_backward': 'attention_backward',
    'fusion_forward': 'fusion_forward',
    'fusion_backward': 'fusion_backward',
    'residual_forward': 'residual_forward',
    'residual_backward': 'residual_backward',
    'encoder': 'encoder',
    'fusion_junction': 'fusion_junction',
    'residual_junction': 'residual_junction',
    'decoder': 'decoder',
    'head_weight': 'head',
    'head_bias': 'head',
}


class Forecaster(Layer):
    """Estado del modelo (ModelState): todos los tensores de parámetros agrupados.

    Args:
        config: hiperparámetros de arquitectura.
        seed: semilla de la inicialización; la cantidad de parámetros sólo depende de `config`.
    """

    def __init__(self, config: ModelConfig, seed: int = 0):
        rng = np.random.default_rng(seed)
        c = config
        d = c.d_model
        steps = c.n if c.per_timestep_fusion_weights else None
        self.config = config
        self.pe = PositionalEncoding.build(c.n, d)

        diff_attention = not c.ablate_diff_attention
        residual = not c.ablate_residual_layer

        self.embed_center = glorot(rng, (c.d_input, d))
        if diff_attention:
            self.embed_forward = glorot(rng, (c.d_input, d))
            self.embed_backward = glorot(rng, (c.d_input, d))
            self.embed_diff_forward = glorot(rng, (c.d_input, d))
            self.embed_diff_backward = glorot(rng, (c.d_input, d))
            self.attention_forward = NeighborAttention(d, c.heads, c.attn_width, rng)
            self.attention_backward = NeighborAttention(d, c.heads, c.attn_width, rng)
            self.fusion_forward = SlidingFusion(3, d, steps)
            self.fusion_backward = SlidingFusion(3, d, steps)
        if residual:
            self.residual_forward = ResidualBlock(3, d, rng, c.conv_kernels, c.lstm_hidden, c.dropout)
            self.residual_backward = ResidualBlock(3, d, rng, c.conv_kernels, c.lstm_hidden, c.dropout)

        self.encoder: List[EncoderBlock] = [
            EncoderBlock(d, c.heads, c.ffn, c.transformer_dropout, rng) for _ in range(c.encoder_layers)
        ]

        if diff_attention:
            self.fusion_junction = SlidingFusion(2, d, steps)
        if residual:
            self.residual_junction = ResidualBlock(2, d, rng, c.conv_kernels, c.lstm_hidden, c.dropout)

        self.embed_decoder = glorot(rng, (c.d_input, d))
        self.decoder: List[DecoderBlock] = [
            DecoderBlock(d, c.heads, c.ffn, c.transformer_dropout, rng) for _ in range(c.decoder_layers)
        ]
        self.head_weight = glorot(rng, (d, len(c.target_columns)))
        self.head_bias = parameter(np.zeros((1, len(c.target_columns))))

    @property
    def has_diff_attention(self) -> bool:
        return not self.config.ablate_diff_attention

    @property
    def has_residual_layer(self) -> bool:
        return not self.config.ablate_residual_layer

    def parameter_groups(self) -> Dict[str, List[str]]:
        groups: Dict[str, List[str]] = {}
        for name in self.named_parameters():
            groups.setdefault(PARAMETER_GROUPS[name.split('.')[0]], []).append(name)
        return groups

    def encode(self, x: Tensor, training: bool = False, rng: Optional[np.random.Generator] = None) -> Tensor:
        for block in self.encoder:
            x = block.forward(x, training, rng)
        return x

    def decode(self, center: Tensor, memory: Tensor, training: bool = False,
               rng: Optional[np.random.Generator] = None) -> Tensor:
        """Decodificador + cabeza: la fila t sólo ve las filas ≤ t del centro."""
        x = embed_with_pe(center, self.embed_decoder, self.pe)
        for block in self.decoder:
            x = block.forward(x, memory, training, rng)
        return F.add_bias(F.matmul(x, self.head_weight), self.head_bias)

    def _residual(self, block: Optional[ResidualBlock], e: Tensor, c_blocks: Tensor, training: bool,
                  rng: Optional[np.random.Generator]) -> Tensor:
        if not self.has_residual_layer:
            return e
        return block.forward(e, c_blocks, training, rng)

    def forward(self, window: Tensor, training: bool = False, rng: Optional[np.random.Generator] = None) -> Tensor:
        c = self.config
        if window.shape != (c.window, c.d_input):
            raise DimensionError(f'Ventana {window.rows}×{window.cols}, se esperaba {c.window}×{c.d_input}')

        triple = differential_split(window)
        h_center = embed_with_pe(triple.center, self.embed_center, self.pe)

        if self.has_diff_attention:
            h_forward = embed_with_pe(triple.forward, self.embed_forward, self.pe)
            h_backward = embed_with_pe(triple.backward, self.embed_backward, self.pe)
            d_forward = embed_with_pe(triple.diff_forward, self.embed_diff_forward, self.pe)
            d_backward = embed_with_pe(triple.diff_backward, self.embed_diff_backward, self.pe)

            a_forward = self.attention_forward.forward(h_center, h_forward)
            a_backward = self.attention_backward.forward(h_center, h_backward)
            e_forward, c_forward = self.fusion_forward.forward([d_forward, h_center, a_forward])
            e_backward, c_backward = self.fusion_backward.forward([d_backward, h_center, a_backward])
        else:
            # sin capa diferencial: el centro replicado mantiene la forma de la convolución de paso 3
            e_forward = e_backward = h_center
            c_forward = c_backward = F.interleave_rows([h_center, h_center, h_center])

        enc_forward = self._residual(getattr(self, 'residual_forward', None), e_forward, c_forward, training, rng)
        enc_backward = self._residual(getattr(self, 'residual_backward', None), e_backward, c_backward, training, rng)

        o_forward = self.encode(enc_forward, training, rng)
        o_backward = self.encode(enc_backward, training, rng)

        if self.has_diff_attention:
            e_junction, c_junction = self.fusion_junction.forward([o_forward, o_backward])
        else:
            e_junction = F.scale(F.add(o_forward, o_backward), 0.5)
            c_junction = F.interleave_rows([o_forward, o_backward])
        memory = self._residual(getattr(self, 'residual_junction', None), e_junction, c_junction, training, rng)

        return self.decode(triple.center, memory, training, rng)

    def forward_ablated_attention(self, window: Tensor, training: bool = False,
                                  rng: Optional[np.random.Generator] = None) -> Tensor:
        """Variante sin capa diferencial, atención vecina ni fusión deslizante."""
        if self.has_diff_attention:
            raise UsageError('forward_ablated_attention requiere ablate_diff_attention activado')
        return self.forward(window, training, rng)

    def predict(self, window: np.ndarray) -> np.ndarray:
        """Pasada en modo evaluación, sin grafo."""
        return self.forward(Tensor(window), training=False).data.copy()
