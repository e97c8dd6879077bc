from apps.layers.attention import MultiHeadAttention
from apps.layers.attention import NeighborAttention
from apps.layers.attention import neighbor_attention
from apps.layers.base import Layer
from apps.layers.encoding import PositionalEncoding
from apps.layers.encoding import WindowTriple
from apps.layers.encoding import differential_split
from apps.layers.encoding import embed_with_pe
from apps.layers.encoding import positional_encode
from apps.layers.fusion import SlidingFusion
from apps.layers.fusion import sliding_fusion
from apps.layers.residual import LSTM
from apps.layers.residual import ResidualBlock
from apps.layers.residual import lstm_forward
from apps.layers.residual import residual_block
from apps.layers.transformer import DecoderBlock
from apps.layers.transformer import EncoderBlock
from apps.layers.transformer import decoder_block
from apps.layers.transformer import encoder_block
