# -*- coding: utf-8 -*-
"""Verificación de gradientes por capa y de extremo a extremo sobre un micro-modelo.

Cada capa se prueba aislada con entradas aleatorias y una pérdida
sum(salida ⊙ R), con R fija, para que ningún gradiente se anule por simetría.
Las entradas también se verifican, así que un error en el gradiente hacia
atrás de una capa no puede esconderse detrás de sus parámetros. El
dropout queda apagado en todo el micro-modelo.
"""

from dataclasses import dataclass
from typing import Callable
from typing import Dict
from typing import List
from typing import Mapping
from typing import Optional
import numpy as np
from loguru import logger
from apps.autodiff import functions as F
from apps.autodiff.gradcheck import GradCheckReport
from apps.autodiff.gradcheck import grad_check
from apps.autodiff.tensor import Tensor
from apps.forecaster.model import Forecaster
from apps.layers.attention import NeighborAttention
from apps.layers.encoding import PositionalEncoding
from apps.layers.encoding import embed_with_pe
from apps.layers.fusion import SlidingFusion
from apps.layers.residual import LSTM
from apps.layers.residual import ResidualBlock
from apps.layers.transformer import DecoderBlock
from apps.layers.transformer import EncoderBlock
from apps.training.loss import mse_loss
from config.exceptions import ParameterError
from config.run_config import GradCheckConfig
from config.run_config import ModelConfig


@dataclass
class GradCheckSuite:
    layers: Dict[str, GradCheckReport]
    end_to_end: GradCheckReport
    groups: Dict[str, List[str]]

    @property
    def passed(self) -> bool:
        return self.end_to_end.passed and all(r.passed for r in self.layers.values())

    @property
    def failing(self) -> List[str]:
        failing = [f'{layer}:{name}' for layer, r in self.layers.items() for name in r.failing]
        return failing + [f'model:{name}' for name in self.end_to_end.failing]

    @property
    def max_relative_error(self) -> float:
        return max([self.end_to_end.max_relative_error] + [r.max_relative_error for r in self.layers.values()])

    def coverage(self) -> Dict[str, object]:
        """Entradas verificadas frente al total; con muestreo un pase no es exhaustivo."""
        reports = list(self.layers.values()) + [self.end_to_end]
        checked = sum(r.checked for r in reports)
        total = sum(r.size for r in reports)
        return {
            'entries_per_parameter': self.end_to_end.max_entries,
            'entries_checked': checked,
            'entries_total': total,
            'exhaustive': checked == total,
        }

    def group_summary(self) -> Dict[str, Dict[str, object]]:
        entries = {e.name: e for e in self.end_to_end.entries}
        summary = {}
        for group, names in self.groups.items():
            checked = [entries[name] for name in names if name in entries]
            summary[group] = {
                'parameters': len(names),
                'max_relative_error': max((e.max_relative_error for e in checked), default=0.0),
                'passed': all(e.passed for e in checked),
            }
        return summary

    def as_dict(self) -> Dict[str, object]:
        return {
            'passed': self.passed,
            'max_relative_error': self.max_relative_error,
            'failing': self.failing,
            'coverage': self.coverage(),
            'groups': self.group_summary(),
            'layers': {layer: r.as_dict() for layer, r in self.layers.items()},
            'end_to_end': self.end_to_end.as_dict(),
        }


def micro_config(cfg: GradCheckConfig, base: Optional[ModelConfig] = None) -> ModelConfig:
    """Micro-modelo sin dropout; las banderas de ablación se heredan de `base`."""
    base = base or ModelConfig()
    return ModelConfig(
        d_input=cfg.d_input,
        d_model=cfg.d_model,
        heads=cfg.heads,
        window=cfg.window,
        encoder_layers=1,
        decoder_layers=1,
        target_columns=[0],
        dropout=0.0,
        transformer_dropout=0.0,
        conv_kernels=base.conv_kernels,
        lstm_hidden=base.lstm_hidden,
        ablate_diff_attention=base.ablate_diff_attention,
        ablate_residual_layer=base.ablate_residual_layer,
        per_timestep_fusion_weights=base.per_timestep_fusion_weights,
    )


def _input(rng: np.random.Generator, rows: int, cols: int, name: str) -> Tensor:
    return Tensor(rng.normal(size=(rows, cols)), requires_grad=True, name=name)


def _projected(out: Tensor, projection: np.ndarray) -> Tensor:
    return F.sum_all(F.mul(out, Tensor(projection)))


def _check_layer(params: Mapping[str, Tensor], inputs: List[Tensor], run: Callable[[], Tensor],
                 rng: np.random.Generator, cfg: GradCheckConfig) -> GradCheckReport:
    projection = rng.normal(size=run().shape)
    clash = {t.name for t in inputs} & set(params)
    if clash:
        raise ParameterError(f'Entradas y parámetros comparten nombre: {sorted(clash)}')
    params = {**{t.name: t for t in inputs}, **params}
    return grad_check(lambda: _projected(run(), projection), params, cfg.step, cfg.tolerance,
                      cfg.entries_per_parameter, rng)


def layer_checks(model_cfg: ModelConfig, cfg: GradCheckConfig, seed: int = 0) -> Dict[str, GradCheckReport]:
    rng = np.random.default_rng(seed)
    d, n = model_cfg.d_model, model_cfg.n
    reports: Dict[str, GradCheckReport] = {}

    weight = Tensor(rng.normal(size=(model_cfg.d_input, d)), requires_grad=True)
    x = _input(rng, n, model_cfg.d_input, 'x')
    pe = PositionalEncoding.build(n, d)
    reports['embedding'] = _check_layer({'weight': weight}, [x], lambda: embed_with_pe(x, weight, pe), rng, cfg)

    attention = NeighborAttention(d, model_cfg.heads, model_cfg.attn_width, rng)
    h_c, h_f = _input(rng, n, d, 'h_center'), _input(rng, n, d, 'h_side')
    reports['neighbor_attention'] = _check_layer(
        attention.named_parameters(), [h_c, h_f], lambda: attention.forward(h_c, h_f), rng, cfg
    )

    steps = n if model_cfg.per_timestep_fusion_weights else None
    fusion = SlidingFusion(3, d, steps)
    # pesos lejos del promedio inicial para que el acarreo no sea trivial
    fusion.weight.data = rng.normal(size=fusion.weight.shape)
    stack = [_input(rng, n, d, f'stack_{i}') for i in range(3)]
    reports['sliding_fusion'] = _check_layer(
        fusion.named_parameters(), stack, lambda: fusion.forward(stack)[0], rng, cfg
    )

    lstm = LSTM(model_cfg.conv_kernels, model_cfg.lstm_hidden, rng)
    seq = _input(rng, n, model_cfg.conv_kernels, 'sequence')
    reports['lstm'] = _check_layer(lstm.named_parameters(), [seq], lambda: lstm.forward(seq), rng, cfg)

    for stride in (3, 2):
        block = ResidualBlock(stride, d, rng, model_cfg.conv_kernels, model_cfg.lstm_hidden, 0.0)
        e, c = _input(rng, n, d, 'e'), _input(rng, stride * n, d, 'c_blocks')
        reports[f'residual_stride_{stride}'] = _check_layer(
            block.named_parameters(), [e, c], lambda block=block, e=e, c=c: block.forward(e, c), rng, cfg
        )

    encoder = EncoderBlock(d, model_cfg.heads, model_cfg.ffn, 0.0, rng)
    src = _input(rng, n, d, 'source')
    reports['encoder'] = _check_layer(encoder.named_parameters(), [src], lambda: encoder.forward(src), rng, cfg)

    decoder = DecoderBlock(d, model_cfg.heads, model_cfg.ffn, 0.0, rng)
    tgt, memory = _input(rng, n, d, 'target'), _input(rng, n, d, 'memory')
    reports['decoder'] = _check_layer(
        decoder.named_parameters(), [tgt, memory], lambda: decoder.forward(tgt, memory), rng, cfg
    )
    return reports


def end_to_end_check(model_cfg: ModelConfig, cfg: GradCheckConfig, seed: int = 0):
    """MSE del micro-modelo completo contra un objetivo aleatorio; cubre todos los parámetros."""
    rng = np.random.default_rng(seed)
    model = Forecaster(model_cfg, seed=seed)
    window = Tensor(rng.normal(size=(model_cfg.window, model_cfg.d_input)))
    target = Tensor(rng.normal(size=(model_cfg.n, len(model_cfg.target_columns))))
    report = grad_check(lambda: mse_loss(model.forward(window), target), model.named_parameters(),
                        cfg.step, cfg.tolerance, cfg.entries_per_parameter, rng)
    return model, report


def run_gradcheck(cfg: GradCheckConfig, base: Optional[ModelConfig] = None, seed: int = 0) -> GradCheckSuite:
    model_cfg = micro_config(cfg, base)
    layers = layer_checks(model_cfg, cfg, seed)
    for layer, report in layers.items():
        logger.info(f'🔬 {layer}: error relativo máximo {report.max_relative_error:.3e}')
    model, end_to_end = end_to_end_check(model_cfg, cfg, seed)
    logger.info(f'🔬 modelo completo: error relativo máximo {end_to_end.max_relative_error:.3e}')
    return GradCheckSuite(layers=layers, end_to_end=end_to_end, groups=model.parameter_groups())
