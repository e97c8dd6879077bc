# -*- coding: utf-8 -*-
"""Bucle de entrenamiento: MSE, Adam y decaimiento por época.

Toda la aleatoriedad (orden de las ventanas y máscaras de dropout) sale de un
único `np.random.Generator`, así que la misma semilla reproduce las mismas
pérdidas bit a bit en un solo hilo.
"""

from dataclasses import dataclass
from typing import Callable
from typing import List
from typing import Optional
import numpy as np
from loguru import logger
from apps.autodiff import functions as F
from apps.autodiff.tensor import Graph
from apps.autodiff.tensor import backward
from apps.data.windows import WindowedDataset
from apps.forecaster.model import Forecaster
from apps.training.loss import mse_loss
from apps.training.optimizer import Adam
from apps.training.optimizer import clip_grad_norm
from apps.training.schedule import lr_schedule
from config.exceptions import InputError
from config.exceptions import NumericError
from config.run_config import TrainConfig


@dataclass
class TrainResult:
    model: Forecaster
    loss_history: List[float]
    optimizer: Adam
    rng: np.random.Generator
    epochs_completed: int


# (época completada, resultado parcial) → None
EpochCallback = Callable[[int, TrainResult], None]


def _batch_loss(model: Forecaster, dataset: WindowedDataset, batch: np.ndarray, rng: np.random.Generator):
    losses = [
        mse_loss(model.forward(dataset[int(i)].values, training=True, rng=rng), dataset[int(i)].targets)
        for i in batch
    ]
    total = losses[0]
    for loss in losses[1:]:
        total = F.add(total, loss)
    return F.scale(total, 1.0 / len(losses))


def train(
    model: Forecaster,
    dataset: WindowedDataset,
    cfg: TrainConfig,
    optimizer: Optional[Adam] = None,
    rng: Optional[np.random.Generator] = None,
    start_epoch: int = 0,
    loss_history: Optional[List[float]] = None,
    on_epoch_end: Optional[EpochCallback] = None,
) -> TrainResult:
    """Entrena de `start_epoch` hasta `cfg.epochs` (índices de época desde 0).

    Por época: baraja las ventanas, las agrupa en lotes de `cfg.batch_size`
    (el lote final parcial también se entrena), promedia la MSE del lote,
    retropropaga y aplica Adam con `lr_schedule(época)`.

    Args:
        optimizer: estado previo al reanudar; por defecto uno nuevo.
        rng: generador previo al reanudar; por defecto `default_rng(cfg.seed)`.
        start_epoch: épocas ya completadas.
        loss_history: pérdidas de esas épocas.
        on_epoch_end: se llama al cerrar cada época (checkpoints periódicos).

    Raises:
        InputError: dataset vacío.
        NumericError: pérdida no finita; el mensaje nombra la primera operación no finita.
    """
    if not len(dataset):
        raise InputError('El conjunto de ventanas de entrenamiento está vacío')

    params = model.named_parameters()
    optimizer = optimizer if optimizer is not None else Adam(params, cfg.beta1, cfg.beta2, cfg.epsilon)
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    history = list(loss_history or [])
    result = TrainResult(model=model, loss_history=history, optimizer=optimizer, rng=rng,
                         epochs_completed=start_epoch)

    for epoch in range(start_epoch, cfg.epochs):
        lr = lr_schedule(epoch, cfg.initial_lr, cfg.lr_decay_base, cfg.lr_mode)
        weighted, seen = 0.0, 0
        for step, batch in enumerate(dataset.batches(cfg.batch_size, rng)):
            model.zero_grad()
            with Graph() as graph:
                loss = _batch_loss(model, dataset, batch, rng)
            value = loss.item()
            if not np.isfinite(value):
                node = graph.first_non_finite()
                where = f"'{node.op}' (operación #{node.index})" if node is not None else 'desconocida'
                raise NumericError(
                    f'Pérdida no finita en la época {epoch + 1}, lote {step + 1}; '
                    f'primera salida no finita: {where}',
                    epoch=epoch, batch=step,
                )
            backward(loss)
            if cfg.max_grad_norm is not None:
                clip_grad_norm(params, cfg.max_grad_norm)
            optimizer.step(lr)
            weighted += value * len(batch)
            seen += len(batch)
            logger.debug(f'época {epoch + 1} lote {step + 1}: pérdida {value:.6e}')

        history.append(weighted / seen)
        result.epochs_completed = epoch + 1
        logger.info(f'📉 Época {epoch + 1}/{cfg.epochs}: pérdida media {history[-1]:.6e} (lr={lr:.3e})')
        if on_epoch_end is not None:
            on_epoch_end(epoch + 1, result)

    model.zero_grad()
    return result
