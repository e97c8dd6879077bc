# -*- coding: utf-8 -*-
"""Persistencia de checkpoints en un único documento JSON.

Cada arreglo se guarda como forma + lista plana de dobles; orjson escribe la
representación decimal más corta que vuelve al mismo doble, así que la ida y
vuelta es exacta bit a bit. El estado del generador PCG64 usa enteros de
128 bits que JSON no representa: se guardan como texto.
"""

from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple
import numpy as np
import orjson
from loguru import logger
from apps.data.normalization import NormalizationState
from apps.forecaster.model import Forecaster
from config.exceptions import InputError
from config.run_config import RunConfig

CHECKPOINT_FORMAT = 'diff-attention-forecaster/1'


@dataclass
class Checkpoint:
    config: RunConfig
    epoch: int
    parameters: Dict[str, np.ndarray]
    optimizer: Optional[Dict[str, Any]] = None
    normalization: Optional[NormalizationState] = None
    rng_state: Optional[Dict[str, Any]] = None
    loss_history: List[float] = field(default_factory=list)
    groups: Dict[str, List[str]] = field(default_factory=dict)

    @property
    def seed(self) -> int:
        return self.config.seed


def _pack(array: np.ndarray) -> Dict[str, Any]:
    array = np.asarray(array, dtype=np.float64)
    return {'shape': list(array.shape), 'values': array.ravel().tolist()}


def _unpack(payload: Dict[str, Any]) -> np.ndarray:
    return np.asarray(payload['values'], dtype=np.float64).reshape(payload['shape'])


def _ints_to_text(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _ints_to_text(v) for k, v in value.items()}
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    return value


def _text_to_ints(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _text_to_ints(v) for k, v in value.items()}
    if isinstance(value, str) and value.lstrip('-').isdigit():
        return int(value)
    return value


def save_checkpoint(path: Path, checkpoint: Checkpoint) -> Path:
    path = Path(path)
    model_cfg = checkpoint.config.model
    document = {
        'format': CHECKPOINT_FORMAT,
        'epoch': checkpoint.epoch,
        'seed': checkpoint.seed,
        'ablations': {
            'ablate_diff_attention': model_cfg.ablate_diff_attention,
            'ablate_residual_layer': model_cfg.ablate_residual_layer,
            'per_timestep_fusion_weights': model_cfg.per_timestep_fusion_weights,
        },
        'config': checkpoint.config.model_dump(mode='json'),
        'loss_history': list(checkpoint.loss_history),
        'groups': checkpoint.groups,
        'parameters': {name: _pack(value) for name, value in checkpoint.parameters.items()},
        'optimizer': None,
        'normalization': checkpoint.normalization.as_dict() if checkpoint.normalization else None,
        'rng_state': _ints_to_text(checkpoint.rng_state) if checkpoint.rng_state else None,
    }
    if checkpoint.optimizer is not None:
        state = checkpoint.optimizer
        document['optimizer'] = {
            't': state['t'],
            'beta1': state['beta1'],
            'beta2': state['beta2'],
            'epsilon': state['epsilon'],
            'm': {name: _pack(value) for name, value in state['m'].items()},
            'v': {name: _pack(value) for name, value in state['v'].items()},
        }
    path.write_bytes(orjson.dumps(document))
    logger.info(f'💾 Checkpoint guardado: {path.name} (época {checkpoint.epoch})')
    return path


def load_checkpoint(path: Path) -> Checkpoint:
    """Lee un checkpoint; la configuración se valida de nuevo al cargar.

    Raises:
        InputError: archivo inexistente, JSON inválido o formato desconocido.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f'No existe el checkpoint: {path}', path=str(path))
    try:
        document = orjson.loads(path.read_bytes())
    except orjson.JSONDecodeError as e:
        raise InputError(f'Checkpoint ilegible {path}: {e}') from e
    if not isinstance(document, dict) or document.get('format') != CHECKPOINT_FORMAT:
        raise InputError(f'{path} no es un checkpoint de este modelo')

    optimizer = document.get('optimizer')
    if optimizer is not None:
        optimizer = {
            **optimizer,
            'm': {name: _unpack(value) for name, value in optimizer['m'].items()},
            'v': {name: _unpack(value) for name, value in optimizer['v'].items()},
        }
    normalization = document.get('normalization')
    rng_state = document.get('rng_state')
    return Checkpoint(
        config=RunConfig.model_validate(document['config']),
        epoch=int(document['epoch']),
        parameters={name: _unpack(value) for name, value in document['parameters'].items()},
        optimizer=optimizer,
        normalization=NormalizationState.from_dict(normalization) if normalization else None,
        rng_state=_text_to_ints(rng_state) if rng_state else None,
        loss_history=[float(x) for x in document.get('loss_history', [])],
        groups=document.get('groups', {}),
    )


def restore_model(checkpoint: Checkpoint) -> Tuple[RunConfig, Forecaster]:
    """Reconstruye el modelo con la configuración guardada y copia los parámetros."""
    config = checkpoint.config
    model = Forecaster(config.model, seed=config.seed)
    model.load_arrays(checkpoint.parameters)
    return config, model
