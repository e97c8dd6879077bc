# -*- coding: utf-8 -*-
"""Configuración de una corrida.

Los valores por defecto son las constantes del protocolo de entrenamiento
(tasa inicial 0.0005, lote de 20, convolución de 16 núcleos, LSTM 16→32→d_model,
dropout 0.5) y las decisiones registradas en DESIGN.md para lo que el modelo
no fija. La precedencia al resolver es: bandera > archivo > valor por defecto.
"""

from pathlib import Path
from typing import Any
from typing import Dict
from typing import List
from typing import Literal
from typing import Optional
import yaml
from loguru import logger
from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from pydantic import field_validator
from pydantic import model_validator
from config.exceptions import ConfigError
from config.settings import DEFAULT_OUTPUT_DIR
from config.settings import GRADCHECK_STEP
from config.settings import GRADCHECK_TOLERANCE


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid', validate_assignment=True)


class ModelConfig(_Section):
    d_input: int = Field(default=1, ge=1, description='Columnas de entrada por instante')
    d_model: int = Field(default=64, ge=2, description='Ancho de los embeddings')
    d_attn: Optional[int] = Field(default=None, ge=1, description='Ancho de Q/K en la atención vecina (None = d_model)')
    heads: int = Field(default=4, ge=1, description='Número de cabezas')
    encoder_layers: int = Field(default=2, ge=1)
    decoder_layers: int = Field(default=2, ge=1)
    ffn_width: Optional[int] = Field(default=None, ge=1, description='Ancho de la FFN (None = 4·d_model)')
    window: int = Field(default=12, ge=4, description='Longitud N de cada ventana')
    target_columns: List[int] = Field(default_factory=lambda: [0])
    dropout: float = Field(default=0.5, ge=0.0, lt=1.0, description='Dropout tras cada LSTM de la capa residual')
    transformer_dropout: float = Field(default=0.1, ge=0.0, lt=1.0, description='Dropout de las sub-capas del codificador/decodificador')
    conv_kernels: int = Field(default=16, ge=1, description='Núcleos de la convolución de la capa residual')
    lstm_hidden: int = Field(default=32, ge=1, description='Salida de la primera LSTM')
    ablate_diff_attention: bool = False
    ablate_residual_layer: bool = False
    per_timestep_fusion_weights: bool = False

    @field_validator('d_model')
    @classmethod
    def _even_width(cls, value: int) -> int:
        if value % 2:
            raise ValueError(f'd_model debe ser par para emparejar seno/coseno (recibido {value})')
        return value

    @model_validator(mode='after')
    def _check_consistency(self) -> 'ModelConfig':
        if self.d_model % self.heads:
            raise ValueError(f'd_model={self.d_model} no es divisible entre heads={self.heads}')
        if not self.target_columns:
            raise ValueError('target_columns no puede estar vacío')
        bad = [c for c in self.target_columns if not 0 <= c < self.d_input]
        if bad:
            raise ValueError(f'target_columns {bad} fuera de rango para d_input={self.d_input}')
        return self

    @property
    def n(self) -> int:
        """Longitud de cada una de las tres partes de la ventana."""
        return self.window - 2

    @property
    def attn_width(self) -> int:
        return self.d_attn if self.d_attn is not None else self.d_model

    @property
    def ffn(self) -> int:
        return self.ffn_width if self.ffn_width is not None else 4 * self.d_model


class TrainConfig(_Section):
    initial_lr: float = Field(default=0.0005, gt=0.0)
    lr_decay_base: float = Field(default=0.95, gt=0.0, le=1.0)
    lr_mode: Literal['compound', 'exponential'] = 'compound'
    batch_size: int = Field(default=20, ge=1)
    epochs: int = Field(default=50, ge=1)
    seed: int = 0
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    epsilon: float = Field(default=1e-8, gt=0.0)
    max_grad_norm: Optional[float] = Field(default=None, gt=0.0)
    checkpoint_every: Optional[int] = Field(default=None, ge=1)


class DataConfig(_Section):
    path: Optional[str] = None
    index_column: Optional[str] = None
    targets: Optional[List[str]] = Field(default=None, description='Nombres de las columnas objetivo (None = primera)')
    train_size: Optional[int] = Field(default=None, ge=1)
    test_size: Optional[int] = Field(default=None, ge=1)
    train_fraction: float = Field(default=0.7, gt=0.0, lt=1.0)
    pad: bool = True


class GradCheckConfig(_Section):
    d_input: int = Field(default=3, ge=1)
    d_model: int = Field(default=8, ge=2)
    window: int = Field(default=6, ge=4)
    heads: int = Field(default=1, ge=1)
    step: float = Field(default=GRADCHECK_STEP, gt=0.0)
    tolerance: float = Field(default=GRADCHECK_TOLERANCE, gt=0.0)
    entries_per_parameter: Optional[int] = Field(
        default=6, ge=1, description='Entradas muestreadas por tensor; null verifica todas'
    )


class SynthConfig(_Section):
    kind: Literal['trend', 'sine', 'trend+sine', 'mutation'] = 'trend+sine'
    length: int = Field(default=400, ge=8)
    noise: float = Field(default=0.02, ge=0.0)
    aux_columns: int = Field(default=0, ge=0)


class RunConfig(_Section):
    seed: int = 0
    out_dir: str = DEFAULT_OUTPUT_DIR
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    data: DataConfig = Field(default_factory=DataConfig)
    gradcheck: GradCheckConfig = Field(default_factory=GradCheckConfig)
    synth: SynthConfig = Field(default_factory=SynthConfig)

    @model_validator(mode='after')
    def _single_root_seed(self) -> 'RunConfig':
        # toda la aleatoriedad sale de una sola semilla
        if self.train.seed != self.seed:
            self.train = self.train.model_copy(update={'seed': self.seed})
        return self


# Banderas compartidas de la CLI → ruta dentro de RunConfig
FLAG_PATHS: Dict[str, str] = {
    'data': 'data.path',
    'out': 'out_dir',
    'seed': 'seed',
    'epochs': 'train.epochs',
    'window': 'model.window',
    'targets': 'data.targets',
    'ablate_diff_attention': 'model.ablate_diff_attention',
    'ablate_residual_layer': 'model.ablate_residual_layer',
    'per_timestep_fusion_weights': 'model.per_timestep_fusion_weights',
}


def _set_dotted(tree: Dict[str, Any], dotted: str, value: Any) -> None:
    *parents, leaf = dotted.split('.')
    node = tree
    for key in parents:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError(f"'{key}' debe ser una sección anidada")
    node[leaf] = value


def load_config_file(path: Optional[Path]) -> Dict[str, Any]:
    """Lee el archivo YAML de configuración; sin ruta devuelve un árbol vacío."""
    if path is None:
        return {}
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f'No existe el archivo de configuración: {path}')
    try:
        tree = yaml.safe_load(path.read_text(encoding='utf-8')) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f'YAML inválido en {path}: {e}') from e
    if not isinstance(tree, dict):
        raise ConfigError(f'La raíz de {path} debe ser un mapeo clave/valor')
    return tree


def resolve_run_config(path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Combina defaults, archivo y banderas, y valida antes de cualquier cómputo.

    Args:
        path: archivo YAML opcional.
        overrides: valores de banderas indexados por nombre (ver `FLAG_PATHS`);
            `None` o `False` significan "no indicado".

    Returns:
        RunConfig: la configuración completamente resuelta.
    """
    tree = load_config_file(path)
    for flag, value in (overrides or {}).items():
        if value is None or value is False:
            continue
        _set_dotted(tree, FLAG_PATHS.get(flag, flag), value)
    config = RunConfig.model_validate(tree)
    logger.debug(f'Configuración resuelta: {config.model_dump(mode="json")}')
    return config


def dump_run_config(config: RunConfig, path: Path) -> Path:
    """Escribe el eco de la configuración; es a su vez una entrada válida para --config."""
    path = Path(path)
    path.write_text(
        yaml.safe_dump(config.model_dump(mode='json'), sort_keys=False, allow_unicode=True),
        encoding='utf-8',
    )
    return path
