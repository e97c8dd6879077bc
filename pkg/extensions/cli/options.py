# -*- coding: utf-8 -*-
"""Opciones compartidas por los subcomandos.

Cada opción vale `None` (o `False` en las banderas) cuando no se indica, de
modo que `resolve_run_config` sólo pisa lo que el usuario escribió.
"""

from pathlib import Path
from typing import Annotated
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
import typer

ConfigOpt = Annotated[Optional[Path], typer.Option('--config', help='Archivo YAML de configuración.')]
DataOpt = Annotated[Optional[Path], typer.Option('--data', help='CSV con encabezado.')]
OutOpt = Annotated[Optional[Path], typer.Option('--out', help='Directorio de la corrida.')]
SeedOpt = Annotated[Optional[int], typer.Option('--seed', help='Semilla raíz de toda la aleatoriedad.')]
EpochsOpt = Annotated[Optional[int], typer.Option('--epochs', help='Cantidad de épocas.')]
WindowOpt = Annotated[Optional[int], typer.Option('--window', help='Longitud N de cada ventana.')]
TargetsOpt = Annotated[Optional[str], typer.Option('--targets', help='Columnas objetivo separadas por coma.')]
AblateDiffOpt = Annotated[bool, typer.Option(
    '--ablate-diff-attention', help='Quita la capa diferencial, la atención vecina y la fusión deslizante.'
)]
AblateResidualOpt = Annotated[bool, typer.Option('--ablate-residual-layer', help='Quita las capas residuales.')]
PerTimestepOpt = Annotated[bool, typer.Option(
    '--per-timestep-fusion-weights', help='Un vector de pesos de fusión por instante.'
)]
CheckpointOpt = Annotated[Path, typer.Option('--checkpoint', help='Checkpoint de un entrenamiento.')]
SplitOpt = Annotated[str, typer.Option('--split', help="Tramo a evaluar: 'train' o 'test'.")]


def parse_targets(targets: Optional[str]) -> Optional[List[str]]:
    if targets is None:
        return None
    names = [name.strip() for name in targets.split(',') if name.strip()]
    return names or None


def collect_overrides(**flags: Any) -> Dict[str, Any]:
    """Normaliza los valores de las banderas para `resolve_run_config`."""
    overrides = dict(flags)
    if 'targets' in overrides:
        overrides['targets'] = parse_targets(overrides['targets'])
    for key in ('data', 'out'):
        if overrides.get(key) is not None:
            overrides[key] = str(overrides[key])
    return overrides
