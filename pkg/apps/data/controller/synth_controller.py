# -*- coding: utf-8 -*-
from pathlib import Path
from typing import Annotated
from typing import Optional
import typer
from loguru import logger
from apps.data.synth import synth_series
from config.run_config import RunConfig
from extensions.cli.options import ConfigOpt
from extensions.cli.options import SeedOpt
from extensions.cli.runner import run_command


def write_synth(config: RunConfig, out: Path) -> Path:
    cfg = config.synth
    table = synth_series(cfg.kind, cfg.length, cfg.noise, config.seed, cfg.aux_columns)
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    table.to_frame().to_csv(out, index=False)
    logger.info(f'🧪 Serie {cfg.kind} de {cfg.length} puntos (semilla {config.seed}) escrita en {out}')
    return out


def synth_command(
    out: Annotated[Path, typer.Option('--out', help='Ruta del CSV a escribir.')],
    kind: Annotated[Optional[str], typer.Option('--kind', help='trend, sine, trend+sine o mutation.')] = None,
    length: Annotated[Optional[int], typer.Option('--length', help='Cantidad de puntos T.')] = None,
    noise: Annotated[Optional[float], typer.Option('--noise', help='Desvío del ruido gaussiano.')] = None,
    aux_columns: Annotated[Optional[int], typer.Option('--aux-columns', help='Columnas auxiliares.')] = None,
    seed: SeedOpt = None,
    config: ConfigOpt = None,
):
    """Genera una serie sintética determinista y la escribe como CSV."""
    overrides = {
        'seed': seed,
        'synth.kind': kind,
        'synth.length': length,
        'synth.noise': noise,
        'synth.aux_columns': aux_columns,
    }
    run_command('synth', lambda cfg: write_synth(cfg, out), config, overrides)
