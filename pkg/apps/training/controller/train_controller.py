# -*- coding: utf-8 -*-
from pathlib import Path
from typing import Annotated
from typing import Any
from typing import Dict
from typing import Optional
import numpy as np
import pandas as pd
import typer
from loguru import logger
from apps.data.pipeline import bind_model_to_table
from apps.data.pipeline import check_compatible
from apps.data.pipeline import load_table
from apps.data.pipeline import prepare
from apps.forecaster.model import Forecaster
from apps.training.checkpoint import Checkpoint
from apps.training.checkpoint import load_checkpoint
from apps.training.checkpoint import restore_model
from apps.training.checkpoint import save_checkpoint
from apps.training.optimizer import Adam
from apps.training.trainer import TrainResult
from apps.training.trainer import train
from config.run_config import RunConfig
from config.run_config import dump_run_config
from config.server import prepare_run_dir
from config.settings import RUN_FILES
from extensions.cli.options import AblateDiffOpt
from extensions.cli.options import AblateResidualOpt
from extensions.cli.options import ConfigOpt
from extensions.cli.options import DataOpt
from extensions.cli.options import EpochsOpt
from extensions.cli.options import OutOpt
from extensions.cli.options import PerTimestepOpt
from extensions.cli.options import SeedOpt
from extensions.cli.options import TargetsOpt
from extensions.cli.options import WindowOpt
from extensions.cli.options import collect_overrides
from extensions.cli.runner import run_command


def write_loss_history(path: Path, history) -> Path:
    frame = pd.DataFrame({'epoch': np.arange(1, len(history) + 1), 'mean_loss': history})
    frame.to_csv(path, index=False)
    return path


def _resumed_config(checkpoint: Checkpoint, config: RunConfig, overrides: Dict[str, Any]) -> RunConfig:
    """Al reanudar manda el checkpoint; sólo --out, --data y --epochs explícitos lo pisan."""
    tree = checkpoint.config.model_dump()
    if overrides.get('out') is not None:
        tree['out_dir'] = config.out_dir
    if overrides.get('data') is not None:
        tree['data']['path'] = config.data.path
    if overrides.get('epochs') is not None:
        tree['train']['epochs'] = config.train.epochs
    return RunConfig.model_validate(tree)


def run_training(config: RunConfig, resume: Optional[Path] = None,
                 overrides: Optional[Dict[str, Any]] = None) -> TrainResult:
    """Datos → entrenamiento → checkpoint, historial de pérdidas y eco de la configuración."""
    checkpoint = load_checkpoint(resume) if resume is not None else None
    if checkpoint is not None:
        config = _resumed_config(checkpoint, config, overrides or {})

    table = load_table(config)
    if checkpoint is None:
        config = bind_model_to_table(config, table)
    else:
        check_compatible(config, table)
    prepared = prepare(config, table, checkpoint.normalization if checkpoint else None)
    windows = prepared.train_windows

    run_dir = prepare_run_dir(Path(config.out_dir))
    dump_run_config(config, run_dir / RUN_FILES['CONFIG'])

    if checkpoint is None:
        model = Forecaster(config.model, seed=config.seed)
        optimizer, rng, start, history = None, None, 0, []
    else:
        _, model = restore_model(checkpoint)
        cfg = config.train
        optimizer = Adam(model.named_parameters(), cfg.beta1, cfg.beta2, cfg.epsilon)
        optimizer.load_state_dict(checkpoint.optimizer)
        rng = np.random.default_rng()
        rng.bit_generator.state = checkpoint.rng_state
        start, history = checkpoint.epoch, checkpoint.loss_history
        logger.info(f'⏯️ Reanudando desde la época {start}')
    logger.info(f'🧠 Modelo con {model.parameter_count()} parámetros')

    def snapshot(epoch: int, result: TrainResult) -> Checkpoint:
        return Checkpoint(
            config=config,
            epoch=epoch,
            parameters=model.export_arrays(),
            optimizer=result.optimizer.state_dict(),
            normalization=prepared.state,
            rng_state=result.rng.bit_generator.state,
            loss_history=list(result.loss_history),
            groups=model.parameter_groups(),
        )

    def on_epoch_end(epoch: int, result: TrainResult) -> None:
        every = config.train.checkpoint_every
        if every and epoch % every == 0 and epoch < config.train.epochs:
            save_checkpoint(run_dir / f'checkpoint_epoch_{epoch}.json', snapshot(epoch, result))

    result = train(model, windows, config.train, optimizer=optimizer, rng=rng,
                   start_epoch=start, loss_history=history, on_epoch_end=on_epoch_end)

    save_checkpoint(run_dir / RUN_FILES['CHECKPOINT'], snapshot(result.epochs_completed, result))
    write_loss_history(run_dir / RUN_FILES['LOSS_HISTORY'], result.loss_history)
    if result.loss_history:
        logger.info(f'🏁 Pérdida: primera {result.loss_history[0]:.6e}, última {result.loss_history[-1]:.6e}')
    return result


def train_command(
    config: ConfigOpt = None,
    data: DataOpt = None,
    out: OutOpt = None,
    seed: SeedOpt = None,
    epochs: EpochsOpt = None,
    window: WindowOpt = None,
    targets: TargetsOpt = None,
    ablate_diff_attention: AblateDiffOpt = False,
    ablate_residual_layer: AblateResidualOpt = False,
    per_timestep_fusion_weights: PerTimestepOpt = False,
    resume: Annotated[Optional[Path], typer.Option('--resume', help='Continúa desde un checkpoint.')] = None,
):
    """Entrena el modelo y escribe checkpoint, historial de pérdidas y configuración resuelta."""
    overrides = collect_overrides(
        data=data, out=out, seed=seed, epochs=epochs, window=window, targets=targets,
        ablate_diff_attention=ablate_diff_attention,
        ablate_residual_layer=ablate_residual_layer,
        per_timestep_fusion_weights=per_timestep_fusion_weights,
    )
    run_command('train', lambda cfg: run_training(cfg, resume, overrides), config, overrides)
