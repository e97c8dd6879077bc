# -*- coding: utf-8 -*-
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Tuple
from loguru import logger
from apps.data.pipeline import check_compatible
from apps.data.pipeline import load_table
from apps.data.pipeline import prepare
from apps.evaluation.forecast import Forecast
from apps.evaluation.forecast import evaluate
from apps.evaluation.forecast import forecast_split
from apps.evaluation.forecast import predictions_frame
from apps.training.checkpoint import load_checkpoint
from apps.training.checkpoint import restore_model
from config.exceptions import ConfigError
from config.run_config import RunConfig
from config.server import prepare_run_dir
from config.settings import RUN_FILES
from extensions.cli.options import CheckpointOpt
from extensions.cli.options import DataOpt
from extensions.cli.options import OutOpt
from extensions.cli.options import SplitOpt
from extensions.cli.runner import run_command
from extensions.report.report import Report
from extensions.report.report import STATUS_OK

SPLITS = ('train', 'test')


def _forecast(checkpoint_path: Path, config: RunConfig, overrides: Dict[str, Any], split: str) -> Tuple[Path, Forecast]:
    if split not in SPLITS:
        raise ConfigError(f"--split debe ser uno de {SPLITS}, recibido '{split}'")
    checkpoint = load_checkpoint(checkpoint_path)
    saved, model = restore_model(checkpoint)
    tree = saved.model_dump()
    if overrides.get('data') is not None:
        tree['data']['path'] = config.data.path
    tree['out_dir'] = config.out_dir if overrides.get('out') is not None else str(Path(checkpoint_path).parent)
    saved = RunConfig.model_validate(tree)

    table = load_table(saved)
    check_compatible(saved, table)
    prepared = prepare(saved, table, checkpoint.normalization)
    forecast = forecast_split(model, prepared, split)
    return prepare_run_dir(Path(saved.out_dir)), forecast


def run_predict(config: RunConfig, checkpoint: Path, split: str, overrides: Dict[str, Any]) -> Path:
    run_dir, forecast = _forecast(checkpoint, config, overrides, split)
    path = run_dir / RUN_FILES['PREDICTIONS']
    predictions_frame(forecast).to_csv(path, index=False)
    logger.info(f'📝 Predicciones escritas: {path}')
    return path


def run_eval(config: RunConfig, checkpoint: Path, split: str, overrides: Dict[str, Any]) -> Dict[str, Any]:
    run_dir, forecast = _forecast(checkpoint, config, overrides, split)
    predictions_frame(forecast).to_csv(run_dir / RUN_FILES['PREDICTIONS'], index=False)
    summary = evaluate(forecast)
    summary['checkpoint'] = str(checkpoint)
    Report.write(run_dir / RUN_FILES['METRICS'], status=STATUS_OK, message='MAE/RMSE del modelo y de la persistencia',
                 data=summary)
    for name, values in summary['model']['original'].items():
        logger.info(f"📊 {name}: MAE {values['mae']:.6g}, RMSE {values['rmse']:.6g} (unidades originales)")
    return summary


def predict_command(checkpoint: CheckpointOpt, data: DataOpt = None, out: OutOpt = None, split: SplitOpt = 'test'):
    """Pronostica un tramo con un checkpoint y escribe predictions.csv."""
    overrides = {'data': str(data) if data else None, 'out': str(out) if out else None}
    run_command('predict', lambda cfg: run_predict(cfg, checkpoint, split, overrides), None, overrides)


def eval_command(checkpoint: CheckpointOpt, data: DataOpt = None, out: OutOpt = None, split: SplitOpt = 'test'):
    """Pronostica un tramo y escribe predictions.csv y metrics.json (modelo y persistencia)."""
    overrides = {'data': str(data) if data else None, 'out': str(out) if out else None}
    run_command('eval', lambda cfg: run_eval(cfg, checkpoint, split, overrides), None, overrides)
