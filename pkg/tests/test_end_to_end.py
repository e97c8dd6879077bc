# -*- coding: utf-8 -*-
"""Corridas completas con la configuración por defecto (50 épocas, lotes de 20).

Tardan minutos: todas llevan la marca `slow`.
"""
from pathlib import Path
from typing import Any
from typing import Dict
import numpy as np
import pandas as pd
import pytest
from typer.testing import CliRunner
from apps.data.synth import synth_series
from apps.evaluation.controller.evaluation_controller import run_eval
from apps.training.controller.train_controller import run_training
from config.run_config import resolve_run_config
from extensions.report.report import Report
from main import app

pytestmark = pytest.mark.slow

SEEDS = (0, 1, 2, 3, 4)
runner = CliRunner()


class Runs:
    """Entrena y evalúa una vez por combinación (serie, semilla, banderas)."""

    def __init__(self, root: Path):
        self.root = root
        self.cache: Dict[tuple, Dict[str, Any]] = {}

    def series(self, kind: str, noise: float) -> Path:
        path = self.root / f'{kind}_{noise}.csv'
        if not path.exists():
            synth_series(kind, 400, noise=noise, seed=0).to_frame().to_csv(path, index=False)
        return path

    def run(self, kind: str, seed: int, noise: float = 0.02, **flags) -> Dict[str, Any]:
        key = (kind, noise, seed, tuple(sorted(flags.items())))
        if key not in self.cache:
            out = self.root / f"{kind}_{noise}_{seed}_{'_'.join(sorted(k for k, v in flags.items() if v)) or 'full'}"
            overrides = {'data': str(self.series(kind, noise)), 'out': str(out), 'seed': seed, 'epochs': 50, **flags}
            result = run_training(resolve_run_config(None, overrides))
            summary = run_eval(resolve_run_config(None, overrides), out / 'checkpoint.json', 'test', {})
            self.cache[key] = {'losses': result.loss_history, 'summary': summary}
        return self.cache[key]


def normalized(summary: Dict[str, Any], label: str, metric: str) -> float:
    return summary[label]['normalized']['target'][metric]


@pytest.fixture(scope='module')
def runs(tmp_path_factory) -> Runs:
    return Runs(tmp_path_factory.mktemp('end_to_end'))


class TestTraining:
    def test_loss_falls_below_a_tenth(self, runs):
        losses = runs.run('trend+sine', 0)['losses']
        assert len(losses) == 50
        assert np.all(np.isfinite(losses))
        assert losses[-1] < 0.1 * losses[0]

    def test_model_matches_persistence_over_seeds(self, runs):
        summaries = [runs.run('trend+sine', seed)['summary'] for seed in SEEDS]
        model = np.median([normalized(s, 'model', 'mae') for s in summaries])
        baseline = np.median([normalized(s, 'baseline', 'mae') for s in summaries])
        assert model <= baseline

    def test_diff_attention_helps_on_mutation_series(self, runs, record_property):
        full = [normalized(runs.run('mutation', seed)['summary'], 'model', 'rmse') for seed in SEEDS]
        no_diff = [normalized(runs.run('mutation', seed, ablate_diff_attention=True)['summary'], 'model', 'rmse')
                   for seed in SEEDS]
        no_residual = [normalized(runs.run('mutation', seed, ablate_residual_layer=True)['summary'], 'model', 'rmse')
                       for seed in SEEDS]
        record_property('median_rmse_full', float(np.median(full)))
        record_property('median_rmse_no_diff_attention', float(np.median(no_diff)))
        # sólo se informa; no decide el resultado
        record_property('median_rmse_no_residual_layer', float(np.median(no_residual)))
        assert np.median(full) <= np.median(no_diff)


class TestCommands:
    def test_train_on_trend(self, tmp_path):
        data, out = tmp_path / 'trend.csv', tmp_path / 'run'
        assert runner.invoke(app, ['synth', '--out', str(data), '--kind', 'trend', '--length', '400']).exit_code == 0
        result = runner.invoke(app, ['train', '--data', str(data), '--out', str(out), '--epochs', '50'])
        assert result.exit_code == 0, result.output
        losses = pd.read_csv(out / 'loss_history.csv')['mean_loss'].to_numpy()
        assert losses[-1] < 0.1 * losses[0]

    def test_eval_on_noiseless_sine_over_seeds(self, tmp_path):
        data = tmp_path / 'sine.csv'
        runner.invoke(app, ['synth', '--out', str(data), '--kind', 'sine', '--length', '400', '--noise', '0'])
        model, baseline = [], []
        for seed in SEEDS:
            out = tmp_path / f'seed_{seed}'
            trained = runner.invoke(app, ['train', '--data', str(data), '--out', str(out), '--seed', str(seed)])
            assert trained.exit_code == 0, trained.output
            evaluated = runner.invoke(app, ['eval', '--checkpoint', str(out / 'checkpoint.json')])
            assert evaluated.exit_code == 0, evaluated.output
            data_block = Report.read(out / 'metrics.json')['data']
            model.append(normalized(data_block, 'model', 'mae'))
            baseline.append(normalized(data_block, 'baseline', 'mae'))
        assert np.median(model) <= np.median(baseline)
