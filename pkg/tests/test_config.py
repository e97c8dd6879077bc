# -*- coding: utf-8 -*-
import pytest
import yaml
from loguru import logger
from pydantic import ValidationError
from config.error_handlers import EXIT_CONFIG
from config.error_handlers import EXIT_INPUT
from config.error_handlers import EXIT_INTERNAL
from config.error_handlers import EXIT_NUMERIC
from config.error_handlers import dispatch
from config.exceptions import ConfigError
from config.exceptions import ConsistencyError
from config.exceptions import GradientCheckFailed
from config.exceptions import NumericError
from config.exceptions import ParseError
from config.exceptions import WindowTooShortError
from config.logger import start_logger
from config.run_config import ModelConfig
from config.run_config import RunConfig
from config.run_config import dump_run_config
from config.run_config import resolve_run_config
from config.server import lifespan
from config.server import prepare_run_dir
from extensions.cli.options import collect_overrides
from extensions.cli.options import parse_targets


class TestResolution:
    def test_defaults(self):
        config = resolve_run_config()
        assert config.train.initial_lr == 0.0005
        assert config.train.batch_size == 20
        assert config.model.conv_kernels == 16
        assert config.model.lstm_hidden == 32
        assert config.model.dropout == 0.5

    def test_flag_beats_file_beats_default(self, micro_config_file):
        from_file = resolve_run_config(micro_config_file)
        assert from_file.train.epochs == 2
        assert from_file.model.window == 6
        assert from_file.train.batch_size == 8

        flagged = resolve_run_config(micro_config_file, {'epochs': 5, 'window': None, 'ablate_residual_layer': False})
        assert flagged.train.epochs == 5
        assert flagged.model.window == 6
        assert not flagged.model.ablate_residual_layer

    def test_root_seed_reaches_training(self, micro_config_file):
        config = resolve_run_config(micro_config_file, {'seed': 11})
        assert config.seed == config.train.seed == 11

    def test_echo_round_trip(self, tmp_path, micro_config_file):
        config = resolve_run_config(micro_config_file, {'per_timestep_fusion_weights': True})
        echoed = dump_run_config(config, tmp_path / 'echo.yaml')
        assert resolve_run_config(echoed) == config

    @pytest.mark.parametrize('tree', [
        {'model': {'d_model': 7}},
        {'model': {'d_model': 8, 'heads': 3}},
        {'model': {'window': 3}},
        {'model': {'target_columns': [1]}},
        {'train': {'batch_size': 0}},
        {'unknown_section': {}},
    ])
    def test_invalid_values_are_rejected(self, tmp_path, tree):
        path = tmp_path / 'bad.yaml'
        path.write_text(yaml.safe_dump(tree), encoding='utf-8')
        with pytest.raises(ValidationError):
            resolve_run_config(path)

    def test_missing_and_malformed_files(self, tmp_path):
        with pytest.raises(ConfigError):
            resolve_run_config(tmp_path / 'missing.yaml')
        path = tmp_path / 'list.yaml'
        path.write_text('- a\n- b\n', encoding='utf-8')
        with pytest.raises(ConfigError):
            resolve_run_config(path)

    def test_derived_widths(self):
        config = ModelConfig(d_model=16, window=10)
        assert (config.n, config.attn_width, config.ffn) == (8, 16, 64)


class TestOptions:
    def test_parse_targets(self):
        assert parse_targets(' a, b ,,c ') == ['a', 'b', 'c']
        assert parse_targets(None) is None
        assert parse_targets(' , ') is None

    def test_paths_become_text(self, tmp_path):
        overrides = collect_overrides(data=tmp_path / 'x.csv', out=None, targets='y')
        assert overrides == {'data': str(tmp_path / 'x.csv'), 'out': None, 'targets': ['y']}


class TestErrorHandlers:
    @pytest.mark.parametrize('exc, code', [
        (ParseError('bad cell', row=2, column='x'), EXIT_INPUT),
        (WindowTooShortError('short'), EXIT_INPUT),
        (FileNotFoundError('gone'), EXIT_INPUT),
        (ConfigError('bad'), EXIT_CONFIG),
        (NumericError('nan'), EXIT_NUMERIC),
        (ConsistencyError('gap'), EXIT_NUMERIC),
        (GradientCheckFailed('off', failing=['lstm:w_x']), EXIT_NUMERIC),
        (KeyError('boom'), EXIT_INTERNAL),
    ])
    def test_exit_codes(self, exc, code):
        assert dispatch(exc) == code

    def test_validation_error_is_config(self, capsys):
        try:
            RunConfig.model_validate({'model': {'heads': 0}})
        except ValidationError as exc:
            assert dispatch(exc) == EXIT_CONFIG
        err = capsys.readouterr().err
        assert 'error=CONFIG_ERROR code=INVALID_CONFIG detail="model.heads:' in err

    def test_single_parseable_line(self, capsys):
        dispatch(ParseError('celda "mala"\nen la fila 3', row=3, column='x'))
        lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith('error=')]
        assert lines == ['error=INPUT_ERROR code=PARSE_ERROR detail="celda \'mala\' en la fila 3"']


class TestLifespan:
    def test_run_context_leaves_no_files(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        messages = []
        with lifespan('synth') as run_id:
            sink = logger.add(messages.append, format='{extra[run_id]} {extra[command]} {message}')
            logger.info('hola')
            logger.remove(sink)
        assert len(run_id) == 12
        assert messages == [f'{run_id} synth hola\n']
        assert list(tmp_path.iterdir()) == []

    def test_run_log_starts_with_the_run_dir(self, tmp_path):
        run_dir = prepare_run_dir(tmp_path / 'run')
        logger.info('dentro de la corrida')
        start_logger()
        assert 'dentro de la corrida' in (run_dir / 'run.log').read_text(encoding='utf-8')
