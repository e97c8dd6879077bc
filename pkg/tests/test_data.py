# -*- coding: utf-8 -*-
from pathlib import Path
import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st
from apps.data.assembly import assemble_predictions
from apps.data.baseline import persistence_baseline
from apps.data.metrics import metrics
from apps.data.normalization import NormalizationState
from apps.data.normalization import denormalize
from apps.data.normalization import fit_normalization
from apps.data.normalization import normalize
from apps.data.pipeline import prepare
from apps.data.synth import jump_schedule
from apps.data.synth import synth_series
from apps.data.table import TimeSeriesTable
from apps.data.table import load_csv
from apps.data.table import split_table
from apps.data.windows import make_windows
from config.exceptions import ConfigError
from config.exceptions import ConsistencyError
from config.exceptions import InputError
from config.exceptions import ParseError
from config.exceptions import UsageError
from config.exceptions import WindowTooShortError
from config.run_config import DataConfig
from config.run_config import RunConfig
from tests.conftest import micro_model_config


def table_of(values, columns=None) -> TimeSeriesTable:
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 1:
        values = values[:, None]
    columns = columns or tuple(f'c{j}' for j in range(values.shape[1]))
    return TimeSeriesTable(columns=columns, values=values)


def write(tmp_path: Path, text: str) -> Path:
    path = tmp_path / 'data.csv'
    path.write_text(text, encoding='utf-8')
    return path


class TestLoadCsv:
    def test_reads_rows_in_order(self, tmp_path):
        table = load_csv(write(tmp_path, 'a,b\n1,2\n3,4\n5,6\n'))
        assert table.columns == ('a', 'b')
        np.testing.assert_array_equal(table.values, [[1, 2], [3, 4], [5, 6]])

    def test_text_column_is_skipped(self, tmp_path):
        table = load_csv(write(tmp_path, 'label,x\nfoo,1.5\nbar,2.5\n'))
        assert table.columns == ('x',)

    def test_nan_cell_names_row_and_column(self, tmp_path):
        with pytest.raises(ParseError) as info:
            load_csv(write(tmp_path, 'a,b\n1,2\n3,NaN\n'))
        assert (info.value.row, info.value.column) == (2, 'b')

    def test_text_in_numeric_column(self, tmp_path):
        with pytest.raises(ParseError) as info:
            load_csv(write(tmp_path, 'a\n1\noops\n3\n'))
        assert info.value.row == 2

    def test_empty_file(self, tmp_path):
        with pytest.raises(InputError):
            load_csv(write(tmp_path, ''))

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            load_csv(tmp_path / 'nope.csv')

    def test_index_column_and_targets(self, tmp_path):
        table = load_csv(write(tmp_path, 't,x,y\n0,1,2\n1,3,4\n'), index_column='t', targets=['y'])
        assert table.columns == ('x', 'y')
        assert table.target_columns == (1,)
        with pytest.raises(ConfigError):
            table.with_targets(['z'])


class TestNormalization:
    def test_min_max(self):
        state = fit_normalization(table_of([2.0, 4.0, 6.0]))
        np.testing.assert_array_equal(normalize(table_of([2.0, 4.0, 6.0]), state).values[:, 0], [0.0, 0.5, 1.0])

    def test_constant_column_maps_to_zero(self):
        table = table_of([5.0, 5.0, 5.0])
        np.testing.assert_array_equal(normalize(table, fit_normalization(table)).values, 0.0)

    def test_round_trip(self, rng):
        table = table_of(rng.normal(size=(20, 3)) * 10)
        state = fit_normalization(table)
        restored = denormalize(normalize(table, state), state)
        np.testing.assert_allclose(restored.values, table.values, atol=1e-9)

    def test_denormalize_without_state(self):
        with pytest.raises(UsageError):
            denormalize(table_of([1.0, 2.0]), None)

    def test_test_split_reuses_training_state(self):
        table = table_of(np.arange(10.0))
        train, test = split_table(table, train_size=6, test_size=4)
        state = fit_normalization(train)
        normalized = normalize(test, state)
        assert normalized.values.max() > 1.0
        np.testing.assert_array_equal(state.minimum, [0.0])
        np.testing.assert_array_equal(state.maximum, [5.0])

    def test_state_serialization(self):
        state = NormalizationState(minimum=np.array([0.1, -2.0]), maximum=np.array([3.3, 7.0]))
        restored = NormalizationState.from_dict(state.as_dict())
        np.testing.assert_array_equal(restored.minimum, state.minimum)
        np.testing.assert_array_equal(restored.maximum, state.maximum)


class TestSplit:
    def test_default_fraction(self):
        train, test = split_table(table_of(np.arange(10.0)))
        assert (train.length, test.length) == (7, 3)
        assert test.values[0, 0] == 7.0

    def test_impossible_split(self):
        with pytest.raises(InputError):
            split_table(table_of(np.arange(10.0)), train_size=8, test_size=5)


class TestWindows:
    def test_unpadded_count_and_first_centers(self):
        dataset = make_windows(table_of(np.arange(10.0)), 5, pad=False)
        assert len(dataset) == 6
        np.testing.assert_array_equal(dataset.first_centers, np.arange(1, 7))

    def test_targets_are_one_step_ahead(self):
        dataset = make_windows(table_of(np.arange(10.0)), 5, pad=False)
        window = dataset[2]
        np.testing.assert_array_equal(window.values.data[:, 0], [2, 3, 4, 5, 6])
        # centro 3,4,5 → objetivos 4,5,6
        np.testing.assert_array_equal(window.targets.data[:, 0], [4, 5, 6])

    def test_padding_starts_at_index_zero(self):
        dataset = make_windows(table_of(np.arange(10.0)), 5, pad=True)
        assert dataset.first_centers[0] == 0
        np.testing.assert_array_equal(dataset[0].values.data[:, 0], [0, 0, 1, 2, 3])
        np.testing.assert_array_equal(dataset[-1].values.data[:, 0], [6, 7, 8, 9, 9])

    def test_constant_series_gives_identical_windows(self):
        dataset = make_windows(table_of(np.full(8, 2.0)), 4, pad=False)
        assert all(np.array_equal(w.values.data, dataset[0].values.data) for w in dataset)

    def test_too_short(self):
        with pytest.raises(WindowTooShortError):
            make_windows(table_of(np.arange(3.0)), 5, pad=True)

    @settings(max_examples=100, deadline=None)
    @given(T=st.integers(min_value=4, max_value=40), N=st.integers(min_value=4, max_value=12), pad=st.booleans())
    def test_first_centers_are_contiguous(self, T, N, pad):
        if T + (2 if pad else 0) < N:
            return
        dataset = make_windows(table_of(np.arange(float(T))), N, pad=pad)
        centers = dataset.first_centers
        np.testing.assert_array_equal(centers, np.arange(centers[0], centers[0] + len(dataset)))
        if pad:
            assert centers[0] == 0


class TestAssembly:
    def test_cover_without_padding(self):
        dataset = make_windows(table_of(np.arange(10.0)), 5, pad=False)
        outputs = [np.full((3, 1), float(k)) for k in range(len(dataset))]
        assembled = assemble_predictions(outputs, dataset)
        np.testing.assert_array_equal(assembled.indices, np.arange(1, 9))
        np.testing.assert_array_equal(assembled.values[:, 0], [0, 1, 2, 3, 4, 5, 5, 5])

    def test_single_window_keeps_full_center(self):
        dataset = make_windows(table_of(np.arange(5.0)), 5, pad=False)
        assembled = assemble_predictions([np.array([[7.0], [8.0], [9.0]])], dataset)
        np.testing.assert_array_equal(assembled.indices, [1, 2, 3])

    def test_perfect_predictions_reproduce_the_series(self):
        series = np.arange(12.0) ** 2
        dataset = make_windows(table_of(series), 6, pad=True)
        assembled = assemble_predictions([w.targets.data for w in dataset], dataset)
        expected = series[np.minimum(assembled.indices + 1, len(series) - 1)]
        np.testing.assert_array_equal(assembled.values[:, 0], expected)

    def test_count_mismatch(self):
        dataset = make_windows(table_of(np.arange(10.0)), 5, pad=False)
        with pytest.raises(ConsistencyError):
            assemble_predictions([np.zeros((3, 1))], dataset)

    @settings(max_examples=100, deadline=None)
    @given(T=st.integers(min_value=4, max_value=60), N=st.integers(min_value=4, max_value=10), pad=st.booleans())
    def test_every_covered_index_written_once(self, T, N, pad):
        if T + (2 if pad else 0) < N:
            return
        dataset = make_windows(table_of(np.arange(float(T))), N, pad=pad)
        outputs = [np.arange(dataset.n, dtype=float)[:, None] + 100 * k for k in range(len(dataset))]
        assembled = assemble_predictions(outputs, dataset)
        assert len(set(assembled.indices.tolist())) == len(assembled)
        assert len(assembled) == len(dataset) + dataset.n - 1
        if pad:
            np.testing.assert_array_equal(assembled.indices, np.arange(T))


class TestMetrics:
    def test_perfect(self):
        report = metrics(np.array([1.0, 2.0]), np.array([1.0, 2.0]))
        assert report.mae[0] == 0.0 and report.rmse[0] == 0.0

    def test_hand_values(self):
        report = metrics(np.array([0.0, 2.0]), np.array([1.0, 1.0]))
        assert (report.mae[0], report.rmse[0]) == (1.0, 1.0)
        report = metrics(np.array([1.0, 4.0]), np.array([1.0, 2.0]))
        assert report.mae[0] == pytest.approx(1.0)
        assert report.rmse[0] == pytest.approx(np.sqrt(2.0))

    def test_original_units(self):
        state = NormalizationState(minimum=np.array([10.0]), maximum=np.array([20.0]))
        report = metrics(np.array([0.0, 1.0]), np.array([0.5, 0.5]), state, 'original', ['x'])
        assert report.mae[0] == pytest.approx(5.0)
        assert report.as_dict()['targets']['x']['rmse'] == pytest.approx(5.0)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            metrics(np.zeros(3), np.zeros(2))

    @settings(max_examples=100, deadline=None)
    @given(values=st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=1, max_size=30))
    def test_rmse_bounds_mae(self, values):
        pred, truth = np.array(values).T
        report = metrics(pred, truth)
        assert report.rmse[0] >= report.mae[0] * (1 - 1e-12) >= 0.0


class TestSynth:
    def test_noiseless_trend_is_linear(self):
        values = synth_series('trend', 50, noise=0.0, seed=1).values[:, 0]
        np.testing.assert_allclose(np.diff(values, 2), 0.0, atol=1e-14)

    @pytest.mark.parametrize('kind', ['trend', 'sine', 'trend+sine', 'mutation'])
    def test_same_seed_same_table(self, kind):
        a = synth_series(kind, 80, noise=0.05, seed=9, aux_columns=2)
        b = synth_series(kind, 80, noise=0.05, seed=9, aux_columns=2)
        np.testing.assert_array_equal(a.values, b.values)
        assert a.columns == ('target', 'aux_1', 'aux_2')

    @pytest.mark.parametrize('seed', [0, 1, 2, 3])
    def test_mutation_jumps_follow_schedule(self, seed):
        values = synth_series('mutation', 200, noise=0.0, seed=seed).values[:, 0]
        schedule = jump_schedule(200, seed)
        jumps = np.flatnonzero(np.diff(values)) + 1
        np.testing.assert_array_equal(jumps, schedule.times)
        assert schedule.count == len(jumps)

    def test_validation(self):
        with pytest.raises(ConfigError):
            synth_series('square', 50)
        with pytest.raises(InputError):
            synth_series('trend', 5)


class TestBaseline:
    def test_constant_series_has_zero_error(self):
        series = np.full(10, 3.0)
        assert metrics(persistence_baseline(series), series[1:]).mae[0] == 0.0

    def test_unit_ramp(self):
        series = np.arange(20.0)
        assert metrics(persistence_baseline(series), series[1:]).mae[0] == 1.0

    def test_random_walk_matches_mean_increment(self, rng):
        series = np.cumsum(rng.normal(size=100))
        mae = metrics(persistence_baseline(series), series[1:]).mae[0]
        assert mae == pytest.approx(np.mean(np.abs(np.diff(series))))

    def test_too_short(self):
        with pytest.raises(InputError):
            persistence_baseline(np.array([1.0]))


class TestPipeline:
    def short_test_split(self) -> RunConfig:
        return RunConfig(model=micro_model_config(window=12), data=DataConfig(train_size=52, test_size=8))

    def test_short_test_split_does_not_block_training(self):
        prepared = prepare(self.short_test_split(), synth_series('trend', 60))
        assert len(prepared.train_windows) == 52 + 2 - 12 + 1
        with pytest.raises(WindowTooShortError):
            prepared.test_windows

    def test_short_train_split_does_not_block_the_test_split(self):
        config = RunConfig(model=micro_model_config(window=12), data=DataConfig(train_size=8, test_size=52))
        prepared = prepare(config, synth_series('trend', 60))
        assert len(prepared.windows('test')) == 52 + 2 - 12 + 1
        with pytest.raises(WindowTooShortError):
            prepared.windows('train')

    def test_windows_are_built_once(self):
        prepared = prepare(self.short_test_split(), synth_series('trend', 60))
        assert prepared.train_windows is prepared.train_windows
