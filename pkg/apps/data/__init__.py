from apps.data.assembly import AssembledSeries
from apps.data.assembly import assemble_predictions
from apps.data.baseline import persistence_baseline
from apps.data.metrics import MetricsReport
from apps.data.metrics import metrics
from apps.data.normalization import NormalizationState
from apps.data.normalization import denormalize
from apps.data.normalization import fit_normalization
from apps.data.normalization import normalize
from apps.data.synth import jump_schedule
from apps.data.synth import synth_series
from apps.data.table import TimeSeriesTable
from apps.data.table import load_csv
from apps.data.table import split_table
from apps.data.windows import Window
from apps.data.windows import WindowedDataset
from apps.data.windows import make_windows
