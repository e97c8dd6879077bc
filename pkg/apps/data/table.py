# -*- coding: utf-8 -*-
"""Tabla de series de tiempo y lectura de CSV."""

from dataclasses import dataclass
from dataclasses import replace
from pathlib import Path
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
import numpy as np
import pandas as pd
from loguru import logger
from config.exceptions import ConfigError
from config.exceptions import InputError
from config.exceptions import ParseError


@dataclass(frozen=True)
class TimeSeriesTable:
    """Valores T×d_input en unidades originales, filas en orden cronológico."""
    columns: Tuple[str, ...]
    values: np.ndarray
    target_columns: Tuple[int, ...] = (0,)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True, order='C')
        if values.ndim != 2 or values.shape[1] != len(self.columns):
            raise InputError(f'La tabla tiene forma {values.shape} pero {len(self.columns)} columnas')
        if not np.all(np.isfinite(values)):
            raise InputError('La tabla contiene valores no finitos')
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'columns', tuple(self.columns))
        object.__setattr__(self, 'target_columns', tuple(int(c) for c in self.target_columns))

    @property
    def length(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def target_names(self) -> List[str]:
        return [self.columns[c] for c in self.target_columns]

    def with_targets(self, names: Optional[Sequence[str]]) -> 'TimeSeriesTable':
        """Selecciona las columnas objetivo por nombre; `None` conserva las actuales."""
        if not names:
            return self
        unknown = [name for name in names if name not in self.columns]
        if unknown:
            raise ConfigError(f'Columnas objetivo desconocidas {unknown}; disponibles {list(self.columns)}')
        return replace(self, target_columns=tuple(self.columns.index(name) for name in names))

    def rows(self, start: int, stop: int) -> 'TimeSeriesTable':
        return replace(self, values=self.values[start:stop])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, columns=list(self.columns))


def _to_float(cell: str) -> Optional[float]:
    try:
        return float(cell)
    except (TypeError, ValueError):
        return None


def load_csv(path: Path, index_column: Optional[str] = None,
             targets: Optional[Sequence[str]] = None) -> TimeSeriesTable:
    """Lee un CSV con encabezado.

    Las columnas en las que ninguna celda es numérica se descartan con una
    advertencia. En las demás, cualquier celda no numérica o no finita es un
    error que indica fila (1 = primera fila de datos) y columna.

    Raises:
        InputError: archivo inexistente, vacío o sin columnas numéricas.
        ParseError: celda inválida en una columna numérica.
        ConfigError: `index_column` o `targets` no existen.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f'No existe el archivo de datos: {path}', path=str(path))

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise InputError(f'Archivo vacío: {path}') from e
    except pd.errors.ParserError as e:
        raise InputError(f'CSV mal formado en {path}: {e}') from e
    if frame.empty:
        raise InputError(f'El archivo {path} no tiene filas de datos')

    if index_column is not None:
        if index_column not in frame.columns:
            raise ConfigError(f"La columna índice '{index_column}' no existe en {path}")
        frame = frame.drop(columns=[index_column])

    kept = {}
    for name in frame.columns:
        parsed = frame[name].str.strip().map(_to_float)
        if parsed.isna().all():
            logger.warning(f"⚠️ Columna '{name}' sin valores numéricos; se omite")
            continue
        numeric = parsed.astype(np.float64)
        bad = ~np.isfinite(numeric.to_numpy())
        if bad.any():
            row = int(np.argmax(bad))
            raise ParseError(
                f"Celda inválida '{frame[name].iloc[row]}' en la fila {row + 1}, columna '{name}'",
                row=row + 1,
                column=str(name),
            )
        kept[str(name)] = numeric.to_numpy()

    if not kept:
        raise InputError(f'El archivo {path} no contiene columnas numéricas')

    table = TimeSeriesTable(columns=tuple(kept), values=np.column_stack(list(kept.values())))
    logger.info(f'📂 {path.name}: {table.length} filas × {table.width} columnas')
    return table.with_targets(targets)


def split_table(table: TimeSeriesTable, train_size: Optional[int] = None, test_size: Optional[int] = None,
                train_fraction: float = 0.7) -> Tuple[TimeSeriesTable, TimeSeriesTable]:
    """Corte cronológico: primero entrenamiento, a continuación prueba.

    Sin tamaños explícitos, `train_fraction` de las filas entrena y el resto prueba.
    Con sólo `train_size`, la prueba usa todas las filas restantes.
    """
    total = table.length
    if train_size is None:
        train_size = int(round(total * train_fraction))
    if test_size is None:
        test_size = total - train_size
    if train_size < 1 or test_size < 1 or train_size + test_size > total:
        raise InputError(f'División imposible: {train_size} + {test_size} filas de {total}')
    return table.rows(0, train_size), table.rows(train_size, train_size + test_size)
