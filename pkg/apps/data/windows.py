# -*- coding: utf-8 -*-
"""Ventanas deslizantes de paso 1 con el desplazamiento de un punto.

Cada ventana de N filas se parte después en x1 (filas 0..n−1), x2 (1..n) y
x3 (2..n+1), con n = N−2. La posición t del centro es la fila t+1 de la
ventana y su objetivo, un paso adelante, es la fila t+2. Con relleno se
replica una vez la primera fila al inicio y la última al final, de modo que
cada índice original es el primer punto del centro de exactamente una ventana.
"""

from dataclasses import dataclass
from typing import Iterator
from typing import List
from typing import Tuple
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from apps.autodiff.tensor import Tensor
from apps.data.table import TimeSeriesTable
from config.exceptions import WindowTooShortError


@dataclass(frozen=True)
class Window:
    values: Tensor
    targets: Tensor
    first_center: int


@dataclass(frozen=True)
class WindowedDataset:
    windows: Tuple[Window, ...]
    window: int
    padded: bool
    length: int
    target_columns: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.windows)

    def __getitem__(self, i: int) -> Window:
        return self.windows[i]

    def __iter__(self) -> Iterator[Window]:
        return iter(self.windows)

    @property
    def n(self) -> int:
        return self.window - 2

    @property
    def first_centers(self) -> np.ndarray:
        return np.array([w.first_center for w in self.windows], dtype=np.int64)

    def batches(self, batch_size: int, rng: np.random.Generator) -> List[np.ndarray]:
        """Orden barajado con `rng`; el último lote parcial se conserva."""
        order = rng.permutation(len(self.windows))
        return [order[i:i + batch_size] for i in range(0, len(order), batch_size)]


def make_windows(table: TimeSeriesTable, window: int, pad: bool = True) -> WindowedDataset:
    """Construye todas las ventanas de longitud `window`, avanzando de a un paso.

    Raises:
        WindowTooShortError: la serie (ya rellenada) tiene menos de `window` filas.
    """
    values = table.values
    offset = 0
    if pad:
        values = np.vstack([values[:1], values, values[-1:]])
        offset = -1
    if window < 4:
        raise WindowTooShortError(f'La ventana debe tener al menos 4 filas, recibido {window}')
    if values.shape[0] < window:
        raise WindowTooShortError(
            f'Serie de {table.length} filas (relleno={pad}) más corta que la ventana N={window}'
        )

    # (starts, d, N) → (starts, N, d)
    views = sliding_window_view(values, window, axis=0).transpose(0, 2, 1)
    targets = list(table.target_columns)
    windows = tuple(
        Window(
            values=Tensor(view),
            targets=Tensor(view[2:, targets]),
            first_center=start + 1 + offset,
        )
        for start, view in enumerate(views)
    )
    return WindowedDataset(
        windows=windows,
        window=window,
        padded=pad,
        length=table.length,
        target_columns=tuple(targets),
    )
