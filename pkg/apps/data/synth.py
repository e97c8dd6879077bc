# -*- coding: utf-8 -*-
"""Series sintéticas deterministas por semilla.

- trend: rampa lineal de 0 a 1.
- sine: senoide de periodo fijo.
- trend+sine: la suma de ambas.
- mutation: constante a tramos con saltos en instantes sorteados.

La semilla se divide en dos flujos independientes: uno para el calendario
de saltos y otro para el ruido, así `jump_schedule` puede recalcularse solo.
"""

from dataclasses import dataclass
from typing import Literal
import numpy as np
from apps.data.table import TimeSeriesTable
from config.exceptions import ConfigError
from config.exceptions import InputError

SynthKind = Literal['trend', 'sine', 'trend+sine', 'mutation']
SYNTH_KINDS = ('trend', 'sine', 'trend+sine', 'mutation')

SINE_PERIOD = 25.0
SINE_AMPLITUDE = 0.25
MIN_LENGTH = 8


@dataclass(frozen=True)
class JumpSchedule:
    times: np.ndarray
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return int(self.times.shape[0])


def _streams(seed: int):
    schedule, noise = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(schedule), np.random.default_rng(noise)


def jump_schedule(length: int, seed: int) -> JumpSchedule:
    """Instantes (en 1..T−1, sin repetir) y tamaños no nulos de los saltos."""
    rng, _ = _streams(seed)
    count = int(rng.integers(2, max(3, length // 40) + 1))
    times = np.sort(rng.choice(np.arange(1, length), size=min(count, length - 1), replace=False))
    sizes = rng.uniform(0.5, 1.5, size=times.shape[0]) * rng.choice([-1.0, 1.0], size=times.shape[0])
    return JumpSchedule(times=times, sizes=sizes)


def _base_signal(kind: str, length: int, seed: int) -> np.ndarray:
    t = np.arange(length, dtype=np.float64)
    ramp = np.linspace(0.0, 1.0, length)
    sine = SINE_AMPLITUDE * np.sin(2.0 * np.pi * t / SINE_PERIOD)
    if kind == 'trend':
        return ramp
    if kind == 'sine':
        return sine
    if kind == 'trend+sine':
        return ramp + sine
    schedule = jump_schedule(length, seed)
    steps = np.zeros(length)
    steps[schedule.times] = schedule.sizes
    return np.cumsum(steps)


def synth_series(kind: SynthKind, length: int, noise: float = 0.0, seed: int = 0,
                 aux_columns: int = 0) -> TimeSeriesTable:
    """Genera una tabla `target` (+ `aux_1..aux_k` correlacionadas con el objetivo).

    Raises:
        ConfigError: tipo desconocido o ruido negativo.
        InputError: longitud menor que 8.
    """
    if kind not in SYNTH_KINDS:
        raise ConfigError(f"Tipo sintético desconocido '{kind}'; use uno de {SYNTH_KINDS}")
    if length < MIN_LENGTH:
        raise InputError(f'La serie sintética necesita al menos {MIN_LENGTH} puntos, recibido {length}')
    if noise < 0:
        raise ConfigError(f'El ruido debe ser ≥ 0, recibido {noise}')

    _, noise_rng = _streams(seed)
    target = _base_signal(kind, length, seed)
    if noise > 0:
        target = target + noise_rng.normal(0.0, noise, size=length)

    columns = [target]
    t = np.arange(length, dtype=np.float64)
    for j in range(1, aux_columns + 1):
        # mitad objetivo, mitad senoide desfasada, más ruido propio
        phase = 2.0 * np.pi * j / (aux_columns + 1)
        aux = 0.5 * target + 0.5 * SINE_AMPLITUDE * np.sin(2.0 * np.pi * t / SINE_PERIOD + phase)
        if noise > 0:
            aux = aux + noise_rng.normal(0.0, noise, size=length)
        columns.append(aux)

    names = ('target',) + tuple(f'aux_{j}' for j in range(1, aux_columns + 1))
    return TimeSeriesTable(columns=names, values=np.column_stack(columns))
