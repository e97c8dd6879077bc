# -*- coding: utf-8 -*-
"""Oráculo de diferencias finitas para los gradientes analíticos."""

from dataclasses import dataclass
from dataclasses import field
from typing import Callable
from typing import Dict
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Union
import numpy as np
from loguru import logger
from apps.autodiff.tensor import Graph
from apps.autodiff.tensor import Tensor
from apps.autodiff.tensor import backward
from config.exceptions import ParameterError
from config.settings import GRADCHECK_STEP
from config.settings import GRADCHECK_TOLERANCE


@dataclass
class GradCheckEntry:
    name: str
    shape: tuple
    checked: int
    size: int
    max_relative_error: float
    worst_index: Optional[tuple]
    passed: bool


@dataclass
class GradCheckReport:
    tolerance: float
    step: float
    max_entries: Optional[int] = None
    entries: List[GradCheckEntry] = field(default_factory=list)

    @property
    def max_relative_error(self) -> float:
        return max((e.max_relative_error for e in self.entries), default=0.0)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failing(self) -> List[str]:
        return [e.name for e in self.entries if not e.passed]

    @property
    def checked(self) -> int:
        return sum(e.checked for e in self.entries)

    @property
    def size(self) -> int:
        return sum(e.size for e in self.entries)

    @property
    def exhaustive(self) -> bool:
        """Falso si alguna entrada quedó sin verificar por el muestreo."""
        return self.checked == self.size

    def as_dict(self) -> Dict:
        return {
            'tolerance': self.tolerance,
            'step': self.step,
            'max_relative_error': self.max_relative_error,
            'passed': self.passed,
            'max_entries': self.max_entries,
            'entries_checked': self.checked,
            'entries_total': self.size,
            'exhaustive': self.exhaustive,
            'parameters': {
                e.name: {
                    'shape': list(e.shape),
                    'checked': e.checked,
                    'size': e.size,
                    'max_relative_error': e.max_relative_error,
                    'worst_index': list(e.worst_index) if e.worst_index is not None else None,
                    'passed': e.passed,
                }
                for e in self.entries
            },
        }


def relative_error(analytic: float, numeric: float) -> float:
    """|g_a − g_n| / max(1, |g_a|, |g_n|)."""
    return abs(analytic - numeric) / max(1.0, abs(analytic), abs(numeric))


def _as_mapping(params: Union[Mapping[str, Tensor], Sequence[Tensor]]) -> Dict[str, Tensor]:
    """Nombre → tensor; un nombre repetido o un tensor listado dos veces es un error."""
    if isinstance(params, Mapping):
        named = dict(params)
    else:
        named = {}
        for i, p in enumerate(params):
            name = p.name or f'param_{i}'
            if name in named:
                raise ParameterError(f"Nombre de tensor repetido en la verificación de gradientes: '{name}'")
            named[name] = p
    if len({id(p) for p in named.values()}) != len(named):
        raise ParameterError('Un mismo tensor aparece con dos nombres en la verificación de gradientes')
    return named


def grad_check(
    f: Callable[[], Tensor],
    params: Union[Mapping[str, Tensor], Sequence[Tensor]],
    h: float = GRADCHECK_STEP,
    tol: float = GRADCHECK_TOLERANCE,
    max_entries: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> GradCheckReport:
    """Compara el gradiente analítico con diferencias centrales.

    Args:
        f: función determinista sin argumentos que devuelve una pérdida 1×1.
        params: tensores a verificar, con nombre o en secuencia.
        h: paso de la diferencia central (f(θ+h) − f(θ−h)) / 2h.
        tol: tolerancia relativa.
        max_entries: si se indica, verifica sólo esa cantidad de entradas por tensor,
            elegidas con `rng`; por defecto verifica todas.
        rng: generador para el muestreo de entradas.

    Returns:
        GradCheckReport: una entrada por tensor. Los fallos son entradas del reporte,
        nunca excepciones.
    """
    named = _as_mapping(params)
    for p in named.values():
        # las perturbaciones se escriben sobre una vista plana
        p.data = np.ascontiguousarray(p.data)
        p.zero_grad()

    with Graph():
        loss = f()
    backward(loss)
    analytic = {name: (p.grad.copy() if p.grad is not None else np.zeros_like(p.data)) for name, p in named.items()}

    rng = rng if rng is not None else np.random.default_rng(0)
    report = GradCheckReport(tolerance=tol, step=h, max_entries=max_entries)
    for name, p in named.items():
        flat = p.data.reshape(-1)
        if max_entries is not None and flat.size > max_entries:
            indices = np.sort(rng.choice(flat.size, size=max_entries, replace=False))
        else:
            indices = np.arange(flat.size)

        worst, worst_index = 0.0, None
        grad_flat = analytic[name].reshape(-1)
        for idx in indices:
            original = flat[idx]
            flat[idx] = original + h
            f_plus = f().item()
            flat[idx] = original - h
            f_minus = f().item()
            flat[idx] = original
            numeric = (f_plus - f_minus) / (2.0 * h)
            err = relative_error(float(grad_flat[idx]), numeric)
            if err > worst or worst_index is None:
                worst, worst_index = err, np.unravel_index(idx, p.shape)
        entry = GradCheckEntry(
            name=name,
            shape=p.shape,
            checked=len(indices),
            size=int(flat.size),
            max_relative_error=worst,
            worst_index=tuple(int(i) for i in worst_index) if worst_index is not None else None,
            passed=worst < tol,
        )
        report.entries.append(entry)
        if not entry.passed:
            logger.warning(f'⚠️ Gradiente de {name} fuera de tolerancia: {worst:.3e} ≥ {tol:.1e}')

    for p in named.values():
        p.zero_grad()
    return report
