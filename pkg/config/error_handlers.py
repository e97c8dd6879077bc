# -*- coding: utf-8 -*-
"""Módulo con funciones para manejar las excepciones que terminan un subcomando.

Cada manejador registra el incidente con loguru, imprime una única línea
parseable en stderr (`error=<CATEGORÍA> code=<CÓDIGO> detail="..."`) y
devuelve el código de salida del proceso. Los códigos son estables:

    0 éxito, 1 error inesperado, 3 error de entrada,
    4 error de configuración, 5 falla numérica.
"""

import sys
from typing import Callable
from typing import Dict
from typing import Type
from loguru import logger
from pydantic import ValidationError
from config import exceptions as exc_types

EXIT_SUCCESS = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 3
EXIT_CONFIG = 4
EXIT_NUMERIC = 5


def _emit(category: str, code: str, detail: str) -> None:
    detail = ' '.join(str(detail).split()).replace('"', "'")
    print(f'error={category} code={code} detail="{detail}"', file=sys.stderr)


def input_error(exc: Exception) -> int:
    """Datos ilegibles o insuficientes: archivo faltante, celdas no numéricas, series cortas.

    Args:
        exc (Exception): la excepción generada

    Returns:
        el código de salida `EXIT_INPUT`
    """
    code = getattr(exc, 'code', 'INVALID_INPUT')
    logger.warning(f"📂 Entrada inválida: {exc}")
    _emit(exc_types.INPUT, code, str(exc))
    return EXIT_INPUT


def config_error(exc: Exception) -> int:
    """Configuración inconsistente con los datos o con los invariantes del modelo.

    Args:
        exc (Exception): la excepción generada

    Returns:
        el código de salida `EXIT_CONFIG`
    """
    code = getattr(exc, 'code', 'INVALID_CONFIG')
    if isinstance(exc, ValidationError):
        detail = '; '.join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        )
    else:
        detail = str(exc)
    logger.warning(f"⚙️ Configuración inválida: {detail}")
    _emit(exc_types.CONFIG, code, detail)
    return EXIT_CONFIG


def numeric_failure(exc: Exception) -> int:
    """Pérdida no finita, cobertura inconsistente o gradientes que no pasan la verificación.

    Args:
        exc (Exception): la excepción generada

    Returns:
        el código de salida `EXIT_NUMERIC`
    """
    code = getattr(exc, 'code', 'NON_FINITE')
    logger.error(f"🔥 Falla numérica: {exc}")
    _emit(exc_types.NUMERIC, code, str(exc))
    return EXIT_NUMERIC


def internal_error(exc: Exception) -> int:
    """Cualquier otra cosa. Se registra con traza completa."""
    logger.opt(exception=exc).error(f"💀 Error inesperado: {type(exc).__name__}: {exc}")
    _emit('INTERNAL_ERROR', 'UNEXPECTED', f'{type(exc).__name__}: {exc}')
    return EXIT_INTERNAL


def _by_category(exc: Exception) -> int:
    handler = CATEGORY_HANDLERS.get(getattr(exc, 'category', None), internal_error)
    return handler(exc)


CATEGORY_HANDLERS: Dict[str, Callable[[Exception], int]] = {
    exc_types.INPUT: input_error,
    exc_types.CONFIG: config_error,
    exc_types.NUMERIC: numeric_failure,
}

# Equivalente a `app.add_exception_handler(...)`: la resolución recorre el MRO
# de la excepción, así que el tipo más específico gana.
EXCEPTION_HANDLERS: Dict[Type[BaseException], Callable[[Exception], int]] = {
    exc_types.ForecastError: _by_category,
    ValidationError: config_error,
    FileNotFoundError: input_error,
    IsADirectoryError: input_error,
    PermissionError: input_error,
    OSError: input_error,
}


def dispatch(exc: Exception) -> int:
    """Resuelve el manejador de `exc` y devuelve el código de salida."""
    for klass in type(exc).__mro__:
        handler = EXCEPTION_HANDLERS.get(klass)
        if handler is not None:
            return handler(exc)
    return internal_error(exc)
