# -*- coding: utf-8 -*-
"""Jerarquía de errores del proyecto.

Cada error lleva un `code` legible por máquinas y una `category` que
`config.error_handlers` traduce a un código de salida estable.
"""

INPUT = 'INPUT_ERROR'
CONFIG = 'CONFIG_ERROR'
NUMERIC = 'NUMERIC_FAILURE'


class ForecastError(Exception):
    """Error base de la librería."""
    code: str = 'FORECAST_ERROR'
    category: str = CONFIG

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details


class DimensionError(ForecastError, ValueError):
    code = 'DIMENSION_MISMATCH'


class ShapeError(ForecastError, ValueError):
    code = 'SHAPE_ERROR'


class BoundsError(ForecastError, IndexError):
    code = 'OUT_OF_BOUNDS'


class ParameterError(ForecastError, ValueError):
    code = 'INVALID_PARAMETER'


class ConfigError(ForecastError, ValueError):
    code = 'INVALID_CONFIG'


class UsageError(ForecastError, RuntimeError):
    code = 'USAGE_ERROR'


class InputError(ForecastError):
    code = 'INVALID_INPUT'
    category = INPUT


class WindowTooShortError(InputError, ValueError):
    code = 'WINDOW_TOO_SHORT'


class ParseError(InputError, ValueError):
    code = 'PARSE_ERROR'

    def __init__(self, message: str, row: int, column: str):
        super().__init__(message, row=row, column=column)
        self.row = row
        self.column = column


class NumericError(ForecastError, ArithmeticError):
    code = 'NON_FINITE'
    category = NUMERIC


class ConsistencyError(ForecastError, RuntimeError):
    code = 'INCONSISTENT_COVER'
    category = NUMERIC


class GradientCheckFailed(ForecastError):
    code = 'GRADCHECK_FAILED'
    category = NUMERIC

    def __init__(self, message: str, failing: list[str]):
        super().__init__(message, failing=failing)
        self.failing = failing
