# -*- coding: utf-8 -*-
import os

# Define el tipo de logger a utilizar en la aplicación.
# 'default' para un logger con formato estándar y colores (útil en desarrollo local)
# o 'cloud' para un formato plano, apto para recolectores de logs.
DEFAULT_LOGGER: str = os.environ.get('DEFAULT_LOGGER', 'default')

# Nivel mínimo de los mensajes que se emiten.
LOG_LEVEL: str = os.environ.get('LOG_LEVEL', 'INFO').upper()

# Directorio raíz donde se escriben las corridas cuando no se indica --out.
DEFAULT_OUTPUT_DIR: str = os.environ.get('DEFAULT_OUTPUT_DIR', 'runs')

# Lista los módulos instalados que exponen subcomandos (cada uno con su `commands.py`).
INSTALLED_MODULES: list[str] = [
    'apps.training',
    'apps.evaluation',
    'apps.gradcheck',
    'apps.data',
]

# Verificación de gradientes por diferencias centrales.
GRADCHECK_TOLERANCE: float = float(os.environ.get('GRADCHECK_TOLERANCE', '1e-4'))
GRADCHECK_STEP: float = float(os.environ.get('GRADCHECK_STEP', '1e-5'))

# Nombres fijos de los archivos dentro del directorio de una corrida.
RUN_FILES = {
    'CONFIG': 'config.yaml',
    'CHECKPOINT': 'checkpoint.json',
    'LOSS_HISTORY': 'loss_history.csv',
    'PREDICTIONS': 'predictions.csv',
    'METRICS': 'metrics.json',
    'GRADCHECK': 'gradcheck.json',
    'LOG': 'run.log',
}
