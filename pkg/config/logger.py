import sys
from pathlib import Path
from typing import Optional
from loguru import logger
from config.settings import DEFAULT_LOGGER
from config.settings import LOG_LEVEL
from config.settings import RUN_FILES


def start_logger(sink_dir: Optional[Path] = None):
    is_default = DEFAULT_LOGGER == 'default'
    # Formato de log
    format_log_default = '🚀[{time:HH:mm:ss}]<level>{level} »</level> <level>{message}</level> {name}@{function} at {line}'
    format_log_cloud = '<level>{level}:</level> {message}'
    format_log_file = '{time:YYYY-MM-DD HH:mm:ss.SSS} {level}: {message}'

    handlers = [
        {
            'colorize': is_default,
            'sink': sys.stderr,
            'level': LOG_LEVEL,
            'format': format_log_default if is_default else format_log_cloud
        }
    ]

    # La corrida deja su propio log junto a los artefactos
    if sink_dir is not None:
        handlers.append({
            'colorize': False,
            'sink': Path(sink_dir) / RUN_FILES['LOG'],
            'level': LOG_LEVEL,
            'format': format_log_file,
            'mode': 'a',
        })

    logger.configure(handlers=handlers)
    logger.debug("🛠️ Logger inicializado correctamente.")
