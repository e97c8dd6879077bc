# -*- coding: utf-8 -*-
from pathlib import Path
from typing import Any
from typing import Callable
from typing import Dict
from typing import Optional
import typer
from config.error_handlers import EXIT_SUCCESS
from config.error_handlers import dispatch
from config.logger import start_logger
from config.run_config import RunConfig
from config.run_config import resolve_run_config
from config.server import lifespan


def run_command(command: str, action: Callable[[RunConfig], Any], config_path: Optional[Path] = None,
                overrides: Optional[Dict[str, Any]] = None) -> None:
    """Resuelve la configuración, ejecuta `action` dentro del ciclo de vida y traduce errores a códigos de salida.

    Raises:
        typer.Exit: con el código del manejador cuando algo falla.
    """
    code = EXIT_SUCCESS
    try:
        with lifespan(command):
            action(resolve_run_config(config_path, overrides))
    except Exception as exc:
        code = dispatch(exc)
    finally:
        # devuelve el logger a stderr y suelta run.log
        start_logger()
    if code != EXIT_SUCCESS:
        raise typer.Exit(code=code)
