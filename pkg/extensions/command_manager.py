# -*- coding: utf-8 -*-
from typing import Any
from typing import Callable
from typing import Optional
from typing import List
from importlib import import_module
from loguru import logger
from config.settings import INSTALLED_MODULES
import typer


class Command:
    """
    Representa un subcomando que se registrará en la aplicación Typer.
    Encapsula la función manejadora, el nombre con el que se invoca
    y cualquier argumento adicional para `app.command`.
    """
    def __init__(self, handler: Callable[..., Any], name: str, *args: Any, **kwargs: Any):
        self.handler = handler
        self.name = name
        self.args = args
        self.kwargs = kwargs

    def register(self, app: typer.Typer):
        if not app:
            logger.warning('La instancia de la aplicación Typer no fue proporcionada. No se registrará el comando.')
            return

        if not self.handler:
            logger.warning(f"El manejador del comando '{self.name}' no fue proporcionado. No se registrará.")
            return

        app.command(self.name, *self.args, **self.kwargs)(self.handler)
        logger.debug(f'✅ Comando registrado: {self.name}')


def register_module(app: typer.Typer, modules: Optional[List[str]] = None):
    """
    Registra los subcomandos de cada módulo instalado en la aplicación.

    Args:
        app: La instancia de Typer a la que se añadirán los comandos.
        modules: módulos a recorrer; por defecto `INSTALLED_MODULES`.
    """
    modules = INSTALLED_MODULES if modules is None else modules

    if not modules:
        logger.info("No hay módulos listados en INSTALLED_MODULES. Omitiendo registro de comandos.")
        return
    for module in modules:
        try:
            # Construir el nombre completo del submódulo 'commands' (ej., 'apps.training.commands')
            mod = import_module(f'{module}.commands')

            commandpatterns: Optional[List[Command]] = getattr(mod, 'commandpatterns', None)

            if commandpatterns is None:
                logger.warning(f"⚠️ El módulo '{module}' no tiene un atributo 'commandpatterns'. Omitiendo...")
                continue

            if not isinstance(commandpatterns, list):
                logger.warning(
                    f"⚠️ 'commandpatterns' en '{module}' no es una lista "
                    f"(tipo: {type(commandpatterns).__name__}). Omitiendo."
                )
                continue

            for command in commandpatterns:
                command.register(app)
        except ModuleNotFoundError as mfe:
            logger.error(f'🚫 Module not found. {mfe}')
