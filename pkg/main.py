# -*- coding: utf-8 -*-
from dotenv import load_dotenv
import typer

# Iniciar variables de entornos
load_dotenv()

from config.logger import start_logger
from extensions.command_manager import register_module

# Iniciar la app de Typer
app = typer.Typer(
    name='forecast',
    help='🏗️ Pronóstico de series de tiempo con fusión de atención diferencial: '
         'entrenamiento, predicción, evaluación, verificación de gradientes y datos sintéticos.',
    add_completion=False,
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)

start_logger()

# register commands
register_module(app)


if __name__ == '__main__':
    app()
