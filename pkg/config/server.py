import uuid
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator
from loguru import logger
from config.logger import start_logger


@contextmanager
def lifespan(command: str) -> Iterator[str]:
    """Ciclo de vida de un subcomando: logger en stderr, contexto de corrida y cierre.

    `run.log` se suma recién en `prepare_run_dir`, una vez validadas las entradas.

    Args:
        command: nombre del subcomando en ejecución.

    Yields:
        el identificador de la corrida.
    """
    # Iniciar Configuración de logs
    start_logger()
    run_id = uuid.uuid4().hex[:12]

    with logger.contextualize(run_id=run_id, command=command):
        logger.info(f'⏳ Iniciando {command} (run_id={run_id})')
        try:
            yield run_id
        except Exception:
            logger.info(f'🚫 {command} terminó con error')
            raise
        logger.info(f'✅ {command} finalizado')


def prepare_run_dir(out_dir: Path) -> Path:
    """Crea el directorio de la corrida y suma `run.log` a los destinos del logger.

    Los subcomandos lo llaman después de validar sus entradas, así una
    entrada inválida no deja archivos a medias.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    start_logger(out_dir)
    logger.info(f'📁 Directorio de la corrida: {out_dir}')
    return out_dir
