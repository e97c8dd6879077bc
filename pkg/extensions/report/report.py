# -*- coding: utf-8 -*-
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Optional
import orjson
from loguru import logger

STATUS_OK = 'ok'
STATUS_FAILED = 'failed'

_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_NON_STR_KEYS


class Report:
    """
    Sobre común de los reportes estructurados que escribe la CLI
    (métricas, verificación de gradientes): `status`, `message`, `data`, `errors`.
    """
    @staticmethod
    def content(
        status: str = STATUS_OK,
        message: str = None,
        data: Any = None,
        errors: Optional[Dict[str, Any]] = None
    ) -> Dict[str, Any]:
        if not message:
            message = ''

        content = {
            'status': status,
            'message': message
        }

        if data:
            content['data'] = data

        if errors:
            content['errors'] = errors

        return content

    @staticmethod
    def write(path: Path, **kwargs: Any) -> Path:
        path = Path(path)
        path.write_bytes(orjson.dumps(Report.content(**kwargs), option=_OPTIONS))
        logger.info(f'📝 Reporte escrito: {path}')
        return path

    @staticmethod
    def read(path: Path) -> Dict[str, Any]:
        return orjson.loads(Path(path).read_bytes())
