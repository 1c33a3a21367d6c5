"""
Настройка логирования для Nagata Toolkit
"""

import logging
import sys
from typing import Any, Dict, Optional, TextIO

import structlog
from structlog.stdlib import LoggerFactory


def setup_logging(
    log_level: str = "INFO",
    log_format: str = "json",
    stream: Optional[TextIO] = None,
    log_file: Optional[str] = None
) -> None:
    """
    Настройка структурированного логирования

    Args:
        log_level: Уровень логирования (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_format: Формат логов (json, console)
        stream: Поток вывода (CLI передаёт stderr, stdout занят JSON отчётом)
        log_file: Путь к файлу логов, если нужна запись в файл
    """

    logging.basicConfig(
        format="%(message)s",
        stream=stream or sys.stderr,
        level=getattr(logging, log_level.upper()),
        force=True
    )

    processors = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    if log_format == "json":
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))

    structlog.configure(
        processors=processors,
        context_class=dict,
        logger_factory=LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(getattr(logging, log_level.upper()))
        logging.getLogger().addHandler(file_handler)


def log_check(logger: structlog.BoundLogger, check: Any, **kwargs: Any) -> None:
    """
    Логирование проверки неравенства

    Проваленная обязательная проверка пишется с уровнем warning,
    остальные с уровнем debug.

    Args:
        logger: Логгер
        check: Объект CheckResult
        **kwargs: Дополнительные поля
    """
    log_data = {
        "event": "bound_check",
        "check": check.name,
        "claim": check.claim,
        "measured": str(check.measured),
        "bound": str(check.bound),
        "holds": check.holds,
        **kwargs
    }

    if not check.holds and check.enforced:
        logger.warning(**log_data)
    else:
        logger.debug(**log_data)


def log_error(
    logger: structlog.BoundLogger,
    error: Exception,
    context: Optional[Dict[str, Any]] = None,
    **kwargs: Any
) -> None:
    """
    Логирование ошибок

    Args:
        logger: Логгер
        error: Объект исключения
        context: Контекст ошибки
        **kwargs: Дополнительные поля для логирования
    """
    log_data = {
        "event": "error",
        "error_type": type(error).__name__,
        "error_message": str(error),
        **kwargs
    }

    if context:
        log_data["context"] = context

    logger.error(**log_data)


def log_pipeline_event(
    logger: structlog.BoundLogger,
    event: str,
    **kwargs: Any
) -> None:
    """
    Логирование этапов конвейеров (построение башни, хирургия нерва и т.п.)

    Args:
        logger: Логгер
        event: Название события
        **kwargs: Дополнительные поля события
    """
    logger.info(event=event, **kwargs)
