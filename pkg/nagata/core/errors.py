"""
Исключения Nagata Toolkit
"""

from typing import Any, Dict, Optional


class NagataError(Exception):
    """Базовое исключение библиотеки"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class MalformedInputError(NagataError):
    """Структурная ошибка входных данных (таблица не квадратная, неизвестные метки и т.п.)"""


class InvalidParameterError(NagataError):
    """Недопустимое значение параметра (ε <= 0, r <= 0, доля сжатия вне диапазона)"""


class LabelMismatchError(NagataError):
    """Метрики заданы на разных множествах меток"""


class CoverIndexError(NagataError):
    """Индекс элемента покрытия вне диапазона"""


class NerveTooLargeError(NagataError):
    """Нерв содержит симплекс размерности выше допустимой"""


class OutsideBodyError(NagataError):
    """Значения отображения лежат вне выпуклого тела"""


class DishonestLipschitzError(NagataError):
    """Заявленная константа Липшица меньше измеренной (строгий режим)"""


class PreconditionError(NagataError):
    """Нарушено условие применимости конструкции (окно масштабов, число Лебега)"""


class OracleRefusalError(NagataError):
    """Оракул отказался вернуть результат внутри своего окна"""


class TowerConstructionError(NagataError):
    """Не удалось построить башню покрытий"""


class BoundViolationError(NagataError):
    """Обязательная проверка неравенства не выполнена"""
