"""
Точная и приближённая арифметика

Рациональные значения хранятся как Fraction, остальные как float.
Сравнения в float-режиме идут с допуском settings.TOLERANCE,
в точном режиме допуск равен нулю.
"""

import math
from fractions import Fraction
from typing import Annotated, Any, Iterable, Sequence, Union

import numpy as np
from pydantic import BeforeValidator

from nagata.core.config import settings
from nagata.core.errors import MalformedInputError

Number = Union[Fraction, float]

INF = math.inf


def parse_number(value: Any) -> Number:
    """Число из JSON: int и строки "p/q" дают Fraction, float остаётся float"""
    if isinstance(value, bool):
        raise MalformedInputError(f"Boolean is not a number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity"):
            return INF
        try:
            return Fraction(text)
        except ValueError:
            raise MalformedInputError(f"Cannot parse number: {value!r}")
    raise MalformedInputError(f"Unsupported number type: {type(value).__name__}")


def all_exact(values: Iterable[Any]) -> bool:
    return all(isinstance(v, Fraction) for v in values)


def tolerance_for(*values: Any) -> Number:
    """Допуск сравнения: точный ноль для точных значений, τ если есть float"""
    if all(isinstance(v, (Fraction, int)) or v == INF for v in values):
        return Fraction(0)
    return settings.TOLERANCE


def leq(a: Number, b: Number, tol: float = None) -> bool:
    """a <= b с учётом допуска"""
    if tol is None:
        tol = tolerance_for(a, b)
    if b == INF:
        return True
    if a == INF:
        return False
    if not tol:
        return a <= b
    return a <= b + tol


def lt(a: Number, b: Number, tol: float = None) -> bool:
    """Строгое a < b; в float-режиме равенство в пределах допуска не считается меньше"""
    if tol is None:
        tol = tolerance_for(a, b)
    if a == INF:
        return False
    if b == INF:
        return True
    if not tol:
        return a < b
    return a < b - tol


def is_zero(value: Number, tol: float = None) -> bool:
    if tol is None:
        tol = tolerance_for(value)
    return abs(value) <= tol


def safe_ratio(numerator: Number, denominator: Number) -> Number:
    """Отношение с соглашением x/inf = 0 и x/0 = inf"""
    if denominator == INF:
        return Fraction(0) if isinstance(numerator, (Fraction, int)) else 0.0
    if denominator == 0:
        return INF
    return numerator / denominator


def to_json_number(value: Any, exact: bool = True) -> Any:
    """Сериализация: Fraction -> "p/q" (точный режим) или float, inf -> "inf" """
    if value is None:
        return None
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, Fraction):
        if not exact:
            return float(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (int, float)):
        return value
    return value


def as_array(values: Sequence[Any]) -> np.ndarray:
    """numpy массив: dtype=object для точных значений, float64 иначе"""
    flat = list(np.asarray(values, dtype=object).ravel())
    if all_exact(flat):
        return np.asarray(values, dtype=object)
    return np.asarray(values, dtype=object).astype(float)


def sqrt(value: Number) -> Number:
    """Квадратный корень; точный для квадратов рациональных чисел"""
    if isinstance(value, Fraction) and value >= 0:
        num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
        if num * num == value.numerator and den * den == value.denominator:
            return Fraction(num, den)
    return math.sqrt(float(value))


# Числовое поле pydantic моделей: int и "p/q" приводятся к Fraction
NumberValue = Annotated[Any, BeforeValidator(parse_number)]
