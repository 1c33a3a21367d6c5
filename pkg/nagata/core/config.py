"""
Настройки Nagata Toolkit
"""

from fractions import Fraction

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Настройки, читаемые из переменных окружения NAGATA_* и файла .env"""

    model_config = SettingsConfigDict(
        env_prefix="NAGATA_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        frozen=True,
    )

    # Параллелизм
    THREADS: int = Field(1, ge=1, description="Максимальное число рабочих потоков")

    # Арифметика
    TOLERANCE: float = Field(1e-9, ge=0, description="Допуск сравнения для float-метрик")

    # Поиск разбиений
    EXACT_THRESHOLD: int = Field(12, ge=1, description="Максимальный размер пространства для точного перебора")
    MAX_NERVE_DIMENSION: int = Field(25, ge=0, description="Максимальная размерность симплекса нерва")

    # Конструкции
    DEFAULT_GROWTH: float = Field(4.0, gt=1, description="Множитель масштабов башни покрытий")
    DEFAULT_SHRINK: Fraction = Field(Fraction(1, 4), description="Доля r для окрестностей разбиения")

    # Воспроизводимость и отчёты
    SEED: int = Field(0, description="Зерно генераторов случайных пространств")
    REPORT_TIMING: bool = Field(False, description="Добавлять время выполнения в JSON отчёт")

    # Логирование
    LOG_LEVEL: str = Field("WARNING", description="Уровень логирования")
    LOG_FORMAT: str = Field("console", description="Формат логов (json, console)")

    @field_validator("DEFAULT_SHRINK", mode="before")
    @classmethod
    def parse_shrink(cls, v):
        """Доля задаётся как число или строка вида p/q"""
        return Fraction(str(v))

    @field_validator("DEFAULT_SHRINK")
    @classmethod
    def validate_shrink(cls, v):
        """Окрестности должны оставаться непересекающимися внутри семейства"""
        if not 0 < v < Fraction(1, 2):
            raise ValueError("Доля сжатия должна лежать в интервале (0, 1/2)")
        return v

    @field_validator("LOG_FORMAT")
    @classmethod
    def validate_log_format(cls, v):
        if v not in ("json", "console"):
            raise ValueError("Формат логов должен быть json или console")
        return v


settings = Settings()
