"""
Общая часть CLI: аргументы, загрузка входов, сериализация и отчёт
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import structlog
from pydantic import BaseModel

from nagata.core.config import settings
from nagata.core.errors import MalformedInputError
from nagata.core.numeric import parse_number, to_json_number
from nagata.models.cover import Cover, FamilyDecomposition, LebesgueProfile
from nagata.models.maps import PartialMap
from nagata.models.metric import FiniteMetricSpace
from nagata.models.schemas import CheckResult, RunReport
from nagata.services import loaders
from nagata.services.oracles import build_refinement_oracle

logger = structlog.get_logger(__name__)


@dataclass
class CommandOutcome:
    """Результат подкоманды: данные для поля result и проверки"""
    result: Dict[str, Any]
    checks: List[CheckResult] = field(default_factory=list)


class RunContext:
    """Входные файлы запуска с ленивой загрузкой и sha256 каждого файла"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.digests: Dict[str, str] = {}
        self._space: Optional[FiniteMetricSpace] = None

    def _path(self, name: str) -> Path:
        value = getattr(self.args, name, None)
        if value is None:
            raise MalformedInputError(f"--{name.replace('_', '-')} is required for {self.args.command}")
        path = Path(value)
        self.digests[name] = "sha256:" + loaders.file_digest(path) if path.exists() else "missing"
        return path

    @property
    def space(self) -> FiniteMetricSpace:
        if self._space is None:
            self._space = loaders.load_space(self._path("space"), getattr(self.args, "norm", None))
        return self._space

    def cover(self) -> Cover:
        return loaders.load_cover(self.space, self._path("cover"))

    def decomposition(self) -> FamilyDecomposition:
        return loaders.load_decomposition(self.space, self._path("decomposition"))

    def map(self) -> PartialMap:
        return loaders.load_map(self.space, self._path("map"))


def number(text: str) -> Any:
    """Тип argparse: целые, десятичные и p/q дают Fraction"""
    try:
        return parse_number(text)
    except MalformedInputError as e:
        raise argparse.ArgumentTypeError(e.message)


def number_list(text: str) -> List[Any]:
    """Список чисел через запятую: "1,2,5/2" """
    try:
        return [parse_number(part) for part in text.split(",") if part.strip()]
    except MalformedInputError as e:
        raise argparse.ArgumentTypeError(e.message)


def label_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def common_parser() -> argparse.ArgumentParser:
    """Флаги, общие для всех подкоманд"""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--seed", type=int, default=settings.SEED, help="Зерно генераторов")
    parser.add_argument("--exact", action="store_true", help="Числа в отчёте как строки p/q")
    parser.add_argument("--json-out", dest="json_out", type=Path, help="Копия JSON отчёта в файл")
    parser.add_argument("--force", action="store_true", help="Пропустить проверки окон, не принуждать зависящие от них оценки")
    parser.add_argument("--log-level", dest="log_level", default=settings.LOG_LEVEL, help="Уровень логирования")
    parser.add_argument("--log-format", dest="log_format", default=settings.LOG_FORMAT, choices=["json", "console"])
    return parser


def add_space(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--space", required=True, help="Пространство: JSON или CSV облако точек")
    parser.add_argument("--norm", choices=["l1", "l2"], help="Метрика облака точек и симплекса")


def to_jsonable(value: Any, exact: bool) -> Any:
    """Рекурсивная сериализация чисел, множеств и моделей"""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (Fraction, int, float)):
        return to_json_number(value, exact)
    if isinstance(value, np.generic):
        return to_jsonable(value.item(), exact)
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist(), exact)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v, exact) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return [to_jsonable(v, exact) for v in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v, exact) for v in value]
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump(), exact)
    return str(value)


def check_json(check: CheckResult) -> Dict[str, Any]:
    return {
        "name": check.name,
        "claim": check.claim,
        "measured": check.measured,
        "bound": check.bound,
        "holds": check.holds,
        "enforced": check.enforced,
        "witness": check.witness,
    }


def profile_json(space: FiniteMetricSpace, profile: LebesgueProfile) -> Dict[str, Any]:
    return {
        "lebesgue": profile.lebesgue,
        "mesh": profile.mesh,
        "multiplicity": profile.multiplicity,
        "multiplicity_plus_one": profile.multiplicity_plus_one,
        "local": dict(zip(space.labels, profile.local)),
    }


def map_json(g: PartialMap) -> Dict[str, Any]:
    return {g.space.labels[x]: value for x, value in g.items()}


def labelled_sets(space: FiniteMetricSpace, sets) -> List[List[str]]:
    return [[space.labels[x] for x in sorted(s)] for s in sets]


def build_report(
    args: argparse.Namespace,
    argv: List[str],
    context: RunContext,
    outcome: CommandOutcome,
    started: float
) -> RunReport:
    exact = args.exact
    return RunReport(
        command=args.command,
        argv=list(argv),
        input_digests=dict(sorted(context.digests.items())),
        seed=args.seed,
        exact=exact,
        passed=not any(check.failed for check in outcome.checks),
        checks=[to_jsonable(check_json(c), exact) for c in outcome.checks],
        result=to_jsonable(outcome.result, exact),
        wall_time=round(time.perf_counter() - started, 6) if settings.REPORT_TIMING else None,
    )


def emit(report: RunReport, json_out: Optional[Path] = None) -> None:
    """JSON в stdout (и в файл), краткая сводка в stderr"""
    payload = report.model_dump()
    if payload["wall_time"] is None:
        del payload["wall_time"]
    text = json.dumps(payload, ensure_ascii=False, indent=2)
    sys.stdout.write(text + "\n")
    if json_out is not None:
        json_out.write_text(text + "\n", encoding="utf-8")
    failed = [c["name"] for c in report.checks if c["enforced"] and not c["holds"]]
    summary = f"{report.command}: {len(report.checks)} checks, {len(failed)} failed"
    if failed:
        summary += " (" + ", ".join(failed[:5]) + (", ..." if len(failed) > 5 else "") + ")"
    sys.stderr.write(summary + "\n")


def window(text: str) -> tuple:
    """Окно "lo,hi", например "0,5" или "5,inf" """
    values = number_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError("Window needs two numbers: lo,hi")
    return tuple(values)


def add_refinement_oracle(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--refinement-oracle", dest="refinement_oracle",
        choices=["fixed_cover", "decomposition", "shrinking"], default="fixed_cover",
        help="Оракул вписанных покрытий"
    )
    parser.add_argument("--oracle-C", dest="oracle_C", type=number, default=Fraction(2), help="C оракула decomposition")
    parser.add_argument("--oracle-t", dest="oracle_t", type=number, default=Fraction(1, 16), help="t оракула shrinking")
    parser.add_argument("--oracle-upper", dest="oracle_upper", type=number, help="Верхняя граница окна fixed_cover")
    parser.add_argument("--window", type=window, help="Окно масштабов оракула: lo,hi")
    parser.add_argument("--shrink", type=number, help="Доля r для окрестностей")


def refinement_oracle(args: argparse.Namespace, space: FiniteMetricSpace, m: int):
    """Оракул уровня m по флагам командной строки"""
    return build_refinement_oracle(
        args.refinement_oracle,
        space,
        C=args.oracle_C,
        n=m,
        shrink=args.shrink,
        multiplicity=m + 1,
        t=args.oracle_t,
        upper=args.oracle_upper,
        window=args.window,
    )
