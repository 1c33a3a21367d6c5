"""
Загрузка входных файлов: пространство (JSON или CSV облако точек),
покрытие, разбиение на семейства и частичное отображение
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd
import structlog

from nagata.core.errors import MalformedInputError
from nagata.core.numeric import parse_number
from nagata.models.cover import Cover, FamilyDecomposition
from nagata.models.maps import PartialMap, TargetKind, TargetSpec
from nagata.models.metric import FiniteMetricSpace, NormTag
from nagata.services import metric_core

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]


def file_digest(path: PathLike) -> str:
    """sha256 содержимого файла"""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _read_json(path: PathLike) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"{path} is not valid JSON: {e}")
    except OSError as e:
        raise MalformedInputError(f"Cannot read {path}: {e}")


def space_from_dict(data: Dict[str, Any]) -> FiniteMetricSpace:
    """{"labels": [...], "dist": [[...]]}"""
    if not isinstance(data, dict) or "labels" not in data or "dist" not in data:
        raise MalformedInputError('Space JSON needs "labels" and "dist"')
    return FiniteMetricSpace(labels=data["labels"], dist=data["dist"])


def space_from_csv(path: PathLike, norm: Optional[NormTag]) -> FiniteMetricSpace:
    """Облако точек: строка на точку, столбцы: координаты, необязательный столбец label"""
    if norm is None:
        raise MalformedInputError("Point cloud CSV needs --norm l1 or l2")
    try:
        frame = pd.read_csv(path, dtype=str)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise MalformedInputError(f"Cannot read point cloud {path}: {e}")
    labels = None
    if "label" in frame.columns:
        labels = frame.pop("label").astype(str).tolist()
    if frame.empty or frame.shape[1] == 0:
        raise MalformedInputError(f"Point cloud {path} has no coordinates")
    points = [[parse_number(c.strip()) for c in row] for row in frame.itertuples(index=False)]
    return metric_core.space_from_points(points, NormTag(norm), labels)


def load_space(path: PathLike, norm: Optional[str] = None) -> FiniteMetricSpace:
    """Пространство из JSON или CSV (по расширению)"""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        space = space_from_csv(path, NormTag(norm) if norm else None)
    else:
        space = space_from_dict(_read_json(path))
    logger.debug("Space loaded", path=str(path), points=space.size, exact=space.exact)
    return space


def cover_from_dict(space: FiniteMetricSpace, data: Dict[str, Any]) -> Cover:
    if not isinstance(data, dict) or "elements" not in data:
        raise MalformedInputError('Cover JSON needs "elements"')
    return Cover.from_labels(space, data["elements"])


def decomposition_from_dict(space: FiniteMetricSpace, data: Dict[str, Any]) -> FamilyDecomposition:
    """Покрытие с "families" (списки индексов элементов) и масштабом "r" """
    cover = cover_from_dict(space, data)
    if "families" not in data or "r" not in data:
        raise MalformedInputError('Decomposition JSON needs "families" and "r"')
    family_of = [None] * len(cover.elements)
    for f, members in enumerate(data["families"]):
        for s in members:
            if not 0 <= s < len(family_of) or family_of[s] is not None:
                raise MalformedInputError(f"Element {s} is missing or assigned twice")
            family_of[s] = f
    if any(f is None for f in family_of):
        raise MalformedInputError("Every element must belong to a family")
    return FamilyDecomposition(
        cover=cover,
        family_of=tuple(family_of),
        r=data["r"],
        k=len(data["families"]),
    )


def load_cover(space: FiniteMetricSpace, path: PathLike) -> Cover:
    return cover_from_dict(space, _read_json(path))


def load_decomposition(space: FiniteMetricSpace, path: PathLike) -> FamilyDecomposition:
    return decomposition_from_dict(space, _read_json(path))


def map_from_dict(space: FiniteMetricSpace, data: Dict[str, Any]) -> PartialMap:
    """{"domain": [...], "target": {...}, "values": {label: value}, "lambda": number}"""
    if not isinstance(data, dict) or "domain" not in data or "values" not in data:
        raise MalformedInputError('Map JSON needs "domain" and "values"')
    target = TargetSpec(**data.get("target", {"kind": "real"}))
    values = data["values"]
    domain = list(data["domain"])
    missing = [label for label in domain if label not in values]
    if missing:
        raise MalformedInputError("Map values are missing for domain points", {"points": missing})
    if target.kind == TargetKind.REAL:
        parsed = [parse_number(values[label]) for label in domain]
    elif target.kind == TargetKind.SPACE:
        raise MalformedInputError("Maps into finite spaces are not read from files")
    else:
        parsed = [tuple(parse_number(c) for c in values[label]) for label in domain]
    lam = data.get("lambda")
    return PartialMap(
        space=space,
        domain=tuple(space.indices(domain)),
        target=target,
        values=tuple(parsed),
        lam=None if lam is None else parse_number(lam),
    )


def load_map(space: FiniteMetricSpace, path: PathLike) -> PartialMap:
    return map_from_dict(space, _read_json(path))
