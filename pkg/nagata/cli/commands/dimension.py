"""
Подкоманды dim и dim0
"""

import argparse

from nagata.cli.common import CommandOutcome, RunContext, add_space, label_list, labelled_sets, number, number_list
from nagata.core.errors import InvalidParameterError
from nagata.models.schemas import DimensionReport
from nagata.services import dimension, sphere_ext


def _dimension_json(report: DimensionReport) -> dict:
    return {
        "C": report.C,
        "mode": report.mode,
        "M": report.M,
        "scales": report.scales,
        "n_lower": report.n_lower,
        "n_upper": report.n_upper,
        "exact": report.exact,
        "per_scale": [
            {
                "r": row.r,
                "n_lower": row.n_lower,
                "n_upper": row.n_upper,
                "exact": row.exact,
                "witness": None if row.witness is None else [
                    labelled_sets(row.witness.space, [row.witness.cover.elements[s] for s in family])
                    for family in row.witness.families()
                ],
            }
            for row in report.per_scale
        ],
    }


def dim(context: RunContext) -> CommandOutcome:
    """Размерность по диапазону масштабов, режимы macro/micro и объединения"""
    args = context.args
    space = context.space
    exact = {"exact": True, "greedy": False}.get(args.search)

    if args.union_a or args.union_b:
        if not (args.union_a and args.union_b):
            raise InvalidParameterError("--union-a and --union-b go together")
        report = dimension.union_harness(space, args.union_a, args.union_b, args.C, args.scales, exact)
        return CommandOutcome(result={
            "part_a": _dimension_json(report.part_a),
            "part_b": _dimension_json(report.part_b),
            "union": _dimension_json(report.union),
            "agrees": report.agrees,
        })

    if args.mode == "full":
        report = dimension.scale_range_dimension(space, args.C, args.scales, "full", None, exact, args.max_n)
        return CommandOutcome(result=_dimension_json(report))

    functor = dimension.macro_dimension if args.mode == "macro" else dimension.micro_dimension
    report = functor(space, args.C, args.scales, args.M, exact)
    return CommandOutcome(
        result={
            "mode": report.mode,
            "M": report.M,
            "original": _dimension_json(report.original),
            "transformed": _dimension_json(report.transformed),
        },
        checks=report.checks,
    )


def dim0(context: RunContext) -> CommandOutcome:
    """Сертификат размерности 0 по цепным компонентам"""
    args = context.args
    space = context.space
    scales = args.scales or dimension.default_scales(space)
    report = sphere_ext.dim_zero_certificate(space, args.C, scales, args.strict)
    return CommandOutcome(
        result={
            "C": report.C,
            "strict": report.strict,
            "bounded": report.bounded,
            "scales": [
                {
                    "r": row.r,
                    "components": row.components,
                    "max_diameter": row.max_diameter,
                    "components_bounded": row.components_bounded,
                    "witness": None if row.witness is None else [space.labels[x] for x in row.witness],
                }
                for row in report.scales
            ],
        },
        checks=report.checks,
    )


def register(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("dim", parents=[parent], help="Размерность Нагаты-Ассуада по масштабам")
    add_space(parser)
    parser.add_argument("--C", type=number, required=True, help="Константа C")
    parser.add_argument("--scales", type=number_list, help="Масштабы через запятую (по умолчанию все расстояния)")
    parser.add_argument("--mode", choices=list(dimension.MODES), default="full")
    parser.add_argument("--M", type=number, help="Порог режимов macro и micro")
    parser.add_argument("--search", choices=["auto", "exact", "greedy"], default="auto")
    parser.add_argument("--max-n", dest="max_n", type=int, help="Наибольшая проверяемая размерность")
    parser.add_argument("--union-a", dest="union_a", type=label_list, help="Метки подпространства A")
    parser.add_argument("--union-b", dest="union_b", type=label_list, help="Метки подпространства B")
    parser.set_defaults(handler=dim)

    parser = subparsers.add_parser("dim0", parents=[parent], help="Сертификат размерности 0")
    add_space(parser)
    parser.add_argument("--C", type=number, required=True, help="Константа C > 1")
    parser.add_argument("--scales", type=number_list, help="Масштабы через запятую (по умолчанию все расстояния)")
    parser.add_argument("--strict", action="store_true", help="Строгие цепи: шаг меньше r")
    parser.set_defaults(handler=dim0)
