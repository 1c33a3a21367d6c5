"""
Подкоманды lebesgue и nerve
"""

import argparse

from nagata.cli.common import CommandOutcome, RunContext, add_space, labelled_sets, number, profile_json
from nagata.models.metric import NormTag
from nagata.models.schemas import CheckResult
from nagata.services import covers, dimension, nerve


def lebesgue(context: RunContext) -> CommandOutcome:
    """
    Профиль покрытия, переход от разбиения к покрытию Лебега
    или переход между формами определения размерности
    """
    args = context.args
    space = context.space

    if args.direction:
        obj = context.decomposition() if args.direction == "1->2" else context.cover()
        converted = dimension.characterization_convert(obj, args.direction, args.r, args.shrink)
        result = {"direction": converted.direction, "constants": converted.constants}
        if converted.cover is not None:
            result["cover"] = converted.cover.labelled()
        if converted.decomposition is not None:
            result["families"] = [
                labelled_sets(space, [converted.decomposition.cover.elements[s] for s in family])
                for family in converted.decomposition.families()
            ]
        return CommandOutcome(result=result)

    if args.decomposition:
        decomp = context.decomposition()
        report = covers.check_decomposition(decomp)
        conversion = covers.lebesgue_conversion(decomp, args.shrink)
        return CommandOutcome(
            result={
                "decomposition": {
                    "valid": report.is_valid,
                    "violating_pair": report.violating_pair,
                    "mesh": report.mesh,
                    "bound_ratio": report.bound_ratio,
                },
                "radius": conversion.radius,
                "cover": conversion.cover.labelled(),
                "profile": profile_json(space, conversion.profile),
            },
            checks=conversion.checks,
        )

    cover = context.cover()
    profile = covers.lebesgue_profile(cover)
    result = {"profile": profile_json(space, profile)}
    checks = []
    if args.r is not None:
        checks.append(CheckResult.at_least(
            "r_lebesgue", "cover is r-Lebesgue", profile.lebesgue, args.r
        ))
    return CommandOutcome(result=result, checks=checks)


def nerve_command(context: RunContext) -> CommandOutcome:
    """Нерв, барицентрические координаты и оценка Lip(φ)"""
    args = context.args
    cover = context.cover()
    norm = NormTag(args.norm or NormTag.L1)
    complex_ = nerve.build_nerve(cover)
    report = nerve.verify_barycentric_bound(cover, norm)
    weights = nerve.barycentric_weights(cover)
    return CommandOutcome(
        result={
            "nerve": nerve.nerve_to_json(complex_),
            "barycentric": {cover.space.labels[x]: list(w) for x, w in zip(cover.space.points, weights)},
            "measured_lip": report.measured_lip,
            "lebesgue": report.lebesgue,
            "multiplicity": report.multiplicity,
            "multiplicity_plus_one": report.multiplicity_plus_one,
            "stated_bound": report.stated_bound,
            "open_bound": report.open_bound,
            "witness": report.witness,
        },
        checks=report.checks,
    )


def register(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("lebesgue", parents=[parent], help="Числа Лебега, mesh и кратность")
    add_space(parser)
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--cover", help="Покрытие (JSON)")
    source.add_argument("--decomposition", help="Разбиение на семейства (JSON)")
    parser.add_argument("--shrink", type=number, help="Доля r для окрестностей")
    parser.add_argument("--r", type=number, help="Масштаб для проверки или для перехода 3->1")
    parser.add_argument("--direction", choices=["1->2", "2->3", "3->1"], help="Переход между формами определения")
    parser.set_defaults(handler=lebesgue)

    parser = subparsers.add_parser("nerve", parents=[parent], help="Нерв и барицентрическое отображение")
    add_space(parser)
    parser.add_argument("--cover", required=True, help="Покрытие (JSON)")
    parser.set_defaults(handler=nerve_command)
