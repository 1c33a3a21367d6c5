"""
Подкоманды refine, lift и surgery
"""

import argparse

from nagata.cli.common import (
    CommandOutcome,
    RunContext,
    add_refinement_oracle,
    add_space,
    number,
    profile_json,
    refinement_oracle,
    window,
)
from nagata.core.errors import PreconditionError
from nagata.models.metric import NormTag
from nagata.models.schemas import RefinementResult
from nagata.services import sphere_ext
from nagata.services.oracles import ConstructiveSphereOracle, NearestPointSphereOracle


def _sphere_oracle(args: argparse.Namespace, space, m: int):
    norm = NormTag(args.norm or NormTag.L1)
    if args.sphere_oracle == "nearest_point":
        if args.sphere_C is None:
            raise PreconditionError("nearest_point oracle needs --sphere-C")
        return NearestPointSphereOracle(m, args.sphere_C, args.sphere_window, norm)
    return ConstructiveSphereOracle(refinement_oracle(args, space, m), m, norm)


def _refinement_outcome(result: RefinementResult, **extra) -> CommandOutcome:
    refinement = result.refinement
    return CommandOutcome(
        result={
            "cover": refinement.cover.labelled(),
            "parent": list(refinement.parent),
            "profile": profile_json(refinement.cover.space, result.profile),
            "t": result.t,
            "details": result.details,
            **extra,
        },
        checks=result.checks,
    )


def refine(context: RunContext) -> CommandOutcome:
    """Вписанное покрытие кратности m+1 из оракула продолжений в S^m"""
    args = context.args
    cover = context.cover()
    oracle = _sphere_oracle(args, context.space, len(cover.elements) - 2)
    result = sphere_ext.refinement_from_extension(oracle, cover, args.r, args.force)
    return _refinement_outcome(result, oracle=oracle.describe())


def lift(context: RunContext) -> CommandOutcome:
    """Покрытие из n+3 элементов → кратность n+2 через оракул уровня n"""
    args = context.args
    cover = context.cover()
    oracle = refinement_oracle(args, context.space, max(len(cover.elements) - 3, 0))
    result = sphere_ext.lift_refinement(oracle, cover, args.s, args.force)
    return _refinement_outcome(result, oracle=oracle.describe())


def surgery(context: RunContext) -> CommandOutcome:
    """Хирургия нерва для разбиения на n+2 семейства"""
    args = context.args
    decomp = context.decomposition()
    oracle = _sphere_oracle(args, context.space, decomp.k - 2)
    result = sphere_ext.nerve_surgery_refine(oracle, decomp, args.shrink, args.force)
    return CommandOutcome(
        result={
            "cover": result.cover.labelled(),
            "profile": profile_json(result.cover.space, result.profile),
            "details": result.details,
            "oracle": oracle.describe(),
        },
        checks=result.checks,
    )


def _add_sphere_oracle(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--sphere-oracle", dest="sphere_oracle",
        choices=["constructive", "nearest_point"], default="constructive",
        help="Оракул продолжений в сферу"
    )
    parser.add_argument("--sphere-C", dest="sphere_C", type=number, help="Заявленная константа nearest_point")
    parser.add_argument(
        "--sphere-window", dest="sphere_window", type=window,
        help="Окно λ оракула nearest_point: lo,hi"
    )


def register(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("refine", parents=[parent], help="Вписанное покрытие из продолжений в сферу")
    add_space(parser)
    parser.add_argument("--cover", required=True, help="Покрытие из m+2 элементов (JSON)")
    parser.add_argument("--r", type=number, required=True, help="Число Лебега покрытия r")
    _add_sphere_oracle(parser)
    add_refinement_oracle(parser)
    parser.set_defaults(handler=refine)

    parser = subparsers.add_parser("lift", parents=[parent], help="Подъём кратности оракула")
    add_space(parser)
    parser.add_argument("--cover", required=True, help="Покрытие из n+3 элементов (JSON)")
    parser.add_argument("--s", type=number, required=True, help="Число Лебега покрытия s")
    add_refinement_oracle(parser)
    parser.set_defaults(handler=lift)

    parser = subparsers.add_parser("surgery", parents=[parent], help="Хирургия нерва")
    add_space(parser)
    parser.add_argument("--decomposition", required=True, help="Разбиение на n+2 семейства (JSON)")
    _add_sphere_oracle(parser)
    add_refinement_oracle(parser)
    parser.set_defaults(handler=surgery)
