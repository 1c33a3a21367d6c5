"""
Подкоманды extend-mcshane, extend-simplex и extend-sphere
"""

import argparse

from nagata.cli.common import (
    CommandOutcome,
    RunContext,
    add_refinement_oracle,
    add_space,
    map_json,
    number,
    refinement_oracle,
)
from nagata.models.maps import ConvexBody
from nagata.models.schemas import ExtensionResult
from nagata.services import extension, sphere_ext


def _outcome(result: ExtensionResult, **extra) -> CommandOutcome:
    return CommandOutcome(
        result={
            "values": map_json(result.map),
            "lam_effective": result.lam_effective,
            "measured_lip": result.measured_lip,
            "bound": result.bound,
            "warnings": result.warnings,
            "details": result.details,
            **extra,
        },
        checks=result.checks,
    )


def extend_mcshane(context: RunContext) -> CommandOutcome:
    args = context.args
    f = context.map()
    extend = extension.whitney_extend if args.whitney else extension.mcshane_extend
    return _outcome(extend(f, args.lam, args.strict), formula="whitney" if args.whitney else "mcshane")


def extend_simplex(context: RunContext) -> CommandOutcome:
    args = context.args
    f = context.map()
    body = ConvexBody.box(*args.box) if args.box else ConvexBody.simplex()
    return _outcome(extension.extend_into_convex(f, args.lam, body, args.strict), body=body.kind)


def extend_sphere(context: RunContext) -> CommandOutcome:
    """Продолжение в ∂Δ^{m+1} через оракул вписанных покрытий"""
    args = context.args
    f = context.map()
    m = f.target.coords - 2
    oracle = refinement_oracle(args, context.space, m)
    result = sphere_ext.extension_from_refinement(oracle, f, args.lam, args.force, args.strict)
    return _outcome(result, oracle=oracle.describe())


def _add_map(parser: argparse.ArgumentParser) -> None:
    add_space(parser)
    parser.add_argument("--map", required=True, help="Частичное отображение (JSON)")
    parser.add_argument("--lam", type=number, help="Заявленная константа Липшица")
    parser.add_argument("--strict", action="store_true", help="Ошибка при заниженной константе")


def register(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("extend-mcshane", parents=[parent], help="Продолжение вещественной функции")
    _add_map(parser)
    parser.add_argument("--whitney", action="store_true", help="sup-форма вместо inf-формы")
    parser.set_defaults(handler=extend_mcshane)

    parser = subparsers.add_parser("extend-simplex", parents=[parent], help="Продолжение в симплекс или куб")
    _add_map(parser)
    parser.add_argument("--box", type=number, nargs=2, metavar=("LOWER", "UPPER"), help="Куб [lower, upper]^n")
    parser.set_defaults(handler=extend_simplex)

    parser = subparsers.add_parser("extend-sphere", parents=[parent], help="Продолжение в границу симплекса")
    _add_map(parser)
    add_refinement_oracle(parser)
    parser.set_defaults(handler=extend_sphere)
