"""
Подкоманда hyperbolize
"""

import argparse

from nagata.cli.common import CommandOutcome, RunContext, add_space, number, number_list
from nagata.services import hyperbolic


def hyperbolize(context: RunContext) -> CommandOutcome:
    """Башня покрытий, d_h, четырёхточечное условие и крупномасштабная эквивалентность"""
    args = context.args
    space = context.space
    tower_report = hyperbolic.build_tower(space, args.n, args.C, args.growth, args.shrink)
    tower = tower_report.tower
    dh = hyperbolic.dh_metric(tower)

    if args.all_basepoints:
        certificates = hyperbolic.hyperbolicity_all_basepoints(dh)
    else:
        certificates = [hyperbolic.hyperbolicity_certificate(dh, args.basepoint)]
    coarse = hyperbolic.coarse_equivalence_profile(space, dh, tower)
    scale_covers = hyperbolic.dh_scale_covers(tower, dh, args.scales)

    checks = list(tower_report.checks)
    for certificate in certificates:
        label = dh.labels[certificate.basepoint]
        checks.extend(c.model_copy(update={"name": f"{c.name}@{label}"}) for c in certificate.checks)
    checks.extend(coarse.checks)
    checks.extend(scale_covers.checks)

    return CommandOutcome(
        result={
            "tower": {
                "height": tower.height,
                "scales": list(tower.scales),
                "dropped_scales": tower_report.dropped_scales,
                "levels": [
                    {"cover": level.labelled(), "mesh": profile.mesh, "lebesgue": profile.lebesgue,
                     "multiplicity": profile.multiplicity}
                    for level, profile in zip(tower.levels, tower_report.profiles)
                ],
            },
            "dh": {"labels": list(dh.labels), "dist": [list(row) for row in dh.dist]},
            "delta_measured": max(c.delta_measured for c in certificates),
            "side_defect": max(c.side_defect for c in certificates),
            "certificates": [
                {
                    "basepoint": dh.labels[c.basepoint],
                    "delta_measured": c.delta_measured,
                    "side_defect": c.side_defect,
                    "boundary_defect": c.boundary_defect,
                    "delta_witness": None if c.delta_witness is None else [dh.labels[i] for i in c.delta_witness],
                }
                for c in certificates
            ],
            "coarse": [row.model_dump() for row in coarse.rows],
            "scale_covers": [row.model_dump() for row in scale_covers.rows],
        },
        checks=checks,
    )


def register(subparsers: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("hyperbolize", parents=[parent], help="Гиперболизация через башню покрытий")
    add_space(parser)
    parser.add_argument("--n", type=int, required=True, help="Размерность разбиений уровней")
    parser.add_argument("--C", type=number, required=True, help="Константа C")
    parser.add_argument("--growth", type=number, help="Множитель масштабов")
    parser.add_argument("--shrink", type=number, help="Доля r для окрестностей")
    parser.add_argument("--basepoint", help="Базовая точка (по умолчанию лексикографически первая метка)")
    parser.add_argument("--all-basepoints", dest="all_basepoints", action="store_true")
    parser.add_argument("--scales", type=number_list, help="Масштабы покрытий (X, d_h)")
    parser.set_defaults(handler=hyperbolize)
