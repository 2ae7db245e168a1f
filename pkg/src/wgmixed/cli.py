"""Command-line front end for convergence studies.

Example:

    wgmixed --domain disk --scheme modified --degree 2 \
            --levels 16,32,64,128 --split-rule modified --out disk_mod.csv

Exit codes: 0 on success, 1 on solver failure, 2 on bad arguments.
"""

from __future__ import annotations

import argparse
import sys

from .convergence import StudyConfig, run_convergence_study
from .mesh import MeshError
from .solver import SingularSystemError, SolverFailure

DEFAULT_LEVELS = {
    "square": (4, 8, 16, 32),
    "disk": (16, 32, 64, 128),
    "ring": (16, 32, 64, 128),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wgmixed",
        description="Weak Galerkin mixed-FEM convergence studies on square/disk/ring domains.",
    )
    parser.add_argument("--domain", choices=("square", "disk", "ring"), required=True)
    parser.add_argument("--scheme", choices=("original", "modified"), default="original")
    parser.add_argument("--degree", type=int, default=1, metavar="J",
                        help="polynomial degree j of the P_j-P_j-P_{j-1} scheme")
    parser.add_argument("--levels", type=str, default=None, metavar="N1,N2,...",
                        help="boundary resolutions per level (default per domain)")
    parser.add_argument("--split-rule", dest="split_rule", default="none",
                        metavar="{none|original|modified|fixed:<k>}",
                        help="boundary-edge subdivision law (disk/ring only)")
    parser.add_argument("--rho", type=float, default=1.0,
                        help="stabilization parameter (default 1)")
    parser.add_argument("--out", default="-", metavar="PATH",
                        help="CSV output path, '-' for stdout (default)")
    parser.add_argument("--mesh-out", dest="mesh_out", default=None, metavar="BASE",
                        help="write each level's mesh to BASE.n<N>.json")
    parser.add_argument("--quadrature-order", dest="quadrature_order", type=int,
                        default=None, help="override the assembly quadrature exactness")
    return parser


def _parse_levels(text: str) -> tuple:
    try:
        levels = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ValueError(f"bad --levels value '{text}'") from None
    if not levels:
        raise ValueError("--levels is empty")
    return levels


def _check_split_rule(rule: str) -> str:
    if rule in ("none", "original", "modified"):
        return rule
    if rule.startswith("fixed:"):
        try:
            k = int(rule.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad --split-rule value '{rule}'") from None
        if k < 1:
            raise ValueError("fixed split count must be >= 1")
        return rule
    raise ValueError(f"bad --split-rule value '{rule}'")


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help (0) and usage errors (2)
        return int(exc.code or 0)

    try:
        levels = _parse_levels(args.levels) if args.levels else DEFAULT_LEVELS[args.domain]
        config = StudyConfig(
            domain=args.domain,
            scheme=args.scheme,
            degree=args.degree,
            levels=levels,
            split_rule=_check_split_rule(args.split_rule),
            rho=args.rho,
            quadrature_order=args.quadrature_order,
        )
        table = run_convergence_study(config)
    except (SolverFailure, SingularSystemError) as exc:
        print(f"wgmixed: solver failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, MeshError) as exc:
        print(f"wgmixed: {exc}", file=sys.stderr)
        return 2

    csv_text = table.to_csv()
    if args.out == "-":
        sys.stdout.write(csv_text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(f"wrote {args.out}: slope_u={table.slope_u:.3f} slope_p={table.slope_p:.3f}")

    if args.mesh_out:
        from .convergence import generate_domain_mesh
        from .mesh import write_mesh
        for row in table.rows:
            mesh = generate_domain_mesh(args.domain, row.n, row.split)
            path = f"{args.mesh_out}.n{row.n}.json"
            write_mesh(mesh, path)
            print(f"wrote {path}")
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
