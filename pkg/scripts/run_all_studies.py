#!/usr/bin/env python3
"""Run the full set of convergence studies and write one CSV per study.

Reproduces the rate experiments for both schemes on all three domains:
the plain scheme loses accuracy on curved boundaries (order 1/2 once the
geometric error dominates), the boundary-corrected scheme recovers order
min(j, 3/2) without boundary subdivision, and either boundary-subdivision
law restores the optimal order j.

Usage:
    python scripts/run_all_studies.py [--outdir results] [--quick]
"""

import argparse
import pathlib
import sys

from wgmixed.convergence import StudyConfig, run_convergence_study

FULL = [
    ("square_original_j1", StudyConfig("square", "original", 1, (4, 8, 16, 32))),
    ("square_original_j2", StudyConfig("square", "original", 2, (4, 8, 16, 32))),
    ("disk_original_j1", StudyConfig("disk", "original", 1, (32, 64, 128, 256))),
    ("disk_original_j2", StudyConfig("disk", "original", 2, (16, 32, 64, 128))),
    ("disk_modified_j1", StudyConfig("disk", "modified", 1, (16, 32, 64, 128))),
    ("disk_modified_j2", StudyConfig("disk", "modified", 2, (16, 32, 64, 128))),
    ("disk_original_j2_split", StudyConfig("disk", "original", 2, (16, 32, 64, 128),
                                           split_rule="original")),
    ("disk_modified_j2_split", StudyConfig("disk", "modified", 2, (16, 32, 64, 128),
                                           split_rule="modified")),
    ("ring_original_j1", StudyConfig("ring", "original", 1, (48, 96, 192, 384))),
    ("ring_original_j2", StudyConfig("ring", "original", 2, (16, 32, 64, 128))),
    ("ring_modified_j1", StudyConfig("ring", "modified", 1, (16, 32, 64, 128))),
]

QUICK = [
    (name, StudyConfig(c.domain, c.scheme, c.degree, c.levels[:3],
                       split_rule=c.split_rule))
    for name, c in FULL
]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--quick", action="store_true",
                        help="drop the finest level of every study")
    args = parser.parse_args(argv)

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, cfg in (QUICK if args.quick else FULL):
        table = run_convergence_study(cfg)
        path = outdir / f"{name}.csv"
        table.write_csv(path)
        print(f"{name:28s} slope_u={table.slope_u:6.3f} slope_p={table.slope_p:6.3f} "
              f"-> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
