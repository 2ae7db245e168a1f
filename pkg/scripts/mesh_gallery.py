#!/usr/bin/env python3
"""Write sample meshes for all three domains and print their quality reports.

Usage:
    python scripts/mesh_gallery.py [--outdir meshes]
"""

import argparse
import pathlib
import sys

from wgmixed.mesh import (
    generate_disk_mesh,
    generate_ring_mesh,
    generate_square_tri,
    validate_mesh,
    write_mesh,
)

SAMPLES = [
    ("square_n8", lambda: generate_square_tri(8)),
    ("disk_n16", lambda: generate_disk_mesh(16, 1)),
    ("disk_n16_split4", lambda: generate_disk_mesh(16, 4)),
    ("ring_n16", lambda: generate_ring_mesh(16, 1)),
    ("ring_n16_split3", lambda: generate_ring_mesh(16, 3)),
]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="meshes")
    args = parser.parse_args(argv)
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, fn in SAMPLES:
        mesh = fn()
        path = outdir / f"{name}.json"
        write_mesh(mesh, path)
        rep = validate_mesh(mesh)
        print(f"{name:18s} cells={mesh.n_cells:5d} h={mesh.h:.4f} s={mesh.s:.4f} "
              f"star={rep.min_star_ratio:.3f} gap/s^2={rep.max_gap_ratio:.3f} "
              f"passed={rep.passed} -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
