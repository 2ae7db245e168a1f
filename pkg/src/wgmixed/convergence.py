"""Discrete errors, projected exact solutions, and convergence studies.

Errors are measured in the projected metric the method is judged by: the flux
error is the difference between the discrete solution and the projection of
the exact flux (interior L2 projections per cell, edge projections of the
normal component on interior edges, zero on boundary edges), measured in the
flux norm; the pressure error is measured cellwise in L2 against the
piecewise-polynomial projection of the exact pressure.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .assembly import (
    DofLayout,
    WgFunction,
    assemble_rhs,
    assemble_system,
    assemble_vh_matrix,
)
from .basis import cell_basis, project_cell, project_edge
from .mesh import (
    PolygonalMesh,
    boundary_split_count,
    generate_disk_mesh,
    generate_ring_mesh,
    generate_square_tri,
    validate_mesh,
)
from .quadrature import polygon_rule
from .solutions import registry_lookup
from .solver import solve_saddle

CSV_HEADER = "n,h,s,dofs,err_u_Vh,err_u_Vh1,err_p_L2,seconds"


def fit_rate(pairs) -> float:
    """Least-squares slope of log(err) against log(h)."""
    arr = np.asarray(list(pairs), dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] != 2:
        raise ValueError("need at least two (h, err) pairs")
    if np.any(arr <= 0.0):
        raise ValueError("h and err values must be positive")
    return float(np.polyfit(np.log(arr[:, 0]), np.log(arr[:, 1]), 1)[0])


def project_exact(mesh: PolygonalMesh, u, p, layout: DofLayout,
                  order: int | None = None) -> tuple[WgFunction, np.ndarray]:
    """Projection of an exact pair onto the discrete spaces.

    Interior flux coefficients are cellwise L2 projections of each component;
    interior-edge traces are L2 projections of u . n_e; boundary-edge traces
    are zero by definition of the constrained flux space.
    """
    order = 2 * layout.alpha + 4 if order is None else order
    w = WgFunction.zeros(layout)
    pex = np.zeros(layout.n_pressure)
    for c in range(mesh.n_cells):
        verts = mesh.vertices[mesh.cells[c]]
        ba = cell_basis(verts, layout.alpha)
        sl = layout.cell_slice(c)
        na = layout.dim_alpha
        w.coeffs[sl][:na] = project_cell(verts, lambda x, y: u(x, y)[:, 0],
                                         layout.alpha, order, basis=ba)
        w.coeffs[sl][na:] = project_cell(verts, lambda x, y: u(x, y)[:, 1],
                                         layout.alpha, order, basis=ba)
        pex[layout.pressure_slice(c)] = project_cell(verts, p, layout.sigma, order)
    for e in range(mesh.n_edges):
        sl = layout.edge_slice(e)
        if sl is None or mesh.is_boundary_edge(e):
            continue
        n_e = mesh.edge_normals[e]
        p0, p1 = mesh.edge_points(e)
        w.coeffs[sl] = project_edge(p0, p1, lambda x, y: u(x, y) @ n_e,
                                    layout.beta, order)
    return w, pex


def vh_norm(mesh: PolygonalMesh, w: WgFunction, mode: str = "straight",
            rho: float = 1.0, order: int | None = None, matrix=None) -> float:
    """Flux norm sqrt(mass + stabilization) with the requested normal mode."""
    if matrix is None:
        matrix = assemble_vh_matrix(mesh, w.layout, mode=mode, rho=rho, order=order)
    val = float(w.coeffs @ (matrix @ w.coeffs))
    return math.sqrt(max(val, 0.0))


def l2_flux_interior_error(mesh: PolygonalMesh, w: WgFunction) -> float:
    """Interior L2 norm of a discrete flux (trace dofs ignored).

    This is the metric in which the discrete flux error superconverges one
    order past the stabilized flux norm on polygon-exact domains; it is
    recorded as a diagnostic alongside the flux-norm errors.
    """
    layout = w.layout
    total = 0.0
    for c in range(mesh.n_cells):
        verts = mesh.vertices[mesh.cells[c]]
        ba = cell_basis(verts, layout.alpha)
        rule = polygon_rule(verts, 2 * layout.alpha)
        V = ba.eval(rule.points[:, 0], rule.points[:, 1])
        M = V.T @ (rule.weights[:, None] * V)
        e = w.interior(c)
        total += float(e[0] @ M @ e[0] + e[1] @ M @ e[1])
    return math.sqrt(max(total, 0.0))


def l2_pressure_error(mesh: PolygonalMesh, layout: DofLayout, p_coeffs,
                      p_exact_coeffs, order: int | None = None) -> float:
    """Cellwise L2 norm of the pressure coefficient difference."""
    order = 2 * layout.sigma if order is None else order
    diff = np.asarray(p_exact_coeffs, dtype=float) - np.asarray(p_coeffs, dtype=float)
    total = 0.0
    for c in range(mesh.n_cells):
        d = diff[layout.pressure_slice(c)]
        if not d.any():
            continue
        verts = mesh.vertices[mesh.cells[c]]
        bs = cell_basis(verts, layout.sigma)
        rule = polygon_rule(verts, max(order, 2 * layout.sigma))
        V = bs.eval(rule.points[:, 0], rule.points[:, 1])
        total += float(d @ (V.T @ (rule.weights[:, None] * V)) @ d)
    return math.sqrt(max(total, 0.0))


@dataclass(frozen=True)
class StudyConfig:
    """One convergence study: a domain, a scheme, a degree, and refinements."""

    domain: str
    scheme: str
    degree: int
    levels: tuple
    split_rule: str = "none"      # none | original | modified | fixed:<k>
    rho: float = 1.0
    quadrature_order: int | None = None
    solver_method: str = "lagrange"
    threads: int | None = None    # default: WG_THREADS env or 1
    validate: bool = True


@dataclass(frozen=True)
class StudyRow:
    n: int
    split: int
    h: float
    s: float
    dofs: int
    err_u_vh: float
    err_u_vh1: float
    err_p: float
    seconds: float
    residual: float
    err_u_l2: float = float("nan")  # diagnostic, not part of the CSV format


@dataclass
class ConvergenceTable:
    """Per-level study records with fitted slopes."""

    config: StudyConfig
    rows: list
    slope_u: float
    slope_u1: float
    slope_p: float
    pairwise_u: tuple
    quality: list = field(default_factory=list)

    def __post_init__(self):
        hs = [r.h for r in self.rows]
        if any(b >= a for a, b in zip(hs, hs[1:])):
            raise ValueError("mesh sizes must be strictly decreasing down the rows")

    @property
    def quality_ok(self) -> bool:
        return all(rep.passed for rep in self.quality)

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.n},{r.h:.12g},{r.s:.12g},{r.dofs},"
                f"{r.err_u_vh:.12g},{r.err_u_vh1:.12g},{r.err_p:.12g},{r.seconds:.12g}"
            )
        lines.append(f"# slope_u={self.slope_u:.12g} slope_p={self.slope_p:.12g}")
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv())


def generate_domain_mesh(domain: str, n: int, split: int = 1) -> PolygonalMesh:
    if domain == "square":
        return generate_square_tri(n)
    if domain == "disk":
        return generate_disk_mesh(n, split)
    if domain == "ring":
        return generate_ring_mesh(n, split)
    raise ValueError(f"unknown domain '{domain}'")


def split_for_level(config: StudyConfig, base_h: float) -> int:
    rule = config.split_rule
    if rule == "none" or config.domain == "square":
        return 1
    if rule.startswith("fixed:"):
        k = int(rule.split(":", 1)[1])
        if k < 1:
            raise ValueError(f"fixed split must be >= 1, got {k}")
        return k
    return boundary_split_count(base_h, config.degree, rule)


def run_level(config: StudyConfig, n: int):
    """Build, assemble, solve, and measure one refinement level."""
    t0 = time.perf_counter()
    j = config.degree
    mesh = generate_domain_mesh(config.domain, n, 1)
    split = split_for_level(config, mesh.h)
    if split > 1:
        mesh = generate_domain_mesh(config.domain, n, split)
    report = validate_mesh(mesh) if config.validate else None

    layout = DofLayout(mesh, j, j, j - 1)
    case = registry_lookup(config.domain)
    system = assemble_system(mesh, layout, scheme=config.scheme, rho=config.rho,
                             order=config.quadrature_order)
    rhs = assemble_rhs(mesh, layout, case.g, compat=True)
    sol = solve_saddle(system, rhs, method=config.solver_method)

    uex, pex = project_exact(mesh, case.u, case.p, layout)
    err = WgFunction(layout, uex.coeffs - sol.u.coeffs)
    if config.scheme == "modified":
        mat_curved = system.A
        mat_straight = assemble_vh_matrix(mesh, layout, mode="straight", rho=config.rho,
                                          order=config.quadrature_order)
    else:
        mat_straight = system.A
        mat_curved = assemble_vh_matrix(mesh, layout, mode="curved", rho=config.rho,
                                        order=config.quadrature_order)
    err_vh = vh_norm(mesh, err, matrix=mat_straight)
    err_vh1 = vh_norm(mesh, err, matrix=mat_curved)
    err_p = l2_pressure_error(mesh, layout, sol.p, pex)
    err_l2 = l2_flux_interior_error(mesh, err)
    seconds = time.perf_counter() - t0
    row = StudyRow(n=n, split=split, h=mesh.h, s=mesh.s, dofs=layout.n_dofs,
                   err_u_vh=err_vh, err_u_vh1=err_vh1, err_p=err_p,
                   seconds=seconds, residual=sol.residual, err_u_l2=err_l2)
    return row, report


def run_convergence_study(config: StudyConfig) -> ConvergenceTable:
    """Run every refinement level of a study and fit convergence slopes.

    Levels may execute concurrently (WG_THREADS or config.threads); the table
    rows keep the order of the requested levels and all numbers are
    independent of the thread count.
    """
    levels = list(config.levels)
    if not levels:
        raise ValueError("study needs at least one refinement level")
    threads = config.threads
    if threads is None:
        threads = int(os.environ.get("WG_THREADS", "1"))
    if threads > 1 and len(levels) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda n: run_level(config, n), levels))
    else:
        results = [run_level(config, n) for n in levels]

    rows = [r for r, _ in results]
    quality = [rep for _, rep in results if rep is not None]
    hu = [(r.h, r.err_u_vh) for r in rows]
    slope_u = fit_rate(hu) if len(rows) > 1 else float("nan")
    slope_u1 = fit_rate([(r.h, r.err_u_vh1) for r in rows]) if len(rows) > 1 else float("nan")
    slope_p = fit_rate([(r.h, r.err_p) for r in rows]) if len(rows) > 1 else float("nan")
    pairwise = tuple(
        math.log(rows[i].err_u_vh / rows[i + 1].err_u_vh)
        / math.log(rows[i].h / rows[i + 1].h)
        for i in range(len(rows) - 1)
    )
    return ConvergenceTable(config=config, rows=rows, slope_u=slope_u,
                            slope_u1=slope_u1, slope_p=slope_p,
                            pairwise_u=pairwise, quality=quality)
