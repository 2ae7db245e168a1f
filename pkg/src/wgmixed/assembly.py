"""Local and global assembly of the weak Galerkin mixed-form operators.

A discrete flux pairs an interior [P_alpha]^2 polynomial per cell with one
scalar normal-trace polynomial of degree beta per edge (the trace represents
v_b * n_e and vanishes on boundary edges); pressures are piecewise P_sigma.
The degree triple must satisfy beta - 1 <= sigma <= beta = alpha.

The element-wise weak divergence of v = {v_0, v_b} is the P_beta(K)
polynomial defined by

    (div_w v, q)_K = -(v_0, grad q)_K + <v_b * n_e . n_K, q>_{boundary of K}

and the flux bilinear form is the interior L2 product plus the stabilization

    rho * sum_K h_K^{-1} <(v_0 - v_b).m, (w_0 - w_b).m>_{boundary of K}

with m the straight cell normal ("straight" mode) or the analytic-boundary
normal pulled back to boundary chords ("curved" mode; interior edges keep the
straight normal).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .basis import EdgeBasis, cell_basis, poly_dim
from .mesh import PolygonalMesh
from .quadrature import edge_rule, polygon_rule


class ConfigurationError(RuntimeError):
    """Assembly request inconsistent with the mesh data (e.g. missing curves)."""


def default_order(alpha: int, beta: int) -> int:
    """Quadrature exactness used for all bilinear forms."""
    return 2 * max(alpha, beta) + 2


class DofLayout:
    """Global indexing of flux and pressure unknowns.

    Velocity dofs: per-cell interior blocks (component-major: all x-component
    basis functions, then all y-component), followed by per-edge trace blocks.
    Boundary-edge traces are eliminated unless `include_boundary_traces` is
    set (which models the larger space used only in tests).  Pressure dofs are
    indexed separately from zero.
    """

    def __init__(self, mesh: PolygonalMesh, alpha: int, beta: int, sigma: int,
                 include_boundary_traces: bool = False):
        if min(alpha, beta, sigma) < 0:
            raise ValueError("polynomial degrees must be nonnegative")
        if not (beta - 1 <= sigma <= beta == alpha):
            raise ValueError(
                f"degrees (alpha={alpha}, beta={beta}, sigma={sigma}) must satisfy "
                "beta-1 <= sigma <= beta = alpha"
            )
        self.mesh = mesh
        self.alpha = alpha
        self.beta = beta
        self.sigma = sigma
        self.include_boundary_traces = include_boundary_traces
        self.dim_alpha = poly_dim(alpha)
        self.dim_sigma = poly_dim(sigma)
        self.dim_beta = poly_dim(beta)
        self.trace_dim = beta + 1

        nc, ne = mesh.n_cells, mesh.n_edges
        self.interior_offsets = 2 * self.dim_alpha * np.arange(nc, dtype=np.int64)
        base = 2 * self.dim_alpha * nc
        self.trace_offsets = np.full(ne, -1, dtype=np.int64)
        pos = base
        for e in range(ne):
            if include_boundary_traces or not mesh.is_boundary_edge(e):
                self.trace_offsets[e] = pos
                pos += self.trace_dim
        self.n_velocity = pos
        self.pressure_offsets = self.dim_sigma * np.arange(nc, dtype=np.int64)
        self.n_pressure = self.dim_sigma * nc

    @property
    def n_dofs(self) -> int:
        return self.n_velocity + self.n_pressure

    def cell_slice(self, c: int) -> slice:
        off = self.interior_offsets[c]
        return slice(off, off + 2 * self.dim_alpha)

    def edge_slice(self, e: int):
        off = self.trace_offsets[e]
        if off < 0:
            return None
        return slice(off, off + self.trace_dim)

    def pressure_slice(self, c: int) -> slice:
        off = self.pressure_offsets[c]
        return slice(off, off + self.dim_sigma)

    def local_dofs(self, c: int) -> np.ndarray:
        """Global velocity indices for the local dof order of cell c (-1 = dropped)."""
        idx = [np.arange(self.cell_slice(c).start, self.cell_slice(c).stop)]
        for e in self.mesh.cell_edges[c]:
            off = self.trace_offsets[e]
            if off < 0:
                idx.append(np.full(self.trace_dim, -1, dtype=np.int64))
            else:
                idx.append(np.arange(off, off + self.trace_dim))
        return np.concatenate(idx)

    def local_size(self, c: int) -> int:
        return 2 * self.dim_alpha + self.trace_dim * len(self.mesh.cell_edges[c])


@dataclass
class WgFunction:
    """A discrete flux: coefficients over interior and edge-trace dofs."""

    layout: DofLayout
    coeffs: np.ndarray

    @classmethod
    def zeros(cls, layout: DofLayout) -> "WgFunction":
        return cls(layout, np.zeros(layout.n_velocity))

    def interior(self, c: int) -> np.ndarray:
        """Interior coefficients of cell c, shape (2, dim P_alpha)."""
        return self.coeffs[self.layout.cell_slice(c)].reshape(2, self.layout.dim_alpha)

    def trace(self, e: int) -> np.ndarray:
        """Trace coefficients of edge e (zeros for eliminated boundary edges)."""
        sl = self.layout.edge_slice(e)
        if sl is None:
            return np.zeros(self.layout.trace_dim)
        return self.coeffs[sl]


class _EdgeQuad:
    """Quadrature and orientation data for one edge of a cell."""

    __slots__ = ("edge", "sign", "n_cell", "n_edge", "pts", "w", "t", "length", "segment")

    def __init__(self, mesh, e, sign, order):
        p0, p1 = mesh.edge_points(e)
        self.edge = e
        self.sign = sign
        self.n_edge = mesh.edge_normals[e]
        self.n_cell = sign * self.n_edge
        self.pts, self.w, self.t = edge_rule(p0, p1, order)
        self.length = mesh.edge_length(e)
        self.segment = mesh.boundary_segments.get(int(e))


class _CellOps:
    """Per-cell bases, quadrature, and edge data shared by the local operators."""

    def __init__(self, mesh: PolygonalMesh, c: int, layout: DofLayout, order: int | None = None):
        self.mesh = mesh
        self.c = c
        self.layout = layout
        self.order = default_order(layout.alpha, layout.beta) if order is None else order
        verts = mesh.vertices[mesh.cells[c]]
        self.basis_a = cell_basis(verts, layout.alpha)
        self.basis_b = self.basis_a if layout.beta == layout.alpha else cell_basis(verts, layout.beta)
        self.basis_s = cell_basis(verts, layout.sigma)
        self.rule = polygon_rule(verts, self.order)
        x, y = self.rule.points[:, 0], self.rule.points[:, 1]
        self.Va = self.basis_a.eval(x, y)
        self.Vb = self.Va if self.basis_b is self.basis_a else self.basis_b.eval(x, y)
        self.Gb = self.basis_b.grad(x, y)
        self.Vs = self.basis_s.eval(x, y)
        self.hk = float(mesh.cell_diameters[c])
        self.edge_basis = EdgeBasis(layout.beta)
        self.edges = [
            _EdgeQuad(mesh, int(e), int(sgn), self.order)
            for e, sgn in zip(mesh.cell_edges[c], mesh.cell_edge_signs[c])
        ]
        self.n_int = 2 * layout.dim_alpha
        self.n_loc = self.n_int + layout.trace_dim * len(self.edges)

    def trace_block(self, k: int) -> slice:
        off = self.n_int + k * self.layout.trace_dim
        return slice(off, off + self.layout.trace_dim)


def local_mass(ops: _CellOps) -> np.ndarray:
    """Block-diagonal two-component L2 mass matrix on the interior dofs."""
    w = ops.rule.weights
    M = ops.Va.T @ (w[:, None] * ops.Va)
    na = ops.layout.dim_alpha
    out = np.zeros((2 * na, 2 * na))
    out[:na, :na] = M
    out[na:, na:] = M
    return out


def local_weak_divergence(ops: _CellOps) -> np.ndarray:
    """Matrix sending local (interior + trace) dofs to P_beta coefficients."""
    lay = ops.layout
    na, nb = lay.dim_alpha, lay.dim_beta
    N = np.zeros((nb, ops.n_loc))
    w = ops.rule.weights
    # -(v_0, grad q)_K
    N[:, :na] = -(ops.Gb[:, :, 0] * w[:, None]).T @ ops.Va
    N[:, na:2 * na] = -(ops.Gb[:, :, 1] * w[:, None]).T @ ops.Va
    # <v_b n_e . n_K, q>_e with n_e . n_K = +-1
    for k, eq in enumerate(ops.edges):
        Vq = ops.basis_b.eval(eq.pts[:, 0], eq.pts[:, 1])
        E = ops.edge_basis.eval(eq.t)
        N[:, ops.trace_block(k)] = eq.sign * (Vq.T @ (eq.w[:, None] * E))
    Mb = ops.Vb.T @ (w[:, None] * ops.Vb)
    return np.linalg.solve(Mb, N)


def local_stabilization(ops: _CellOps, mode: str = "straight", rho: float = 1.0) -> np.ndarray:
    """Quadratic form rho/h_K sum_e int_e ((u_0-u_b).m)((v_0-v_b).m) ds.

    mode="straight" uses the cell outward normal on every edge; mode="curved"
    replaces it on boundary edges by the analytic-curve normal pulled back to
    the chord (interior edges keep the straight normal).
    """
    if mode not in ("straight", "curved"):
        raise ValueError(f"unknown normal mode '{mode}'")
    lay = ops.layout
    na = lay.dim_alpha
    S = np.zeros((ops.n_loc, ops.n_loc))
    for k, eq in enumerate(ops.edges):
        is_boundary = ops.mesh.is_boundary_edge(eq.edge)
        if mode == "curved" and is_boundary:
            if eq.segment is None:
                raise ConfigurationError(
                    f"edge {eq.edge}: curved stabilization requires a CurvedSegment"
                )
            m_vec = eq.segment.geometry(eq.t * eq.length)[2]
            ne_dot_m = m_vec @ eq.n_edge
        else:
            m_vec = np.broadcast_to(eq.n_cell, (eq.t.size, 2))
            ne_dot_m = np.full(eq.t.size, float(eq.sign))
        Vae = ops.basis_a.eval(eq.pts[:, 0], eq.pts[:, 1])
        R = np.zeros((eq.t.size, ops.n_loc))
        R[:, :na] = Vae * m_vec[:, 0:1]
        R[:, na:2 * na] = Vae * m_vec[:, 1:2]
        R[:, ops.trace_block(k)] = -ops.edge_basis.eval(eq.t) * ne_dot_m[:, None]
        S += R.T @ (eq.w[:, None] * R)
    return (rho / ops.hk) * S


def local_pressure_coupling(ops: _CellOps, D: np.ndarray | None = None) -> np.ndarray:
    """Rows of b_h on the cell: entries -(div_w v, q)_K for q in the P_sigma basis."""
    if D is None:
        D = local_weak_divergence(ops)
    w = ops.rule.weights
    Msb = ops.Vs.T @ (w[:, None] * ops.Vb)
    return -Msb @ D


def edge_mean_deviation_pairing(p0, p1, f, q, order: int) -> float:
    """int_e (f - mean_e f) q ds over the segment p0 -> p1."""
    pts, w, _ = edge_rule(p0, p1, order)
    fv = np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float)
    qv = np.asarray(q(pts[:, 0], pts[:, 1]), dtype=float)
    mean = float(w @ fv) / float(w.sum())
    return float(w @ ((fv - mean) * qv))


def boundary_correction_entries(mesh: PolygonalMesh, e: int, layout: DofLayout,
                                order: int | None = None) -> np.ndarray:
    """Correction pairings <phi.n - mean_e(phi.n), q>_e on a boundary edge.

    Rows run over the pressure basis of the adjacent cell, columns over its
    interior dofs; the assembled mass-conservation rows subtract these.
    """
    if not mesh.is_boundary_edge(e):
        raise ValueError(f"edge {e} is interior; the correction lives on the boundary")
    order = default_order(layout.alpha, layout.beta) if order is None else order
    c = int(mesh.edge_cells[e, 0])
    verts = mesh.vertices[mesh.cells[c]]
    basis_a = cell_basis(verts, layout.alpha)
    basis_s = cell_basis(verts, layout.sigma)
    p0, p1 = mesh.edge_points(e)
    pts, w, _ = edge_rule(p0, p1, order)
    n = mesh.edge_normals[e]
    Va = basis_a.eval(pts[:, 0], pts[:, 1])
    F = np.hstack([Va * n[0], Va * n[1]])              # phi . n
    mean = (w @ F) / float(w.sum())
    Vs = basis_s.eval(pts[:, 0], pts[:, 1])
    return Vs.T @ (w[:, None] * (F - mean[None, :]))


@dataclass
class SaddleSystem:
    """Assembled saddle-point blocks for one scheme on one mesh.

    The flux equation always couples pressures through B^T (the plain weak
    divergence); the mass-conservation rows are B for the original scheme and
    B1 = B - corrections for the boundary-corrected one, making the full
    matrix non-symmetric exactly when a correction row is nonzero.
    """

    layout: DofLayout
    scheme: str                  # "original" | "modified"
    normal_mode: str             # "straight" | "curved"
    rho: float
    A: sp.csr_matrix
    B: sp.csr_matrix
    B1: sp.csr_matrix | None
    pressure_mean: np.ndarray    # entries (q_i, 1)_{Omega_h}
    area: float
    rhs: np.ndarray | None = None
    quadrature_order: int = 0

    @property
    def pressure_rows(self) -> sp.csr_matrix:
        return self.B1 if self.scheme == "modified" else self.B

    def full_matrix(self) -> sp.csr_matrix:
        return sp.bmat([[self.A, self.B.T], [self.pressure_rows, None]], format="csr")

    def constant_pressure_vector(self) -> np.ndarray:
        """Coefficients of the function p = 1 (velocity block zero)."""
        lay = self.layout
        z = np.zeros(lay.n_velocity + lay.n_pressure)
        z[lay.n_velocity + lay.pressure_offsets] = 1.0
        return z

    def export_coo(self, path) -> None:
        """Write the full matrix as 'row col value' lines for debugging."""
        coo = self.full_matrix().tocoo()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# {coo.shape[0]} {coo.shape[1]} {coo.nnz}\n")
            for r, c, v in zip(coo.row, coo.col, coo.data):
                fh.write(f"{r} {c} {v:.17g}\n")


class _CooBuilder:
    def __init__(self):
        self.rows: list[np.ndarray] = []
        self.cols: list[np.ndarray] = []
        self.vals: list[np.ndarray] = []

    def add(self, rows, cols, block):
        rows = np.asarray(rows)
        cols = np.asarray(cols)
        rmask = rows >= 0
        cmask = cols >= 0
        if not (rmask.all() and cmask.all()):
            block = block[rmask][:, cmask]
            rows, cols = rows[rmask], cols[cmask]
        R, C = np.meshgrid(rows, cols, indexing="ij")
        self.rows.append(R.ravel())
        self.cols.append(C.ravel())
        self.vals.append(np.asarray(block, dtype=float).ravel())

    def to_csr(self, shape) -> sp.csr_matrix:
        if not self.rows:
            return sp.csr_matrix(shape)
        r = np.concatenate(self.rows)
        c = np.concatenate(self.cols)
        v = np.concatenate(self.vals)
        return sp.coo_matrix((v, (r, c)), shape=shape).tocsr()


def assemble_vh_matrix(mesh: PolygonalMesh, layout: DofLayout, mode: str = "straight",
                       rho: float = 1.0, order: int | None = None) -> sp.csr_matrix:
    """Mass + stabilization on the flux space (the a_h / a_{h,1} block)."""
    builder = _CooBuilder()
    for c in range(mesh.n_cells):
        ops = _CellOps(mesh, c, layout, order)
        loc = local_mass(ops)
        S = local_stabilization(ops, mode=mode, rho=rho)
        full = S.copy()
        full[:ops.n_int, :ops.n_int] += loc
        idx = layout.local_dofs(c)
        builder.add(idx, idx, full)
    return builder.to_csr((layout.n_velocity, layout.n_velocity))


def assemble_system(mesh: PolygonalMesh, degrees, scheme: str = "original",
                    rho: float = 1.0, order: int | None = None,
                    include_boundary_traces: bool = False) -> SaddleSystem:
    """Assemble the saddle-point system for one scheme.

    degrees is (alpha, beta, sigma) or an existing DofLayout.  The original
    scheme stabilizes with straight normals and keeps the symmetric block
    structure; the modified scheme stabilizes with curved normals and
    subtracts the boundary-correction pairings from the mass-conservation
    rows only.
    """
    if scheme not in ("original", "modified"):
        raise ValueError(f"unknown scheme '{scheme}'")
    if isinstance(degrees, DofLayout):
        layout = degrees
    else:
        alpha, beta, sigma = degrees
        layout = DofLayout(mesh, alpha, beta, sigma,
                           include_boundary_traces=include_boundary_traces)
    if rho <= 0.0:
        raise ValueError("stabilization parameter rho must be positive")
    mode = "curved" if scheme == "modified" else "straight"
    if mode == "curved":
        for e in mesh.boundary_edge_indices:
            if int(e) not in mesh.boundary_segments:
                raise ConfigurationError(f"boundary edge {e} lacks curve data")
    qorder = default_order(layout.alpha, layout.beta) if order is None else order

    a_build = _CooBuilder()
    b_build = _CooBuilder()
    corr_build = _CooBuilder() if scheme == "modified" else None
    pmean = np.zeros(layout.n_pressure)
    area = 0.0
    for c in range(mesh.n_cells):
        ops = _CellOps(mesh, c, layout, qorder)
        idx = layout.local_dofs(c)
        pidx = np.arange(layout.pressure_slice(c).start, layout.pressure_slice(c).stop)

        A_loc = local_stabilization(ops, mode=mode, rho=rho)
        A_loc[:ops.n_int, :ops.n_int] += local_mass(ops)
        a_build.add(idx, idx, A_loc)

        D = local_weak_divergence(ops)
        b_build.add(pidx, idx, local_pressure_coupling(ops, D))

        pmean[layout.pressure_slice(c)] = ops.rule.weights @ ops.Vs
        area += float(mesh.cell_areas[c])

    if scheme == "modified":
        for e in mesh.boundary_edge_indices:
            c = int(mesh.edge_cells[e, 0])
            C = boundary_correction_entries(mesh, int(e), layout, qorder)
            pidx = np.arange(layout.pressure_slice(c).start, layout.pressure_slice(c).stop)
            vidx = np.arange(layout.cell_slice(c).start, layout.cell_slice(c).stop)
            corr_build.add(pidx, vidx, C)

    A = a_build.to_csr((layout.n_velocity, layout.n_velocity))
    B = b_build.to_csr((layout.n_pressure, layout.n_velocity))
    B1 = None
    if scheme == "modified":
        B1 = (B - corr_build.to_csr(B.shape)).tocsr()
    return SaddleSystem(layout=layout, scheme=scheme, normal_mode=mode, rho=rho,
                        A=A, B=B, B1=B1, pressure_mean=pmean, area=area,
                        quadrature_order=qorder)


def assemble_rhs(mesh: PolygonalMesh, layout: DofLayout, g, compat: bool = True,
                 order: int | None = None) -> np.ndarray:
    """Right-hand side: zero flux block, pressure entries -(g, q)_{Omega_h}.

    With compat=True the source is replaced by its mean-free part on the
    computational domain, which makes the vector orthogonal to the constant
    pressure direction (the kernel of the transposed operator).
    """
    order = 2 * layout.alpha + 4 if order is None else order
    rhs = np.zeros(layout.n_velocity + layout.n_pressure)
    moments = np.zeros(layout.n_pressure)
    wconst = np.zeros(layout.n_pressure)
    total = 0.0
    area = 0.0
    for c in range(mesh.n_cells):
        verts = mesh.vertices[mesh.cells[c]]
        basis_s = cell_basis(verts, layout.sigma)
        rule = polygon_rule(verts, order)
        Vs = basis_s.eval(rule.points[:, 0], rule.points[:, 1])
        gv = np.asarray(g(rule.points[:, 0], rule.points[:, 1]), dtype=float)
        sl = layout.pressure_slice(c)
        moments[sl] = Vs.T @ (rule.weights * gv)
        wconst[sl] = rule.weights @ Vs
        total += float(rule.weights @ gv)
        area += float(rule.weights.sum())
    if compat:
        moments -= (total / area) * wconst
    rhs[layout.n_velocity:] = -moments
    return rhs
