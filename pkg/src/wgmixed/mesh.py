"""Polygonal meshes: body-fitted generators for square/disk/ring domains,
curved-boundary geometry (chord-to-arc map, gap function, curve normals),
mesh-quality validation, and a plain-text mesh file format.

Conventions: cells are CCW vertex loops.  Each edge stores its endpoints in
the CCW traversal order of the *owning* cell (the lower-indexed adjacent
cell); the prescribed edge normal n_e is that cell's outward unit normal.
Boundary edges have exactly one adjacent cell and carry a CurvedSegment
(possibly flat).  Meshes are immutable after construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .quadrature import polygon_area, polygon_centroid
from .basis import cell_diameter

ON_CURVE_TOL = 1e-9


class MeshError(ValueError):
    """Structurally inconsistent or degenerate mesh input."""


# ---------------------------------------------------------------------------
# curved boundary segments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurvedSegment:
    """Map from a straight boundary chord onto the analytic boundary curve.

    The local frame has its origin at `start` and abscissa along the chord;
    the gap is measured on the side of the chord where the curve lies
    (`side` = +1 for the +n_e side, -1 for the -n_e side, with n_e the
    right-hand normal of start -> end).
    """

    curve_id: str              # "flat" or "circle"
    start: np.ndarray
    end: np.ndarray
    center: np.ndarray | None = None
    radius: float = 0.0
    side: int = 1

    @property
    def chord_length(self) -> float:
        d = self.end - self.start
        return float(np.hypot(d[0], d[1]))

    @property
    def tangent(self) -> np.ndarray:
        return (self.end - self.start) / self.chord_length

    @property
    def chord_normal(self) -> np.ndarray:
        t = self.tangent
        return np.array([t[1], -t[0]])

    def geometry(self, xhat) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorized (foot points, gaps, curve normals) at chord abscissae."""
        xh = np.atleast_1d(np.asarray(xhat, dtype=float))
        L = self.chord_length
        if np.any(xh < -1e-12 * L) or np.any(xh > L * (1.0 + 1e-12)):
            raise ValueError(f"abscissa outside [0, {L}]")
        base = self.start[None, :] + xh[:, None] * self.tangent[None, :]
        n_e = self.chord_normal
        if self.curve_id == "flat":
            gamma = np.zeros_like(xh)
            ntilde = np.broadcast_to(n_e, base.shape).copy()
            return base, gamma, ntilde
        yhat = self.side * n_e
        w = base - self.center[None, :]
        wy = w @ yhat
        disc = wy * wy + self.radius * self.radius - (w * w).sum(axis=1)
        gamma = np.maximum(-wy + np.sqrt(np.maximum(disc, 0.0)), 0.0)
        foot = base + gamma[:, None] * yhat[None, :]
        ntilde = self.side * (foot - self.center[None, :]) / self.radius
        return foot, gamma, ntilde


def flat_segment(start, end) -> CurvedSegment:
    return CurvedSegment("flat", np.asarray(start, float), np.asarray(end, float))


def circle_segment(start, end, center, radius: float) -> CurvedSegment:
    """Chord of a circle; the arc side is inferred from the chord midpoint."""
    start = np.asarray(start, dtype=float)
    end = np.asarray(end, dtype=float)
    center = np.asarray(center, dtype=float)
    for p in (start, end):
        if abs(np.hypot(*(p - center)) - radius) > ON_CURVE_TOL * max(radius, 1.0):
            raise MeshError(f"chord endpoint {p} not on circle (r={radius})")
    seg = CurvedSegment("circle", start, end, center, radius, side=1)
    mid = 0.5 * (start + end)
    side = 1 if float((mid - center) @ seg.chord_normal) >= 0.0 else -1
    return CurvedSegment("circle", start, end, center, radius, side=side)


def curved_geometry(segment: CurvedSegment, xhat):
    """Foot point on the curve, gap, and outward curve normal at abscissa xhat.

    Scalar xhat gives scalar results; array xhat gives arrays.
    """
    foot, gamma, ntilde = segment.geometry(xhat)
    if np.isscalar(xhat) or np.asarray(xhat).ndim == 0:
        return foot[0], float(gamma[0]), ntilde[0]
    return foot, gamma, ntilde


# ---------------------------------------------------------------------------
# mesh container and builder
# ---------------------------------------------------------------------------

@dataclass
class PolygonalMesh:
    """Immutable polygonal mesh with adjacency, edge normals and curve data."""

    vertices: np.ndarray          # (nv, 2)
    cells: list                   # CCW vertex loops, int arrays
    edges: np.ndarray             # (ne, 2), endpoints in owner's CCW order
    edge_cells: np.ndarray        # (ne, 2), [owner, neighbor or -1]
    edge_normals: np.ndarray      # (ne, 2), owner's outward normal n_e
    cell_edges: list              # per cell: edge ids in traversal order
    cell_edge_signs: list         # per cell: +1 if owner else -1
    boundary_segments: dict       # boundary edge id -> CurvedSegment
    cell_areas: np.ndarray
    cell_centroids: np.ndarray
    cell_diameters: np.ndarray
    h: float                      # max cell diameter
    s: float                      # max boundary edge length
    domain: str = "custom"

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def boundary_edge_indices(self) -> np.ndarray:
        return np.where(self.edge_cells[:, 1] < 0)[0]

    def is_boundary_edge(self, e: int) -> bool:
        return self.edge_cells[e, 1] < 0

    def edge_points(self, e: int):
        return self.vertices[self.edges[e, 0]], self.vertices[self.edges[e, 1]]

    def edge_length(self, e: int) -> float:
        p0, p1 = self.edge_points(e)
        return float(np.hypot(*(p1 - p0)))


def build_mesh(vertices, cells, curve_lookup=None, domain: str = "custom") -> PolygonalMesh:
    """Derive edges, adjacency, and normals from CCW cell loops.

    curve_lookup(p0, p1) -> CurvedSegment is consulted for each boundary edge
    with the stored (owner-CCW) endpoints; default is a flat segment.
    """
    verts = np.array(vertices, dtype=float)
    loops = [np.asarray(c, dtype=np.int64) for c in cells]
    if verts.ndim != 2 or verts.shape[1] != 2:
        raise MeshError("vertices must be an (n, 2) array")
    scale = max(float(np.ptp(verts[:, 0])), float(np.ptp(verts[:, 1])), 1e-300)

    areas = np.empty(len(loops))
    cents = np.empty((len(loops), 2))
    diams = np.empty(len(loops))
    for ci, loop in enumerate(loops):
        if loop.size < 3:
            raise MeshError(f"cell {ci}: fewer than 3 vertices")
        if len(set(loop.tolist())) != loop.size:
            raise MeshError(f"cell {ci}: repeated vertex in loop")
        if loop.min() < 0 or loop.max() >= verts.shape[0]:
            raise MeshError(f"cell {ci}: vertex index out of range")
        a = polygon_area(verts[loop])
        if a <= 1e-14 * scale * scale:
            raise MeshError(f"cell {ci}: area {a:.3e} not positive (CCW simple loop required)")
        areas[ci] = a
        cents[ci] = polygon_centroid(verts[loop])
        diams[ci] = cell_diameter(verts[loop])

    edge_index: dict[tuple[int, int], int] = {}
    edge_list: list[tuple[int, int]] = []
    owners: list[int] = []
    neighbors: list[int] = []
    cell_edges = [[] for _ in loops]
    cell_signs = [[] for _ in loops]
    for ci, loop in enumerate(loops):
        m = loop.size
        for j in range(m):
            a, b = int(loop[j]), int(loop[(j + 1) % m])
            key = (a, b) if a < b else (b, a)
            if key not in edge_index:
                e = len(edge_list)
                edge_index[key] = e
                edge_list.append((a, b))
                owners.append(ci)
                neighbors.append(-1)
                sign = 1
            else:
                e = edge_index[key]
                if neighbors[e] >= 0:
                    raise MeshError(f"edge {key} shared by more than two cells")
                if (a, b) == edge_list[e]:
                    raise MeshError(f"edge {key} traversed twice in the same direction")
                neighbors[e] = ci
                sign = -1
            cell_edges[ci].append(e)
            cell_signs[ci].append(sign)

    edges = np.array(edge_list, dtype=np.int64)
    edge_cells = np.column_stack([np.array(owners, dtype=np.int64),
                                  np.array(neighbors, dtype=np.int64)])
    d = verts[edges[:, 1]] - verts[edges[:, 0]]
    lengths = np.hypot(d[:, 0], d[:, 1])
    if np.any(lengths <= 1e-15 * scale):
        raise MeshError("mesh contains a zero-length edge")
    edge_normals = np.column_stack([d[:, 1], -d[:, 0]]) / lengths[:, None]

    boundary_segments: dict[int, CurvedSegment] = {}
    s = 0.0
    for e in np.where(edge_cells[:, 1] < 0)[0]:
        p0, p1 = verts[edges[e, 0]], verts[edges[e, 1]]
        seg = flat_segment(p0, p1) if curve_lookup is None else curve_lookup(p0, p1)
        if not (np.allclose(seg.start, p0, atol=1e-12 * scale)
                and np.allclose(seg.end, p1, atol=1e-12 * scale)):
            raise MeshError(f"curved segment for edge {e} does not match chord endpoints")
        boundary_segments[int(e)] = seg
        s = max(s, float(lengths[e]))

    h = float(diams.max())
    if s > h * (1.0 + 1e-12):
        raise MeshError(f"boundary edge length s={s} exceeds mesh size h={h}")

    for arr in (verts, edges, edge_cells, edge_normals, areas, cents, diams):
        arr.setflags(write=False)
    return PolygonalMesh(
        vertices=verts,
        cells=loops,
        edges=edges,
        edge_cells=edge_cells,
        edge_normals=edge_normals,
        cell_edges=[np.array(e, dtype=np.int64) for e in cell_edges],
        cell_edge_signs=[np.array(sg, dtype=np.int64) for sg in cell_signs],
        boundary_segments=boundary_segments,
        cell_areas=areas,
        cell_centroids=cents,
        cell_diameters=diams,
        h=h,
        s=s,
        domain=domain,
    )


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def generate_square_tri(n: int) -> PolygonalMesh:
    """Uniform triangulation of (0,1)^2 with 2 n^2 cells; h = sqrt(2)/n."""
    if n < 1:
        raise ValueError(f"need n >= 1 cells per side, got {n}")
    def vid(i, j):
        return i * (n + 1) + j
    verts = [(i / n, j / n) for i in range(n + 1) for j in range(n + 1)]
    cells = []
    for i in range(n):
        for j in range(n):
            cells.append([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)])
            cells.append([vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)])
    return build_mesh(verts, cells, curve_lookup=None, domain="square")


def _disk_layers(n: int) -> int:
    """Number of concentric rings: the divisor of n closest to n/6."""
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    return min(divisors, key=lambda d: (abs(d - n / 6.0), d))


def generate_disk_mesh(n: int, split: int = 1) -> PolygonalMesh:
    """Body-fitted mesh of the unit disk with n boundary sides.

    Concentric rings at radii l/L (L a divisor of n near n/6) carry q*l
    vertices each (q = n/L), woven into triangles whose tangential and radial
    sizes both scale like 1/n.  Each of the n boundary chords is subdivided
    into `split` sub-chords with endpoints exactly on the unit circle, so
    boundary cells become polygons with `split` short boundary edges.
    """
    if n < 3:
        raise ValueError(f"need n >= 3 boundary sides, got {n}")
    if split < 1:
        raise ValueError(f"need split >= 1, got {split}")
    L = _disk_layers(n)
    q = n // L

    coords: list[tuple[float, float]] = [(0.0, 0.0)]
    ring_start = [0] * (L + 1)
    for l in range(1, L + 1):
        ring_start[l] = len(coords)
        rad = l / L
        count = q * l
        for k in range(count):
            ang = 2.0 * math.pi * k / count
            coords.append((rad * math.cos(ang), rad * math.sin(ang)))

    def ring_vertex(l, k):
        if l == 0:
            return 0
        return ring_start[l] + (k % (q * l))

    # midpoints of the n boundary chords, exactly on the unit circle
    mids = {}
    for k in range(n):
        ids = []
        for i in range(1, split):
            ang = 2.0 * math.pi * (k + i / split) / n
            ids.append(len(coords))
            coords.append((math.cos(ang), math.sin(ang)))
        mids[k] = ids

    cells = []
    for l in range(L):
        inner = q * l if l > 0 else 1
        outer = q * (l + 1)
        for sct in range(q):
            for j in range(l + 1):  # triangles with an outer base
                vi = ring_vertex(l, l * sct + j)
                o0 = (l + 1) * sct + j
                o1 = o0 + 1
                loop = [vi, ring_vertex(l + 1, o0)]
                if l + 1 == L:
                    loop.extend(mids[o0 % n])
                loop.append(ring_vertex(l + 1, o1))
                cells.append(loop)
            for j in range(l):      # triangles with an inner base
                cells.append([
                    ring_vertex(l, l * sct + j),
                    ring_vertex(l + 1, (l + 1) * sct + j + 1),
                    ring_vertex(l, l * sct + j + 1),
                ])

    center = np.zeros(2)
    def lookup(p0, p1):
        return circle_segment(p0, p1, center, 1.0)
    return build_mesh(coords, cells, curve_lookup=lookup, domain="disk")


def generate_ring_mesh(n: int, split: int = 1) -> PolygonalMesh:
    """Body-fitted mesh of the annulus 1/2 < r < 1 with n sides per circle.

    Structured layers of quads (split into triangles) between the circles;
    both inner and outer boundary chords are subdivided into `split`
    sub-chords with endpoints exactly on their circles.  The segments on the
    inner circle have the domain on the outside, so their gap is measured
    toward the annulus interior.
    """
    if n < 8:
        raise ValueError(f"need n >= 8 boundary sides, got {n}")
    if split < 1:
        raise ValueError(f"need split >= 1, got {split}")
    L = max(1, round(n / (3.0 * math.pi)))

    coords: list[tuple[float, float]] = []
    def grid(l, k):
        return l * n + (k % n)
    for l in range(L + 1):
        rad = 0.5 + 0.5 * l / L
        for k in range(n):
            ang = 2.0 * math.pi * k / n
            coords.append((rad * math.cos(ang), rad * math.sin(ang)))

    def chord_mids(rad, k):
        ids = []
        for i in range(1, split):
            ang = 2.0 * math.pi * (k + i / split) / n
            ids.append(len(coords))
            coords.append((rad * math.cos(ang), rad * math.sin(ang)))
        return ids

    inner_mids = {k: chord_mids(0.5, k) for k in range(n)}
    outer_mids = {k: chord_mids(1.0, k) for k in range(n)}

    cells = []
    for l in range(L):
        for k in range(n):
            A, B = grid(l, k), grid(l, k + 1)
            C, D = grid(l + 1, k + 1), grid(l + 1, k)
            # outward triangle (A, D, C): owns the outer chord D -> C
            loop1 = [A, D]
            if l + 1 == L:
                loop1.extend(outer_mids[k])
            loop1.append(C)
            cells.append(loop1)
            # inward triangle (A, C, B): owns the inner chord B -> A
            loop2 = [A, C, B]
            if l == 0:
                loop2.extend(reversed(inner_mids[k]))
            cells.append(loop2)

    center = np.zeros(2)
    def lookup(p0, p1):
        rad = 1.0 if abs(np.hypot(*p0) - 1.0) < 0.25 else 0.5
        return circle_segment(p0, p1, center, rad)
    return build_mesh(coords, cells, curve_lookup=lookup, domain="ring")


def boundary_split_count(h: float, j: int, rule: str) -> int:
    """Sub-chords per boundary side: ceil(h^(1/2-j)) or ceil(h^((3-2j)/4)).

    The first law gives s = O(h^(j+1/2)) (optimal for the plain scheme), the
    second s = O(sqrt(h^(j+1/2))) (optimal for the boundary-corrected one).
    """
    if h <= 0.0:
        raise ValueError(f"mesh size must be positive, got {h}")
    if j < 1:
        raise ValueError(f"polynomial degree must be >= 1, got {j}")
    if rule == "original":
        expo = 0.5 - j
    elif rule == "modified":
        expo = (3.0 - 2.0 * j) / 4.0
    else:
        raise ValueError(f"unknown split rule '{rule}'")
    val = h ** expo
    if abs(val - round(val)) < 1e-9:
        val = round(val)
    return max(1, int(math.ceil(val)))


# ---------------------------------------------------------------------------
# quality validation (testable parts of the mesh regularity assumptions)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QualityThresholds:
    min_star_ratio: float = 0.03        # inscribed-ball radius / h_K
    min_edge_ratio: float = 0.10        # longest cell edge / h_K
    max_quasi_uniformity: float = 10.0  # h / min h_K
    max_boundary_uniformity: float = 5.0  # s / min boundary h_e
    max_gap_ratio: float = 0.5          # gap / s^2
    max_normal_deviation: float = 1.5   # |curve normal - chord normal| / s
    samples_per_edge: int = 8


@dataclass
class MeshQualityReport:
    """Measured regularity ratios with pass/fail per assumption."""

    min_star_ratio: float
    min_edge_ratio: float
    quasi_uniformity: float
    boundary_uniformity: float
    max_gap_ratio: float
    max_normal_deviation: float
    max_normal_deviation_per_edge: float  # max over edges of |ntilde - n_e| / h_e
    checks: dict
    violations: list

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _point_segment_distance(p, a, b) -> float:
    d = b - a
    t = float(np.clip(((p - a) @ d) / (d @ d), 0.0, 1.0))
    q = a + t * d
    return float(np.hypot(*(p - q)))


def validate_mesh(mesh: PolygonalMesh,
                  thresholds: QualityThresholds = QualityThresholds()) -> MeshQualityReport:
    """Measure the testable mesh-regularity quantities and flag violations.

    Star-shapedness is checked with respect to the cell centroid (sufficient
    for the generated mesh families); curve gaps and normals are sampled at
    interior points of each boundary chord.
    """
    verts = mesh.vertices
    violations: list[str] = []

    # structural re-checks (covers hand-built meshes that bypass build_mesh)
    for ci, loop in enumerate(mesh.cells):
        a = polygon_area(verts[loop])
        if not a > 0.0:
            raise MeshError(f"cell {ci}: nonpositive area {a:.3e}")
        if len(mesh.cell_edges[ci]) != loop.size:
            raise MeshError(f"cell {ci}: edge list does not close the loop")
    counts = np.zeros(mesh.n_edges, dtype=int)
    for ce in mesh.cell_edges:
        counts[ce] += 1
    expected = np.where(mesh.edge_cells[:, 1] < 0, 1, 2)
    if not np.array_equal(counts, expected):
        raise MeshError("edge-cell adjacency is inconsistent")

    star = np.empty(mesh.n_cells)
    edge_ratio = np.empty(mesh.n_cells)
    for ci, loop in enumerate(mesh.cells):
        pts = verts[loop]
        c = mesh.cell_centroids[ci]
        hk = mesh.cell_diameters[ci]
        m = loop.size
        rho = math.inf
        longest = 0.0
        star_ok = True
        for j in range(m):
            a, b = pts[j], pts[(j + 1) % m]
            cross = (a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0])
            if cross <= 0.0:
                star_ok = False
            rho = min(rho, _point_segment_distance(c, a, b))
            longest = max(longest, float(np.hypot(*(b - a))))
        star[ci] = (rho / hk) if star_ok else 0.0
        edge_ratio[ci] = longest / hk
        if not star_ok:
            violations.append(f"A1: cell {ci} is not star-shaped from its centroid")

    min_star = float(star.min())
    min_edge = float(edge_ratio.min())
    quasi = float(mesh.h / mesh.cell_diameters.min())

    bidx = mesh.boundary_edge_indices
    blen = np.array([mesh.edge_length(int(e)) for e in bidx])
    buni = float(mesh.s / blen.min()) if bidx.size else 1.0

    max_gap = 0.0
    max_dev = 0.0
    max_dev_edge = 0.0
    msmp = thresholds.samples_per_edge
    for e in bidx:
        seg = mesh.boundary_segments.get(int(e))
        if seg is None:
            raise MeshError(f"boundary edge {e} lacks a curved segment")
        L = mesh.edge_length(int(e))
        xh = L * (np.arange(msmp) + 0.5) / msmp
        _, gamma, ntilde = seg.geometry(xh)
        dev = float(np.linalg.norm(ntilde - mesh.edge_normals[e][None, :], axis=1).max())
        gap = float(gamma.max())
        if mesh.s > 0.0:
            max_gap = max(max_gap, gap / mesh.s ** 2)
            max_dev = max(max_dev, dev / mesh.s)
        max_dev_edge = max(max_dev_edge, dev / L)
        g0 = float(seg.geometry(np.array([0.0, L]))[1].max())
        if g0 > 1e-12 * max(1.0, mesh.h):
            violations.append(f"A4: edge {e} endpoints off the curve (gap {g0:.2e})")

    checks = {
        "A1_star_shaped": min_star >= thresholds.min_star_ratio,
        "A2_edge_ratio": min_edge >= thresholds.min_edge_ratio,
        "A3_quasi_uniform": quasi <= thresholds.max_quasi_uniformity,
        "A4_gap": max_gap <= thresholds.max_gap_ratio,
        "A4_normal": max_dev <= thresholds.max_normal_deviation,
        "A5_boundary_uniform": buni <= thresholds.max_boundary_uniformity,
    }
    labels = {
        "A1_star_shaped": f"min star ratio {min_star:.4f}",
        "A2_edge_ratio": f"min longest-edge ratio {min_edge:.4f}",
        "A3_quasi_uniform": f"h/min h_K = {quasi:.3f}",
        "A4_gap": f"max gap/s^2 = {max_gap:.3f}",
        "A4_normal": f"max |ntilde-n|/s = {max_dev:.3f}",
        "A5_boundary_uniform": f"s/min boundary edge = {buni:.3f}",
    }
    for key, ok in checks.items():
        if not ok:
            violations.append(f"{key} failed: {labels[key]}")

    return MeshQualityReport(
        min_star_ratio=min_star,
        min_edge_ratio=min_edge,
        quasi_uniformity=quasi,
        boundary_uniformity=buni,
        max_gap_ratio=max_gap,
        max_normal_deviation=max_dev,
        max_normal_deviation_per_edge=max_dev_edge,
        checks=checks,
        violations=violations,
    )


# ---------------------------------------------------------------------------
# mesh file format (plain JSON text, 17 significant digits, round-trip exact)
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def mesh_to_text(mesh: PolygonalMesh) -> str:
    """Serialize to the documented JSON layout with 17-digit coordinates."""
    lines = ["{"]
    lines.append('"format": "wgmixed-mesh",')
    lines.append('"version": 1,')
    lines.append(f'"domain": {json.dumps(mesh.domain)},')
    vrows = ",\n".join(
        f"[{i},{_fmt(x)},{_fmt(y)}]" for i, (x, y) in enumerate(mesh.vertices)
    )
    lines.append(f'"vertices": [\n{vrows}\n],')
    crows = ",\n".join("[" + ",".join(str(int(v)) for v in loop) + "]" for loop in mesh.cells)
    lines.append(f'"cells": [\n{crows}\n],')
    brows = []
    for e in mesh.boundary_edge_indices:
        va, vb = int(mesh.edges[e, 0]), int(mesh.edges[e, 1])
        seg = mesh.boundary_segments[int(e)]
        if seg.curve_id == "circle":
            brows.append(
                f'[{va},{vb},"circle",{_fmt(seg.center[0])},{_fmt(seg.center[1])},{_fmt(seg.radius)}]'
            )
        else:
            brows.append(f'[{va},{vb},"flat"]')
    bjoined = ",\n".join(brows)
    lines.append(f'"boundary": [\n{bjoined}\n]')
    lines.append("}")
    return "\n".join(lines) + "\n"


def mesh_from_text(text: str) -> PolygonalMesh:
    data = json.loads(text)
    if data.get("format") != "wgmixed-mesh":
        raise MeshError("not a wgmixed mesh document")
    nv = len(data["vertices"])
    verts = np.empty((nv, 2))
    for row in data["vertices"]:
        verts[int(row[0])] = (float(row[1]), float(row[2]))
    curve_by_pair = {}
    for row in data["boundary"]:
        key = frozenset((int(row[0]), int(row[1])))
        curve_by_pair[key] = row[2:]
    vin = {(float(v[0]), float(v[1])): i for i, v in enumerate(verts)}

    def lookup(p0, p1):
        i0 = vin.get((float(p0[0]), float(p0[1])))
        i1 = vin.get((float(p1[0]), float(p1[1])))
        entry = curve_by_pair.get(frozenset((i0, i1)))
        if entry is None or entry[0] == "flat":
            return flat_segment(p0, p1)
        _, cx, cy, rad = entry
        return circle_segment(p0, p1, (float(cx), float(cy)), float(rad))

    return build_mesh(verts, data["cells"], curve_lookup=lookup,
                      domain=data.get("domain", "custom"))


def write_mesh(mesh: PolygonalMesh, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(mesh_to_text(mesh))


def read_mesh(path) -> PolygonalMesh:
    with open(path, "r", encoding="utf-8") as fh:
        return mesh_from_text(fh.read())
