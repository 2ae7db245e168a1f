"""Gauss quadrature on segments, triangles, and polygons.

Polygons are integrated by a signed fan split from the centroid: the fan
triangles (c, v_i, v_{i+1}) carry signed Jacobians, so the rule is exact for
globally defined integrands on any simple polygon, not just convex ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi


class MalformedCellError(ValueError):
    """Polygon unusable for integration (degenerate or self-cancelling area)."""


class MalformedEdgeError(ValueError):
    """Edge of (numerically) zero length."""


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights; integrates polynomials up to `exactness` exactly.

    The weights sum to the measure of the domain the rule was built for.
    """

    points: np.ndarray   # (m,) parameters on [0,1], or (m, 2) planar points
    weights: np.ndarray  # (m,)
    exactness: int


@lru_cache(maxsize=64)
def segment_rule(order: int) -> QuadratureRule:
    """Gauss-Legendre rule on [0, 1], exact for degree <= order."""
    if order < 0:
        raise ValueError(f"quadrature order must be nonnegative, got {order}")
    n = max(1, math.ceil((order + 1) / 2))
    x, w = leggauss(n)
    return QuadratureRule((x + 1.0) / 2.0, w / 2.0, 2 * n - 1)


@lru_cache(maxsize=64)
def triangle_rule(order: int) -> QuadratureRule:
    """Conical-product Gauss rule on the reference triangle (0,0),(1,0),(0,1).

    Gauss-Jacobi nodes with weight (1-x) in the collapsed direction make the
    rule exact for total degree <= order using ceil((order+1)/2)^2 points.
    """
    if order < 0:
        raise ValueError(f"quadrature order must be nonnegative, got {order}")
    n = max(1, math.ceil((order + 1) / 2))
    xj, wj = roots_jacobi(n, 1, 0)
    xi = (xj + 1.0) / 2.0
    wi = wj / 4.0
    xe, we = leggauss(n)
    eta = (xe + 1.0) / 2.0
    we = we / 2.0
    R, S = np.meshgrid(xi, eta, indexing="ij")
    pts = np.column_stack([R.ravel(), (S * (1.0 - R)).ravel()])
    wts = (wi[:, None] * we[None, :]).ravel()
    return QuadratureRule(pts, wts, 2 * n - 1)


def polygon_area(vertices) -> float:
    """Signed (shoelace) area of a polygon given as an (m, 2) vertex loop."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def polygon_centroid(vertices) -> np.ndarray:
    """Area centroid of a simple polygon."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    cross = x * np.roll(y, -1) - np.roll(x, -1) * y
    area = 0.5 * float(cross.sum())
    scale = max(float(np.ptp(x)), float(np.ptp(y)), 1e-300)
    if abs(area) <= 1e-14 * scale * scale:
        raise MalformedCellError("polygon has (numerically) zero area")
    cx = float(np.sum((x + np.roll(x, -1)) * cross)) / (6.0 * area)
    cy = float(np.sum((y + np.roll(y, -1)) * cross)) / (6.0 * area)
    return np.array([cx, cy])


def polygon_rule(vertices, order: int, fan_point=None) -> QuadratureRule:
    """Signed centroid-fan rule over a simple polygon.

    A nonpositive total signed area (wrong orientation, or a self-intersecting
    loop whose lobes cancel) raises MalformedCellError.
    """
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[0] < 3 or v.shape[1] != 2:
        raise MalformedCellError("polygon needs at least 3 planar vertices")
    x, y = v[:, 0], v[:, 1]
    scale = max(float(np.ptp(x)), float(np.ptp(y)), 1e-300)
    area = polygon_area(v)
    if area <= 1e-14 * scale * scale:
        raise MalformedCellError(
            f"polygon area {area:.3e} is not positive (CCW simple loop required)"
        )
    c = polygon_centroid(v) if fan_point is None else np.asarray(fan_point, dtype=float)
    ref = triangle_rule(order)
    m = v.shape[0]
    pts = np.empty((m * ref.points.shape[0], 2))
    wts = np.empty(m * ref.points.shape[0])
    k = ref.points.shape[0]
    for i in range(m):
        a = v[i] - c
        b = v[(i + 1) % m] - c
        det = a[0] * b[1] - a[1] * b[0]
        pts[i * k:(i + 1) * k] = c + np.outer(ref.points[:, 0], a) + np.outer(ref.points[:, 1], b)
        wts[i * k:(i + 1) * k] = ref.weights * det
    return QuadratureRule(pts, wts, ref.exactness)


def integrate_cell(vertices, f, order: int) -> float:
    """Integrate the scalar field f(x, y) over a simple polygon."""
    rule = polygon_rule(vertices, order)
    vals = np.asarray(f(rule.points[:, 0], rule.points[:, 1]), dtype=float)
    return float(rule.weights @ vals)


def edge_rule(p0, p1, order: int):
    """Gauss points along the segment p0 -> p1.

    Returns (points (m,2), weights (m,) carrying arclength, params t (m,)).
    """
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    d = p1 - p0
    length = float(np.hypot(d[0], d[1]))
    scale = float(np.abs(p0).max() + np.abs(p1).max() + 1.0)
    if length <= 1e-15 * scale:
        raise MalformedEdgeError("edge has zero length")
    base = segment_rule(order)
    pts = p0 + base.points[:, None] * d
    return pts, base.weights * length, base.points


def integrate_edge(p0, p1, f, order: int) -> float:
    """Integrate the scalar field f(x, y) along the segment p0 -> p1."""
    pts, w, _ = edge_rule(p0, p1, order)
    vals = np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float)
    return float(w @ vals)
