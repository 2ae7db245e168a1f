"""Scaled monomial bases on cells, shifted monomials on edges, L2 projections.

Cell bases are monomials ((x-cx)/h_K)^a ((y-cy)/h_K)^b centered at the cell
centroid and scaled by the cell diameter, which keeps mass matrices uniformly
conditioned on shape-regular polygons.  Edge bases are (t-1/2)^k in the
arclength fraction t of the (globally oriented) edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import (
    MalformedCellError,
    edge_rule,
    polygon_centroid,
    polygon_rule,
)


def poly_dim(degree: int) -> int:
    """Dimension of P_degree in two variables."""
    return (degree + 1) * (degree + 2) // 2


def graded_lex_exponents(degree: int) -> np.ndarray:
    """Exponent pairs (a, b), a+b <= degree, graded and x-major within a grade."""
    return np.array(
        [(a, g - a) for g in range(degree + 1) for a in range(g, -1, -1)],
        dtype=np.int64,
    )


def cell_diameter(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    d2 = ((v[:, None, :] - v[None, :, :]) ** 2).sum(axis=2)
    return float(np.sqrt(d2.max()))


@dataclass(frozen=True)
class CellBasis:
    """Scaled monomial basis of P_degree on a cell."""

    degree: int
    center: np.ndarray
    scale: float
    exponents: np.ndarray

    @property
    def dim(self) -> int:
        return self.exponents.shape[0]

    def eval(self, x, y) -> np.ndarray:
        """Basis values at points; shape (npoints, dim)."""
        X = (np.asarray(x, dtype=float) - self.center[0]) / self.scale
        Y = (np.asarray(y, dtype=float) - self.center[1]) / self.scale
        a = self.exponents[:, 0][None, :]
        b = self.exponents[:, 1][None, :]
        return X[:, None] ** a * Y[:, None] ** b

    def grad(self, x, y) -> np.ndarray:
        """Basis gradients at points; shape (npoints, dim, 2)."""
        X = (np.asarray(x, dtype=float) - self.center[0]) / self.scale
        Y = (np.asarray(y, dtype=float) - self.center[1]) / self.scale
        a = self.exponents[:, 0]
        b = self.exponents[:, 1]
        am1 = np.maximum(a - 1, 0)[None, :]
        bm1 = np.maximum(b - 1, 0)[None, :]
        Xa = X[:, None] ** a[None, :]
        Yb = Y[:, None] ** b[None, :]
        out = np.empty((X.shape[0], self.dim, 2))
        out[:, :, 0] = (a[None, :] / self.scale) * X[:, None] ** am1 * Yb
        out[:, :, 1] = (b[None, :] / self.scale) * Xa * Y[:, None] ** bm1
        return out


def cell_basis(vertices, degree: int) -> CellBasis:
    """Centroid-centered, diameter-scaled monomial basis for a polygon."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    return CellBasis(
        degree=degree,
        center=polygon_centroid(vertices),
        scale=cell_diameter(vertices),
        exponents=graded_lex_exponents(degree),
    )


@dataclass(frozen=True)
class EdgeBasis:
    """Shifted monomials (t - 1/2)^k, k = 0..degree, t = arclength fraction."""

    degree: int

    @property
    def dim(self) -> int:
        return self.degree + 1

    def eval(self, t) -> np.ndarray:
        tt = np.asarray(t, dtype=float) - 0.5
        return tt[:, None] ** np.arange(self.degree + 1)[None, :]


def cell_mass_matrix(vertices, basis: CellBasis, order: int | None = None) -> np.ndarray:
    """Gram matrix of a cell basis in L2(K)."""
    order = 2 * basis.degree if order is None else max(order, 2 * basis.degree)
    rule = polygon_rule(vertices, order)
    V = basis.eval(rule.points[:, 0], rule.points[:, 1])
    return V.T @ (rule.weights[:, None] * V)


def project_cell(vertices, f, degree: int, order: int | None = None,
                 basis: CellBasis | None = None) -> np.ndarray:
    """Coefficients of the L2(K)-orthogonal projection of f onto P_degree.

    The default quadrature order (2*degree) is exact when f is itself a
    polynomial of degree <= degree; pass a higher order for general fields.
    """
    if basis is None:
        basis = cell_basis(vertices, degree)
    order = 2 * degree if order is None else max(order, 2 * degree)
    rule = polygon_rule(vertices, order)
    V = basis.eval(rule.points[:, 0], rule.points[:, 1])
    M = V.T @ (rule.weights[:, None] * V)
    rhs = V.T @ (rule.weights * np.asarray(f(rule.points[:, 0], rule.points[:, 1]), dtype=float))
    try:
        return np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise MalformedCellError(f"singular cell mass matrix: {exc}") from exc


def project_edge(p0, p1, f, degree: int, order: int | None = None) -> np.ndarray:
    """Coefficients of the L2(e) projection of f onto P_degree on edge p0 -> p1."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    order = 2 * degree if order is None else max(order, 2 * degree)
    pts, w, t = edge_rule(p0, p1, order)
    E = EdgeBasis(degree).eval(t)
    M = E.T @ (w[:, None] * E)
    rhs = E.T @ (w * np.asarray(f(pts[:, 0], pts[:, 1]), dtype=float))
    return np.linalg.solve(M, rhs)
