"""Lowest-order rectangular edge elements on the unit square.

Mesh and spaces
---------------
Uniform nx-by-ny grid on (0,1)^2.  The electric field E and polarization P
live in the curl-conforming edge space: horizontal edges carry the
x-component dof, vertical edges the y-component dof, each the tangential
value at the edge midpoint.  On a cell the x-component is constant in x and
a linear hat in y (and symmetrically for the y-component).  The magnetic
field H is piecewise constant, one dof per cell.

Enumeration is deterministic and x-fastest: horizontal edges first
(ix + iy*nx, iy = 0..ny), then vertical edges (ix + iy*(nx+1), iy = 0..ny-1)
after an offset of nx*(ny+1).  Cells and nodes are likewise row-major.

The perfect-conductor condition (vanishing tangential trace) constrains the
horizontal edges on y in {0,1} and the vertical edges on x in {0,1}; those
rows/columns are eliminated symmetrically, keeping the reduced edge mass
matrix symmetric positive definite.

2D curl conventions: for a scalar field, curl H = (dH/dy, -dH/dx); for a
vector field, curl E = dE2/dx - dE1/dy.  The curl matrix C maps edge dofs to
cell dofs with entries integral_K curl(phi_j), i.e. the counterclockwise
circulation (+hx bottom, -hx top, -hy left, +hy right).

All integrals that are not closed form use a 3x3 Gauss rule per cell, exact
for every polynomial integrand that appears at this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
import scipy.sparse as sp

__all__ = [
    "MaxwellMesh",
    "FieldVectors",
    "AssembledOperators",
    "build_mesh",
    "assemble",
    "interpolate_E",
    "interpolate_H",
    "l2_error",
    "assemble_edge_load",
    "assemble_cell_load",
]

# 3-point Gauss-Legendre on [-1, 1]
_GAUSS_X = np.array([-np.sqrt(3.0 / 5.0), 0.0, np.sqrt(3.0 / 5.0)])
_GAUSS_W = np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])

VectorField = Callable[[np.ndarray, np.ndarray, float], tuple[np.ndarray, np.ndarray]]
ScalarField = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class MaxwellMesh:
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"cell counts must be >= 1, got {self.nx}x{self.ny}")

    @property
    def hx(self) -> float:
        return 1.0 / self.nx

    @property
    def hy(self) -> float:
        return 1.0 / self.ny

    @property
    def n_horizontal(self) -> int:
        return self.nx * (self.ny + 1)

    @property
    def n_edges(self) -> int:
        return self.nx * (self.ny + 1) + (self.nx + 1) * self.ny

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def n_nodes(self) -> int:
        return (self.nx + 1) * (self.ny + 1)

    def horizontal_edge(self, ix, iy):
        return iy * self.nx + ix

    def vertical_edge(self, ix, iy):
        return self.n_horizontal + iy * (self.nx + 1) + ix

    def node(self, ix, iy):
        return iy * (self.nx + 1) + ix

    @cached_property
    def cell_edges(self) -> dict[str, np.ndarray]:
        """Bottom/top/left/right edge index per cell, row-major over cells."""
        ix, iy = np.meshgrid(np.arange(self.nx), np.arange(self.ny), indexing="xy")
        ix, iy = ix.ravel(), iy.ravel()
        return {
            "bottom": self.horizontal_edge(ix, iy),
            "top": self.horizontal_edge(ix, iy + 1),
            "left": self.vertical_edge(ix, iy),
            "right": self.vertical_edge(ix + 1, iy),
        }

    @cached_property
    def cell_origin(self) -> tuple[np.ndarray, np.ndarray]:
        """Lower-left corner coordinates of every cell."""
        ix, iy = np.meshgrid(np.arange(self.nx), np.arange(self.ny), indexing="xy")
        return ix.ravel() * self.hx, iy.ravel() * self.hy

    @cached_property
    def boundary_edges(self) -> np.ndarray:
        """Edges with constrained (tangential) dofs, sorted."""
        idx = []
        ix = np.arange(self.nx)
        idx.append(self.horizontal_edge(ix, 0))
        idx.append(self.horizontal_edge(ix, self.ny))
        iy = np.arange(self.ny)
        idx.append(self.vertical_edge(0, iy))
        idx.append(self.vertical_edge(self.nx, iy))
        return np.unique(np.concatenate(idx))

    @cached_property
    def free_edges(self) -> np.ndarray:
        mask = np.ones(self.n_edges, dtype=bool)
        mask[self.boundary_edges] = False
        return np.flatnonzero(mask)

    @cached_property
    def edge_midpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """Midpoint coordinates of every edge, horizontal block first."""
        x = np.empty(self.n_edges)
        y = np.empty(self.n_edges)
        ix, iy = np.meshgrid(np.arange(self.nx), np.arange(self.ny + 1), indexing="xy")
        h = self.horizontal_edge(ix.ravel(), iy.ravel())
        x[h] = (ix.ravel() + 0.5) * self.hx
        y[h] = iy.ravel() * self.hy
        ix, iy = np.meshgrid(np.arange(self.nx + 1), np.arange(self.ny), indexing="xy")
        v = self.vertical_edge(ix.ravel(), iy.ravel())
        x[v] = ix.ravel() * self.hx
        y[v] = (iy.ravel() + 0.5) * self.hy
        return x, y


@dataclass
class FieldVectors:
    """Full-length dof vectors for E, P (edges) and H (cells).

    Constrained boundary entries of e and p stay exactly zero throughout.
    """

    e: np.ndarray
    p: np.ndarray
    h: np.ndarray

    @classmethod
    def zeros(cls, mesh: MaxwellMesh) -> "FieldVectors":
        return cls(
            e=np.zeros(mesh.n_edges),
            p=np.zeros(mesh.n_edges),
            h=np.zeros(mesh.n_cells),
        )


@dataclass(frozen=True)
class AssembledOperators:
    """Mass and curl matrices of the edge/cell pair of spaces.

    ``m_e`` and ``c`` act on the free (unconstrained) edge dofs; the _full
    variants act on all edges and back the structural identities and norms
    (fields keep zeros on constrained entries, so both give equal norms).
    """

    mesh: MaxwellMesh
    m_e: sp.csr_matrix
    m_e_full: sp.csr_matrix
    m_h_diag: np.ndarray
    c: sp.csr_matrix
    c_full: sp.csr_matrix
    grad_full: sp.csr_matrix
    free_edges: np.ndarray

    def edge_norm(self, v: np.ndarray) -> float:
        """L2 norm of an edge-dof field."""
        return float(np.sqrt(max(v @ (self.m_e_full @ v), 0.0)))

    def cell_norm(self, v: np.ndarray) -> float:
        """L2 norm of a cell-dof field."""
        return float(np.sqrt(max(v @ (self.m_h_diag * v), 0.0)))


def build_mesh(nx: int, ny: int) -> MaxwellMesh:
    return MaxwellMesh(nx=nx, ny=ny)


def assemble(mesh: MaxwellMesh) -> AssembledOperators:
    """Assemble mass, curl and discrete-gradient matrices for the mesh."""
    area = mesh.hx * mesh.hy
    ce = mesh.cell_edges
    bot, top, left, right = ce["bottom"], ce["top"], ce["left"], ce["right"]

    # Edge mass: per cell, the two parallel-edge hats couple as
    # area * [[1/3, 1/6], [1/6, 1/3]]; perpendicular components are L2-orthogonal.
    rows, cols, vals = [], [], []
    for a, b in ((bot, top), (left, right)):
        rows += [a, b, a, b]
        cols += [a, b, b, a]
        vals += [
            np.full(mesh.n_cells, area / 3.0),
            np.full(mesh.n_cells, area / 3.0),
            np.full(mesh.n_cells, area / 6.0),
            np.full(mesh.n_cells, area / 6.0),
        ]
    m_e_full = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(mesh.n_edges, mesh.n_edges),
    ).tocsr()

    # Curl matrix: row per cell, counterclockwise circulation of the edge dofs.
    cells = np.arange(mesh.n_cells)
    c_rows = np.concatenate([cells] * 4)
    c_cols = np.concatenate([bot, top, left, right])
    c_vals = np.concatenate(
        [
            np.full(mesh.n_cells, mesh.hx),
            np.full(mesh.n_cells, -mesh.hx),
            np.full(mesh.n_cells, -mesh.hy),
            np.full(mesh.n_cells, mesh.hy),
        ]
    )
    c_full = sp.coo_matrix(
        (c_vals, (c_rows, c_cols)), shape=(mesh.n_cells, mesh.n_edges)
    ).tocsr()

    # Node-to-edge gradient: tangential slope along each edge.
    ix, iy = np.meshgrid(np.arange(mesh.nx), np.arange(mesh.ny + 1), indexing="xy")
    ix, iy = ix.ravel(), iy.ravel()
    g_rows = [mesh.horizontal_edge(ix, iy)] * 2
    g_cols = [mesh.node(ix + 1, iy), mesh.node(ix, iy)]
    g_vals = [np.full(ix.size, 1.0 / mesh.hx), np.full(ix.size, -1.0 / mesh.hx)]
    ix, iy = np.meshgrid(np.arange(mesh.nx + 1), np.arange(mesh.ny), indexing="xy")
    ix, iy = ix.ravel(), iy.ravel()
    g_rows += [mesh.vertical_edge(ix, iy)] * 2
    g_cols += [mesh.node(ix, iy + 1), mesh.node(ix, iy)]
    g_vals += [np.full(ix.size, 1.0 / mesh.hy), np.full(ix.size, -1.0 / mesh.hy)]
    grad_full = sp.coo_matrix(
        (np.concatenate(g_vals), (np.concatenate(g_rows), np.concatenate(g_cols))),
        shape=(mesh.n_edges, mesh.n_nodes),
    ).tocsr()

    free = mesh.free_edges
    return AssembledOperators(
        mesh=mesh,
        m_e=m_e_full[free][:, free].tocsr(),
        m_e_full=m_e_full,
        m_h_diag=np.full(mesh.n_cells, area),
        c=c_full[:, free].tocsr(),
        c_full=c_full,
        grad_full=grad_full,
        free_edges=free,
    )


def interpolate_E(mesh: MaxwellMesh, field: VectorField, t: float = 0.0) -> np.ndarray:
    """Edge interpolant: tangential component of the field at edge midpoints."""
    x, y = mesh.edge_midpoints
    fx, fy = field(x, y, t)
    dofs = np.empty(mesh.n_edges)
    nh = mesh.n_horizontal
    dofs[:nh] = np.broadcast_to(fx, (mesh.n_edges,))[:nh]
    dofs[nh:] = np.broadcast_to(fy, (mesh.n_edges,))[nh:]
    return dofs


def interpolate_H(mesh: MaxwellMesh, field: ScalarField, t: float = 0.0) -> np.ndarray:
    """Cell interpolant: field value at cell centers."""
    x0, y0 = mesh.cell_origin
    vals = field(x0 + 0.5 * mesh.hx, y0 + 0.5 * mesh.hy, t)
    return np.broadcast_to(np.asarray(vals, dtype=float), (mesh.n_cells,)).copy()


def _gauss_points(mesh: MaxwellMesh):
    """Yield (x, y, xhat, yhat, weight) per Gauss point; x, y span all cells."""
    x0, y0 = mesh.cell_origin
    for p in range(3):
        xhat = 0.5 * (_GAUSS_X[p] + 1.0)
        for q in range(3):
            yhat = 0.5 * (_GAUSS_X[q] + 1.0)
            yield (
                x0 + xhat * mesh.hx,
                y0 + yhat * mesh.hy,
                xhat,
                yhat,
                _GAUSS_W[p] * _GAUSS_W[q],
            )


def _edge_values_at(mesh: MaxwellMesh, dofs: np.ndarray, xhat: float, yhat: float):
    """Per-cell (E1, E2) of an edge-dof field at a fixed reference point."""
    ce = mesh.cell_edges
    e1 = dofs[ce["bottom"]] * (1.0 - yhat) + dofs[ce["top"]] * yhat
    e2 = dofs[ce["left"]] * (1.0 - xhat) + dofs[ce["right"]] * xhat
    return e1, e2


def l2_error(
    mesh: MaxwellMesh,
    dofs: np.ndarray,
    exact,
    t: float,
    kind: str,
) -> float:
    """L2 distance between a discrete field and an exact closure at time t.

    ``kind`` selects the space: "edge" for E/P vector fields, "cell" for H.
    """
    jac = 0.25 * mesh.hx * mesh.hy
    acc = np.zeros(mesh.n_cells)
    if kind == "edge":
        for x, y, xhat, yhat, w in _gauss_points(mesh):
            ex, ey = exact(x, y, t)
            d1, d2 = _edge_values_at(mesh, dofs, xhat, yhat)
            acc += w * ((ex - d1) ** 2 + (ey - d2) ** 2)
    elif kind == "cell":
        for x, y, _, _, w in _gauss_points(mesh):
            acc += w * (exact(x, y, t) - dofs) ** 2
    else:
        raise ValueError(f"kind must be 'edge' or 'cell', got {kind!r}")
    return float(np.sqrt(jac * acc.sum()))


def assemble_edge_load(mesh: MaxwellMesh, field: VectorField, t: float) -> np.ndarray:
    """Load vector (f, phi_i) against every edge basis function."""
    ce = mesh.cell_edges
    jac = 0.25 * mesh.hx * mesh.hy
    load = np.zeros(mesh.n_edges)
    for x, y, xhat, yhat, w in _gauss_points(mesh):
        fx, fy = field(x, y, t)
        fx = np.broadcast_to(fx, (mesh.n_cells,))
        fy = np.broadcast_to(fy, (mesh.n_cells,))
        np.add.at(load, ce["bottom"], jac * w * fx * (1.0 - yhat))
        np.add.at(load, ce["top"], jac * w * fx * yhat)
        np.add.at(load, ce["left"], jac * w * fy * (1.0 - xhat))
        np.add.at(load, ce["right"], jac * w * fy * xhat)
    return load


def assemble_cell_load(mesh: MaxwellMesh, field: ScalarField, t: float) -> np.ndarray:
    """Load vector (f, psi_K) against the piecewise-constant cell basis."""
    jac = 0.25 * mesh.hx * mesh.hy
    load = np.zeros(mesh.n_cells)
    for x, y, _, _, w in _gauss_points(mesh):
        load += jac * w * np.broadcast_to(field(x, y, t), (mesh.n_cells,))
    return load
