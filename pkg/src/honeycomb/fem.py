"""Piecewise-linear finite elements for the Dirichlet Laplacian on convex polygons."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu
from scipy.spatial import Delaunay

from .errors import SolverFailure
from .geometry import ConvexPolygon

MIN_TRIANGLES = 200


@dataclass(frozen=True)
class Mesh:
    points: np.ndarray
    triangles: np.ndarray
    boundary: np.ndarray  # bool mask over points
    h: float

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)


def mesh_polygon(P: ConvexPolygon, h: float) -> Mesh:
    """Boundary nodes at spacing ``h`` plus an equilateral lattice inside.

    Lattice nodes closer than ``h/2`` to the boundary are dropped so that no
    sliver appears next to a boundary node; the points are then Delaunay
    triangulated, which for a convex node cloud fills the polygon exactly.
    """
    if not (h > 0 and math.isfinite(h)):
        raise SolverFailure(f"mesh size must be positive, got {h}")
    verts = P.vertices
    bnd = []
    for i in range(len(verts)):
        a, b = verts[i], verts[(i + 1) % len(verts)]
        m = max(1, int(math.ceil(np.linalg.norm(b - a) / h)))
        s = np.arange(m)[:, None] / m
        bnd.append(a + s * (b - a))
    bnd = np.vstack(bnd)

    hp = np.array(P.halfplanes())
    lo, hi = verts.min(0), verts.max(0)
    dy = h * math.sqrt(3.0) / 2.0
    rows = np.arange(math.floor(lo[1] / dy), math.ceil(hi[1] / dy) + 1)
    pts = []
    for j in rows:
        x0 = 0.5 * h * (j % 2)
        xs = np.arange(math.floor((lo[0] - x0) / h), math.ceil((hi[0] - x0) / h) + 1) * h + x0
        pts.append(np.column_stack([xs, np.full_like(xs, j * dy)]))
    lat = np.vstack(pts)
    dist = (hp[:, 2][None, :] - lat @ hp[:, :2].T).min(axis=1)
    lat = lat[dist >= 0.5 * h]

    points = np.vstack([bnd, lat])
    try:
        tri = Delaunay(points)
    except Exception as exc:  # qhull errors carry their own message
        raise SolverFailure(f"triangulation failed: {exc}") from exc
    simplices = tri.simplices
    e1 = points[simplices[:, 1]] - points[simplices[:, 0]]
    e2 = points[simplices[:, 2]] - points[simplices[:, 0]]
    area = 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    keep = np.abs(area) > 1e-12 * h * h
    boundary = np.zeros(len(points), dtype=bool)
    boundary[: len(bnd)] = True
    return Mesh(points, simplices[keep], boundary, h)


def assemble(mesh: Mesh):
    """Stiffness and lumped-free (consistent) mass matrices."""
    p, t = mesh.points, mesh.triangles
    x, y = p[t, 0], p[t, 1]
    # gradients of barycentric coordinates
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    area = 0.5 * np.abs(b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    ke = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (4.0 * area[:, None, None])
    me = (np.ones((3, 3)) + np.eye(3))[None] * (area / 12.0)[:, None, None]
    rows = np.repeat(t, 3, axis=1).ravel()
    cols = np.tile(t, (1, 3)).ravel()
    n = len(p)
    K = sp.csc_matrix((ke.ravel(), (rows, cols)), shape=(n, n))
    M = sp.csc_matrix((me.ravel(), (rows, cols)), shape=(n, n))
    return K, M


def smallest_eigenvalue(K, M, rtol: float = 1e-10, max_iter: int = 500) -> tuple:
    """Inverse power iteration with shift 0; returns ``(value, vector)``."""
    lu = splu(K.tocsc())
    v = np.ones(K.shape[0])
    lam_old = math.inf
    for _ in range(max_iter):
        w = lu.solve(M @ v)
        lam = float(w @ (K @ w)) / float(w @ (M @ w))
        v = w / math.sqrt(float(w @ (M @ w)))
        if abs(lam - lam_old) <= rtol * abs(lam):
            return lam, v
        lam_old = lam
    raise SolverFailure("inverse iteration did not converge")


def dirichlet_eigenvalue(P: ConvexPolygon, h: float) -> tuple:
    """``(lambda_1, mesh)`` for the polygon at target mesh size ``h``."""
    mesh = mesh_polygon(P, h)
    if mesh.n_triangles < MIN_TRIANGLES:
        raise SolverFailure(f"mesh has {mesh.n_triangles} triangles, need at least {MIN_TRIANGLES}")
    K, M = assemble(mesh)
    free = np.nonzero(~mesh.boundary)[0]
    K = K[free][:, free]
    M = M[free][:, free]
    lam, _ = smallest_eigenvalue(K, M)
    return lam, mesh
