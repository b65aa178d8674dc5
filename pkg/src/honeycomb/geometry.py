"""Planar convex geometry.

Convex polygons with half-plane clipping and inner parallel sets, the tiling
of the plane by unit-area regular hexagons (pointy-top, axial coordinates,
cell ``(0, 0)`` centred at the origin), dilation radii of a domain with
respect to that tiling, inner hexagonal structures and their convex
envelopes.

Polygons are immutable; every operation returns a new object.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .errors import DegenerateGeometry, InvalidArgument

DEFAULT_TOLERANCE = 1e-9
ANGLE_TOLERANCE = 1e-9
EMPTY_AREA = 1e-12
CONTAINMENT_RTOL = 1e-12

HEX_SIDE = math.sqrt(2.0 / (3.0 * math.sqrt(3.0)))
AXIAL_DIRECTIONS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
_HEX_OFFSETS = np.array(
    [[HEX_SIDE * math.cos(math.pi / 6 + i * math.pi / 3),
      HEX_SIDE * math.sin(math.pi / 6 + i * math.pi / 3)] for i in range(6)]
)
# Edge normals of a pointy-top hexagon, one per parallel pair.
_HEX_AXES = np.array([[math.cos(a), math.sin(a)] for a in (0.0, math.pi / 3, 2 * math.pi / 3)])


# --------------------------------------------------------------------------
# raw helpers on sequences of (x, y) tuples; used on the hot paths

def _signed_area(pts) -> float:
    s = 0.0
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i - 1]
        x1, y1 = pts[i]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _perimeter(pts) -> float:
    return sum(math.hypot(pts[i][0] - pts[i - 1][0], pts[i][1] - pts[i - 1][1])
               for i in range(len(pts)))


def _halfplanes(pts):
    """Outward unit normals and offsets ``(nx, ny, c)`` of a CCW polygon."""
    out = []
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        dx, dy = x1 - x0, y1 - y0
        length = math.hypot(dx, dy)
        if length == 0.0:
            continue
        nx, ny = dy / length, -dx / length
        out.append((nx, ny, nx * x0 + ny * y0))
    return out


def _clip_halfplane(pts, nx, ny, c):
    """Keep the part of a convex polygon where ``nx*x + ny*y <= c``."""
    if not pts:
        return pts
    out = []
    prev = pts[-1]
    sp = nx * prev[0] + ny * prev[1] - c
    for cur in pts:
        sc = nx * cur[0] + ny * cur[1] - c
        if sc <= 0.0:
            if sp > 0.0:
                t = sp / (sp - sc)
                out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
            out.append(cur)
        elif sp < 0.0:
            t = sp / (sp - sc)
            out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
        prev, sp = cur, sc
    return out


def _clip_many(pts, planes):
    for nx, ny, c in planes:
        pts = _clip_halfplane(pts, nx, ny, c)
        if len(pts) < 3:
            return []
    return pts


def _dedupe(pts, eps):
    out = []
    for p in pts:
        if not out or abs(p[0] - out[-1][0]) > eps or abs(p[1] - out[-1][1]) > eps:
            out.append(p)
    while len(out) > 1 and abs(out[0][0] - out[-1][0]) <= eps and abs(out[0][1] - out[-1][1]) <= eps:
        out.pop()
    return out


def _count_sides(pts, angle_tol=ANGLE_TOLERANCE) -> int:
    n = len(pts)
    corners = 0
    for i in range(n):
        ax, ay = pts[i][0] - pts[i - 1][0], pts[i][1] - pts[i - 1][1]
        bx, by = pts[(i + 1) % n][0] - pts[i][0], pts[(i + 1) % n][1] - pts[i][1]
        if (ax == 0.0 and ay == 0.0) or (bx == 0.0 and by == 0.0):
            continue
        turn = math.atan2(ax * by - ay * bx, ax * bx + ay * by)
        if abs(turn) > angle_tol:
            corners += 1
    return corners


# --------------------------------------------------------------------------
# polygons

@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Convex polygon stored as a counterclockwise vertex loop.

    Clockwise input is reversed. ``tolerance`` is relative: consecutive
    vertices closer than ``tolerance * diameter`` are rejected, turns with
    normalized cross product below ``-tolerance`` break convexity, and an area
    below ``tolerance * diameter**2`` is degenerate.
    """

    vertices: np.ndarray
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise InvalidArgument(f"vertices must have shape (n, 2), got {v.shape}")
        if len(v) < 3:
            raise InvalidArgument("a polygon needs at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidArgument("vertex coordinates must be finite")
        if self.tolerance < 0:
            raise InvalidArgument("tolerance must be nonnegative")
        pts = [tuple(p) for p in v.tolist()]
        if _signed_area(pts) < 0:
            v = v[::-1].copy()
            pts.reverse()
        diam = float(np.max(np.ptp(v, axis=0)))
        tol = self.tolerance
        edges = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(edges[:, 0], edges[:, 1])
        if diam == 0.0 or np.any(lengths <= tol * diam):
            raise DegenerateGeometry("consecutive vertices coincide")
        nxt = np.roll(edges, -1, axis=0)
        cross = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
        if np.any(cross < -tol * lengths * np.roll(lengths, -1)):
            raise DegenerateGeometry("polygon is not convex")
        area = _signed_area(pts)
        if area <= tol * diam * diam:
            raise DegenerateGeometry(f"degenerate polygon (area {area:.3e})")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "_pts", tuple(tuple(p) for p in v.tolist()))
        object.__setattr__(self, "_area", area)

    @classmethod
    def from_points(cls, points, tolerance: float = DEFAULT_TOLERANCE) -> "ConvexPolygon":
        """Convex hull of an arbitrary point set."""
        pts = np.asarray(points, dtype=float)
        hull = ConvexHull(pts)
        return cls(pts[hull.vertices], tolerance)

    @property
    def points(self) -> tuple:
        return self._pts

    @property
    def area(self) -> float:
        return self._area

    @property
    def perimeter(self) -> float:
        return _perimeter(self._pts)

    @property
    def n_sides(self) -> int:
        return _count_sides(self._pts)

    @property
    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d ** 2).sum(-1)).max())

    @property
    def centroid(self) -> np.ndarray:
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        cross = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
        return ((v + w) * cross[:, None]).sum(0) / (6.0 * self._area)

    def halfplanes(self) -> list:
        """``[(nx, ny, c), ...]`` with the polygon equal to ``{n.x <= c}``."""
        return _halfplanes(self._pts)

    def contains_point(self, p, tol: float = 0.0) -> bool:
        return all(nx * p[0] + ny * p[1] <= c + tol for nx, ny, c in self.halfplanes())

    def translate(self, dx: float, dy: float) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.array([dx, dy]), self.tolerance)

    def scale(self, t: float, center=(0.0, 0.0)) -> "ConvexPolygon":
        if t <= 0:
            raise InvalidArgument("scale factor must be positive")
        c = np.asarray(center, dtype=float)
        return ConvexPolygon(c + t * (self.vertices - c), self.tolerance)

    def rotate(self, angle: float, center=(0.0, 0.0)) -> "ConvexPolygon":
        c = np.asarray(center, dtype=float)
        rot = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
        return ConvexPolygon(c + (self.vertices - c) @ rot.T, self.tolerance)

    def to_json(self) -> dict:
        return {"vertices": self.vertices.tolist()}

    @classmethod
    def from_json(cls, data: dict, tolerance: float = DEFAULT_TOLERANCE) -> "ConvexPolygon":
        try:
            verts = data["vertices"]
        except (KeyError, TypeError) as exc:
            raise InvalidArgument("polygon JSON needs a 'vertices' list") from exc
        return cls(np.asarray(verts, dtype=float), tolerance)

    def __repr__(self) -> str:
        return f"ConvexPolygon(n={len(self._pts)}, area={self._area:.6g})"


def polygon_from_raw(pts, tolerance: float = DEFAULT_TOLERANCE):
    """Build a polygon from clipping output; ``None`` when it is empty."""
    if len(pts) < 3:
        return None
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    scale = max(max(xs) - min(xs), max(ys) - min(ys))
    if scale == 0.0:
        return None
    pts = _dedupe(pts, 2.0 * max(tolerance, 1e-13) * scale)
    if len(pts) < 3 or abs(_signed_area(pts)) <= EMPTY_AREA:
        return None
    try:
        return ConvexPolygon(np.array(pts), tolerance)
    except DegenerateGeometry:
        return None


class Measure(NamedTuple):
    area: float
    perimeter: float
    n_sides: int
    is_convex: bool


def measure(P: ConvexPolygon) -> Measure:
    """Shoelace area, perimeter and the number of maximal straight edges."""
    pts = P.points
    area = _signed_area(pts)
    if area <= P.tolerance * P.diameter ** 2:
        raise DegenerateGeometry("degenerate polygon")
    return Measure(area, _perimeter(pts), _count_sides(pts), True)


def regular_polygon(n: int, area: float = 1.0, center=(0.0, 0.0), phase: float = math.pi / 2) -> ConvexPolygon:
    """Regular ``n``-gon of the given area with a vertex at angle ``phase``.

    With the default phase the hexagon coincides with tiling cell ``(0, 0)``.
    """
    if int(n) != n or n < 3:
        raise InvalidArgument(f"n must be an integer >= 3, got {n}")
    if area <= 0:
        raise InvalidArgument("area must be positive")
    n = int(n)
    radius = math.sqrt(2.0 * area / (n * math.sin(2.0 * math.pi / n)))
    ang = phase + 2.0 * math.pi * np.arange(n) / n
    verts = np.column_stack([center[0] + radius * np.cos(ang), center[1] + radius * np.sin(ang)])
    return ConvexPolygon(verts)


def clip(P: ConvexPolygon, Q: ConvexPolygon):
    """``P`` intersected with ``Q``, or ``None`` when the overlap is empty."""
    pts = _clip_many(list(P.points), Q.halfplanes())
    return polygon_from_raw(pts, min(P.tolerance, Q.tolerance))


def clip_area(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    pts = _clip_many(list(P.points), Q.halfplanes())
    return max(0.0, _signed_area(pts)) if len(pts) >= 3 else 0.0


def inner_parallel_area(P: ConvexPolygon, t: float) -> float:
    """Area of ``{x in P : dist(x, boundary of P) >= t}``."""
    if t < 0:
        raise InvalidArgument("t must be nonnegative")
    if t == 0:
        return P.area
    pts = _clip_many(list(P.points), [(nx, ny, c - t) for nx, ny, c in P.halfplanes()])
    return max(0.0, _signed_area(pts)) if len(pts) >= 3 else 0.0


def inradius(P: ConvexPolygon) -> float:
    """Radius of the largest inscribed disk, by linear programming."""
    hp = np.array(P.halfplanes())
    A = np.column_stack([hp[:, :2], np.ones(len(hp))])
    res = linprog([0.0, 0.0, -1.0], A_ub=A, b_ub=hp[:, 2],
                  bounds=[(None, None), (None, None), (0, None)], method="highs")
    if not res.success:
        raise DegenerateGeometry(f"inradius LP failed: {res.message}")
    return float(res.x[2])


def overlap_depth(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    """Minimal projection overlap over the separating-axis candidates.

    Nonpositive when the polygons have disjoint interiors.
    """
    best = math.inf
    vp, vq = P.vertices, Q.vertices
    for nx, ny, _ in P.halfplanes() + Q.halfplanes():
        a = vp[:, 0] * nx + vp[:, 1] * ny
        b = vq[:, 0] * nx + vq[:, 1] * ny
        best = min(best, min(a.max(), b.max()) - max(a.min(), b.min()))
        if best <= 0.0:
            return best
    return best


# --------------------------------------------------------------------------
# hexagonal tiling

def hex_center(q: int, r: int) -> tuple:
    return (HEX_SIDE * math.sqrt(3.0) * (q + 0.5 * r), 1.5 * HEX_SIDE * r)


def hex_centers(cells) -> np.ndarray:
    qr = np.asarray(cells, dtype=float).reshape(-1, 2)
    return np.column_stack([HEX_SIDE * math.sqrt(3.0) * (qr[:, 0] + 0.5 * qr[:, 1]), 1.5 * HEX_SIDE * qr[:, 1]])


def hex_polygon(q: int, r: int) -> ConvexPolygon:
    cx, cy = hex_center(q, r)
    return ConvexPolygon(_HEX_OFFSETS + np.array([cx, cy]))


def hex_neighbors(cell) -> list:
    q, r = cell
    return [(q + dq, r + dr) for dq, dr in AXIAL_DIRECTIONS]


def _connected(cells) -> bool:
    cells = set(cells)
    if not cells:
        return True
    start = next(iter(cells))
    seen = {start}
    todo = deque([start])
    while todo:
        for nb in hex_neighbors(todo.popleft()):
            if nb in cells and nb not in seen:
                seen.add(nb)
                todo.append(nb)
    return len(seen) == len(cells)


@dataclass(frozen=True)
class HexStructure:
    """Connected union of tiling hexagons.

    ``kind`` is ``"k-triangle"`` (with ``side`` the number of cells per
    side), ``"inner"`` (with ``domain`` naming the dilated domain) or
    ``"free"``.
    """

    cells: frozenset
    kind: str = "free"
    side: int | None = None
    domain: str | None = None

    def __post_init__(self):
        cells = frozenset((int(q), int(r)) for q, r in self.cells)
        object.__setattr__(self, "cells", cells)
        if not cells:
            raise InvalidArgument("a hexagonal structure needs at least one cell")
        if self.kind not in ("k-triangle", "inner", "free"):
            raise InvalidArgument(f"unknown structure kind {self.kind!r}")
        if not _connected(cells):
            raise DegenerateGeometry("hexagonal structure is not connected")
        if self.kind == "k-triangle":
            if self.side is None or len(cells) != self.side * (self.side + 1) // 2:
                raise InvalidArgument("k-triangle needs side l with l(l+1)/2 cells")

    @property
    def k(self) -> int:
        return len(self.cells)

    @property
    def area(self) -> float:
        return float(len(self.cells))

    def sorted_cells(self) -> list:
        return sorted(self.cells)

    def polygons(self) -> list:
        return [hex_polygon(q, r) for q, r in self.sorted_cells()]

    def vertices(self) -> np.ndarray:
        centers = hex_centers(self.sorted_cells())
        return (centers[:, None, :] + _HEX_OFFSETS[None, :, :]).reshape(-1, 2)

    def ring(self) -> list:
        """Tiling cells outside the structure that touch it."""
        out = set()
        for cell in self.cells:
            out.update(nb for nb in hex_neighbors(cell) if nb not in self.cells)
        return sorted(out)

    def contains_point(self, p, tol: float = 1e-12) -> bool:
        return any(hex_polygon(*c).contains_point(p, tol) for c in self.cells)

    def to_json(self) -> dict:
        data = {"cells": [list(c) for c in self.sorted_cells()], "kind": self.kind}
        if self.side is not None:
            data["side"] = self.side
        if self.domain is not None:
            data["domain"] = self.domain
        return data

    @classmethod
    def from_json(cls, data: dict) -> "HexStructure":
        try:
            cells = frozenset(tuple(c) for c in data["cells"])
        except (KeyError, TypeError) as exc:
            raise InvalidArgument("structure JSON needs a 'cells' list") from exc
        return cls(cells, data.get("kind", "free"), data.get("side"), data.get("domain"))


def build_k_triangle(l: int) -> HexStructure:
    """Rows of ``l, l-1, ..., 1`` hexagons stacked into an equilateral triangle."""
    if int(l) != l or l < 1:
        raise InvalidArgument(f"l must be an integer >= 1, got {l}")
    l = int(l)
    cells = frozenset((q, r) for r in range(l) for q in range(l - r))
    return HexStructure(cells, "k-triangle", side=l)


# --------------------------------------------------------------------------
# dilation radii

class _DilationIntervals:
    """For every candidate tiling cell, the closed ρ-intervals on which the
    cell lies inside ``ρΩ`` and on which it meets ``ρΩ``.

    Both conditions are intersections of half-lines in ρ, computed exactly;
    cells are enumerated in a box covering ``conv({0} ∪ rho_hi Ω)``.
    """

    def __init__(self, omega: ConvexPolygon, rho_hi: float):
        self.omega = omega
        self.rho_hi = rho_hi
        box_pts = np.vstack([omega.vertices * rho_hi, [[0.0, 0.0]]])
        lo_xy = box_pts.min(0) - 2 * HEX_SIDE
        hi_xy = box_pts.max(0) + 2 * HEX_SIDE
        r_min = math.floor(lo_xy[1] / (1.5 * HEX_SIDE))
        r_max = math.ceil(hi_xy[1] / (1.5 * HEX_SIDE))
        w = HEX_SIDE * math.sqrt(3.0)
        cells = []
        for r in range(r_min, r_max + 1):
            q_min = math.floor(lo_xy[0] / w - 0.5 * r)
            q_max = math.ceil(hi_xy[0] / w - 0.5 * r)
            q = np.arange(q_min, q_max + 1)
            cells.append(np.column_stack([q, np.full_like(q, r)]))
        self.cells = np.vstack(cells)
        self.centers = hex_centers(self.cells)
        hp = np.array(omega.halfplanes())
        self.normals, self.offsets = hp[:, :2], hp[:, 2]
        self.in_lo, self.in_hi = self._containment()
        self.ex_lo, self.ex_hi = self._intersection()

    def _containment(self):
        verts = self.centers[:, None, :] + _HEX_OFFSETS[None, :, :]
        proj = np.einsum("nvd,md->nvm", verts, self.normals).max(axis=1)
        c = self.offsets + CONTAINMENT_RTOL * self.omega.diameter
        lo = np.zeros(len(proj))
        hi = np.full(len(proj), np.inf)
        pos, neg, zero = c > 0, c < 0, c == 0
        if pos.any():
            lo = np.maximum(lo, (proj[:, pos] / c[pos]).max(axis=1))
        if neg.any():
            hi = np.minimum(hi, (proj[:, neg] / c[neg]).min(axis=1))
        if zero.any():
            hi[(proj[:, zero] > 0).any(axis=1)] = -np.inf
        return lo, hi

    def _intersection(self):
        axes = np.vstack([self.normals, _HEX_AXES])
        half = np.abs(_HEX_OFFSETS @ axes.T).max(axis=0)
        cproj = self.centers @ axes.T
        a, b = cproj - half, cproj + half
        wproj = self.omega.vertices @ axes.T
        m, M = wproj.min(axis=0), wproj.max(axis=0)
        lo = np.zeros(len(a))
        hi = np.full(len(a), np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            # b >= ρ m
            rb = b / m
            lo = np.maximum(lo, np.where(m < 0, rb, -np.inf).max(axis=1))
            hi = np.minimum(hi, np.where(m > 0, rb, np.inf).min(axis=1))
            bad = ((m == 0) & (b < 0)).any(axis=1)
            # a <= ρ M
            ra = a / M
            lo = np.maximum(lo, np.where(M > 0, ra, -np.inf).max(axis=1))
            hi = np.minimum(hi, np.where(M < 0, ra, np.inf).min(axis=1))
            bad |= ((M == 0) & (a > 0)).any(axis=1)
        hi[bad] = -np.inf
        return lo, hi

    @staticmethod
    def _count(lo, hi, rho):
        ok = lo <= hi
        lo, hi = np.sort(lo[ok]), np.sort(hi[ok])
        rho = np.asarray(rho, dtype=float)
        return np.searchsorted(lo, rho, "right") - np.searchsorted(hi, rho, "left")

    def count_inner(self, rho):
        return self._count(self.in_lo, self.in_hi, rho)

    def count_outer(self, rho):
        return self._count(self.ex_lo, self.ex_hi, rho)

    def rho_inner(self, k: int) -> float:
        ok = (self.in_lo <= self.in_hi) & (self.in_lo <= self.rho_hi)
        cand = np.unique(self.in_lo[ok])
        counts = self.count_inner(cand)
        hit = np.nonzero(counts >= k)[0]
        if len(hit) == 0:
            raise InvalidArgument("rho_hi too small for the requested k")
        return float(cand[hit[0]])

    def rho_outer(self, k: int) -> float:
        ok = self.ex_lo <= self.ex_hi
        bps = np.unique(np.concatenate([self.ex_lo[ok], self.ex_hi[ok]]))
        bps = bps[(bps > 0) & (bps <= self.rho_hi)]
        lo, hi = np.sort(self.ex_lo[ok]), np.sort(self.ex_hi[ok])
        at_point = np.searchsorted(lo, bps, "right") - np.searchsorted(hi, bps, "left")
        right_of = np.searchsorted(lo, bps, "right") - np.searchsorted(hi, bps, "right")
        # sup of {ρ : count <= k}: last region (point or open gap) satisfying it
        sup = None
        for i in range(len(bps) - 1, -1, -1):
            if right_of[i] <= k:
                sup = bps[i + 1] if i + 1 < len(bps) else self.rho_hi
                break
            if at_point[i] <= k:
                sup = bps[i]
                break
        if sup is None:
            sup = bps[0] if len(bps) else self.rho_hi
        return float(sup)

    def inner_cells(self, rho: float) -> np.ndarray:
        mask = (self.in_lo <= rho) & (rho <= self.in_hi)
        return self.cells[mask]

    def touching_boundary(self, cells: np.ndarray, rho: float, rtol: float = 1e-9) -> np.ndarray:
        centers = hex_centers(cells)
        verts = centers[:, None, :] + _HEX_OFFSETS[None, :, :]
        slack = np.einsum("nvd,md->nvm", verts, self.normals) - rho * self.offsets
        return slack.max(axis=(1, 2)) >= -rtol * rho * self.omega.diameter


def _dilation_table(omega: ConvexPolygon, k: int) -> _DilationIntervals:
    rho = max(2.0 * math.sqrt(k / omega.area), 4.0 / math.sqrt(omega.area))
    for _ in range(40):
        table = _DilationIntervals(omega, rho)
        if table.count_inner(rho) >= k and table.count_outer(rho) > k:
            return table
        rho *= 2.0
    raise InvalidArgument("could not bracket the dilation radii")


@dataclass(frozen=True)
class PackingRadii:
    rho_int: float
    rho_ext: float
    k: int
    n_inner: int

    def __post_init__(self):
        if not (self.rho_int > 0 and self.rho_ext > 0 and math.isfinite(self.rho_int) and math.isfinite(self.rho_ext)):
            raise DegenerateGeometry("dilation radii must be finite and positive")
        if self.n_inner < self.k:
            raise DegenerateGeometry("rho_int does not admit k inner hexagons")


def packing_radii(omega: ConvexPolygon, k: int) -> PackingRadii:
    """Smallest dilation with ``k`` tiling hexagons inside ``ρΩ`` and the
    supremum of dilations met by at most ``k`` hexagons (about the origin).

    Both are computed exactly from per-cell intervals in ρ rather than by
    bisection.
    """
    if int(k) != k or k < 1:
        raise InvalidArgument("k must be a positive integer")
    table = _dilation_table(omega, int(k))
    rho_int = table.rho_inner(int(k))
    return PackingRadii(rho_int, table.rho_outer(int(k)), int(k), int(table.count_inner(rho_int)))


def count_inner_hexagons(omega: ConvexPolygon, rho: float) -> int:
    """``#I^int(ρ, Ω)``: tiling hexagons contained in ``ρΩ``."""
    return int(_DilationIntervals(omega, rho).count_inner(rho))


def count_outer_hexagons(omega: ConvexPolygon, rho: float) -> int:
    """``#I^ext(ρ, Ω)``: tiling hexagons meeting the closure of ``ρΩ``."""
    return int(_DilationIntervals(omega, rho).count_outer(rho))


def inner_hex_structure(omega: ConvexPolygon, k: int, domain: str = "omega") -> HexStructure:
    """Exactly ``k`` tiling hexagons inside ``ρ_int Ω``.

    Surplus cells touching the scaled boundary are dropped in lexicographic
    ``(q, r)`` order; a removal that would disconnect the structure is skipped.
    """
    if int(k) != k or k < 1:
        raise InvalidArgument("k must be a positive integer")
    k = int(k)
    table = _dilation_table(omega, k)
    rho = table.rho_inner(k)
    cells = table.inner_cells(rho)
    touching = table.touching_boundary(cells, rho)
    if len(cells) - int(touching.sum()) >= k:
        raise DegenerateGeometry("more than k hexagons avoid the boundary at rho_int")
    keep = {tuple(c) for c in cells.tolist()}
    for cell in sorted(tuple(c) for c in cells[touching].tolist()):
        if len(keep) == k:
            break
        keep.discard(cell)
        if not _connected(keep):
            keep.add(cell)
    if len(keep) != k:
        raise DegenerateGeometry("could not remove boundary cells without disconnecting")
    return HexStructure(frozenset(keep), "inner", domain=domain)


def inner_structure_radius(omega: ConvexPolygon, k: int) -> float:
    return _dilation_table(omega, int(k)).rho_inner(int(k))


class Envelope(NamedTuple):
    hull: ConvexPolygon
    n_sides: int


def convex_envelope(S: HexStructure) -> Envelope:
    hull = ConvexPolygon.from_points(S.vertices())
    return Envelope(hull, hull.n_sides)


def polygons_from_json(items: Iterable, tolerance: float = DEFAULT_TOLERANCE) -> list:
    return [ConvexPolygon.from_json(p, tolerance) for p in items]


def unit_square() -> ConvexPolygon:
    return ConvexPolygon(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
