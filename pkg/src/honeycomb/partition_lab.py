"""Constructive side of the honeycomb bounds.

Hexagonal packing upper bounds, Hölder lower bounds, power-diagram
partitions and a Lloyd-type optimizer, greedy growth of convex clusters,
side-count audits and convergence experiments.

Containers are convex polygons or, for cluster growth, hexagonal structures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .errors import DegenerateGeometry, GrowthIncomplete, InvalidArgument, Unsupported
from .functionals import (
    Exactness,
    FunctionalKind,
    evaluate,
    gamma_curve,
    hexagon_value,
    regular_formula,
)
from .geometry import (
    ConvexPolygon,
    HexStructure,
    _clip_many,
    _halfplanes,
    _signed_area,
    clip_area,
    convex_envelope,
    hex_polygon,
    inner_hex_structure,
    packing_radii,
    polygon_from_raw,
)

Container = Union[ConvexPolygon, HexStructure]

DISJOINT_AREA = 1e-9
CONTAIN_RTOL = 1e-9
DROP_AREA = 1e-9
ADVANCE_TOL = 1e-7
TOUCH_TOL = 1e-6


class Objective(Enum):
    SUM = "sum"
    MAX = "max"

    @classmethod
    def parse(cls, value) -> "Objective":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidArgument(f"objective must be 'sum' or 'max', got {value!r}") from None


# --------------------------------------------------------------------------
# audits shared by clusters and partitions

def _bbox(pts):
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return min(xs), min(ys), max(xs), max(ys)


def _boxes_overlap(a, b) -> bool:
    return a[0] < b[2] and b[0] < a[2] and a[1] < b[3] and b[1] < a[3]


def _container_diameter(container: Container) -> float:
    if isinstance(container, HexStructure):
        v = container.vertices()
        return float(np.max(np.ptp(v, axis=0)))
    return container.diameter


def check_disjoint(cells: Sequence[ConvexPolygon], tol: float = DISJOINT_AREA) -> None:
    boxes = [_bbox(c.points) for c in cells]
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            if _boxes_overlap(boxes[i], boxes[j]) and clip_area(cells[i], cells[j]) > tol:
                raise DegenerateGeometry(f"cells {i} and {j} overlap")


def check_contained(cells: Sequence[ConvexPolygon], container: Container) -> None:
    if isinstance(container, HexStructure):
        hexes = container.polygons()
        hboxes = [_bbox(h.points) for h in hexes]
        for i, cell in enumerate(cells):
            box = _bbox(cell.points)
            inside = sum(clip_area(cell, h) for h, hb in zip(hexes, hboxes) if _boxes_overlap(box, hb))
            if inside < cell.area * (1 - CONTAIN_RTOL) - 1e-12:
                raise DegenerateGeometry(f"cell {i} leaves the hexagonal structure")
        return
    tol = CONTAIN_RTOL * container.diameter
    for i, cell in enumerate(cells):
        if not all(container.contains_point(p, tol) for p in cell.points):
            raise DegenerateGeometry(f"cell {i} leaves the container")


@dataclass(frozen=True)
class ConvexCluster:
    """Convex cells with pairwise disjoint interiors inside a container."""

    cells: tuple
    container: Container

    def __post_init__(self):
        cells = tuple(self.cells)
        object.__setattr__(self, "cells", cells)
        if not cells:
            raise InvalidArgument("a cluster needs at least one cell")
        check_contained(cells, self.container)
        check_disjoint(cells)

    @property
    def k(self) -> int:
        return len(self.cells)

    def to_json(self) -> dict:
        return {"container": self.container.to_json(), "cells": [c.to_json() for c in self.cells]}


@dataclass(frozen=True)
class CellStat:
    value: float | None
    n_sides: int
    area: float


@dataclass(frozen=True)
class ConvexPartitionResult:
    cells: tuple
    container: ConvexPolygon
    covers: bool
    per_cell: tuple
    objective_sum: float | None
    objective_max: float | None
    kind: FunctionalKind | None = None
    dropped: tuple = ()
    warning: str | None = None

    def __post_init__(self):
        if len(self.per_cell) != len(self.cells):
            raise InvalidArgument("per_cell must align with cells")
        if self.covers:
            total = sum(c.area for c in self.cells)
            if abs(total - self.container.area) > 1e-6 * self.container.area:
                raise DegenerateGeometry(f"cells cover area {total}, container has {self.container.area}")

    @property
    def k(self) -> int:
        return len(self.cells)

    def objective(self, objective) -> float | None:
        return self.objective_sum if Objective.parse(objective) is Objective.SUM else self.objective_max

    def to_json(self) -> dict:
        data = {"container": self.container.to_json(), "cells": [c.to_json() for c in self.cells]}
        if self.kind is not None:
            data["kind"] = self.kind.tag
            data["values"] = [s.value for s in self.per_cell]
            data["objective_sum"] = self.objective_sum
            data["objective_max"] = self.objective_max
        if self.dropped:
            data["dropped"] = list(self.dropped)
        if self.warning:
            data["warning"] = self.warning
        return data


def _partition_result(cells, container, kind, dropped=(), warning=None, covers=True) -> ConvexPartitionResult:
    stats = []
    for c in cells:
        value = evaluate(kind, c).value if kind is not None else None
        stats.append(CellStat(value, c.n_sides, c.area))
    if kind is not None:
        vals = [s.value for s in stats]
        osum, omax = math.fsum(vals), max(vals)
    else:
        osum = omax = None
    return ConvexPartitionResult(tuple(cells), container, covers, tuple(stats), osum, omax, kind,
                                 tuple(dropped), warning)


# --------------------------------------------------------------------------
# bounds

@dataclass(frozen=True)
class BoundCertificate:
    """Bounds for the optimal partition energy with ``k`` cells.

    ``conditional`` marks bounds that rest on unproven inputs (eigenvalue
    lower bounds on pentagons and heptagons, a finite-element value for the
    hexagon).
    """

    kind: FunctionalKind
    k: int
    upper: float | None = None
    lower: float | None = None
    scaled_upper: float | None = None
    scaled_lower: float | None = None
    objective: Objective = Objective.MAX
    conditional: bool = False

    def __post_init__(self):
        if self.upper is not None and self.lower is not None and self.lower > self.upper * (1 + 1e-9):
            raise DegenerateGeometry(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    def to_json(self) -> dict:
        return {"kind": self.kind.tag, "k": self.k, "objective": self.objective.value,
                "upper": self.upper, "lower": self.lower, "scaled_upper": self.scaled_upper,
                "scaled_lower": self.scaled_lower, "conditional": self.conditional}


def scale_factor(kind: FunctionalKind, objective: Objective, k: int, area: float) -> float:
    a = kind.alpha
    if kind.decreasing:
        if objective is Objective.SUM:
            return area ** (a / 2) / k ** ((a + 2) / 2)
        return area ** (a / 2) / k ** (a / 2)
    return (k / area) ** (a / 2)


def hex_pack_bound(omega: ConvexPolygon, k: int, kind: FunctionalKind, objective=Objective.MAX) -> BoundCertificate:
    """Bounds from the tiling dilated to ``omega``.

    Decreasing functionals: ``k`` hexagons fit in ``rho_int omega``, which
    rescaled gives a cluster of energy ``rho_int**alpha F(H)`` per cell. The
    lower bound uses ``rho_ext`` and the optimality of hexagons in
    triangles. Increasing functionals (maximum only): at most ``k`` hexagons
    meet ``rho_ext omega`` and cut it into convex pieces; the lower bound
    applies the side-count bound to the envelope of the inner structure.
    """
    kind = FunctionalKind.parse(kind)
    objective = Objective.parse(objective)
    if int(k) != k or k < 1:
        raise InvalidArgument("k must be a positive integer")
    k = int(k)
    if objective is Objective.SUM and not kind.decreasing:
        raise Unsupported(kind.tag, "sum objective", "sums are only bounded for decreasing functionals")
    fh = hexagon_value(kind)
    pr = packing_radii(omega, k)
    a = kind.alpha
    s = scale_factor(kind, objective, k, omega.area)
    conditional = kind is FunctionalKind.LAMBDA1
    if kind.decreasing:
        mult = k if objective is Objective.SUM else 1
        upper = mult * pr.rho_int ** a * fh
        lower = mult * pr.rho_ext ** a * fh
    else:
        upper = pr.rho_ext ** (-a) * fh
        S = inner_hex_structure(omega, k)
        env = convex_envelope(S)
        mean_bound = 6.0 + (env.n_sides - 6.0) / k
        lower = pr.rho_int ** (-a) * (env.hull.area / k) ** (a / 2) * regular_formula(kind, mean_bound) \
            if kind is not FunctionalKind.LAMBDA1 else None
    return BoundCertificate(kind, k, upper, lower, upper * s, lower * s if lower is not None else None,
                            objective, conditional)


def holder_lower_bound(cluster: ConvexCluster, kind: FunctionalKind, evaluate_cells: bool = True) -> BoundCertificate:
    """``k**(-alpha/2) (sum gamma(n_i)**(2/(alpha+2)))**((alpha+2)/2)`` for a
    cluster in a k-triangle; with ``evaluate_cells`` the actual energy sum is
    reported as the upper value."""
    kind = FunctionalKind.parse(kind)
    if not kind.decreasing:
        raise Unsupported(kind.tag, "Hölder chain", "only decreasing functionals")
    container = cluster.container
    if not (isinstance(container, HexStructure) and container.kind == "k-triangle"):
        raise InvalidArgument("the Hölder bound needs a k-triangle container")
    k = container.k
    sides = [c.n_sides for c in cluster.cells]
    curve = {p.n: p for p in gamma_curve(kind, max(6, max(sides)))}
    a = kind.alpha
    e = 2.0 / (a + 2.0)
    used = [curve[n] for n in sides]
    total = math.fsum(p.gamma ** e for p in used)
    lower = k ** (-a / 2) * total ** ((a + 2) / 2)
    conditional = any(p.exactness is not Exactness.EXACT for p in used)
    upper = math.fsum(evaluate(kind, c).value for c in cluster.cells) if evaluate_cells else None
    s = scale_factor(kind, Objective.SUM, k, float(k))
    return BoundCertificate(kind, k, upper, lower, upper * s if upper is not None else None, lower * s,
                            Objective.SUM, conditional)


# --------------------------------------------------------------------------
# power diagrams

def power_partition(omega: ConvexPolygon, seeds, weights, kind: FunctionalKind | None = None) -> ConvexPartitionResult:
    """Power-diagram cells of ``(seeds, weights)`` intersected with ``omega``.

    Cells with area below ``1e-9`` are dropped and their indices reported.
    """
    seeds = np.asarray(seeds, dtype=float).reshape(-1, 2)
    weights = np.asarray(weights, dtype=float).ravel()
    if len(seeds) != len(weights):
        raise InvalidArgument("seeds and weights must have the same length")
    if len(seeds) == 0:
        raise InvalidArgument("need at least one seed")
    if len(np.unique(seeds, axis=0)) != len(seeds):
        raise InvalidArgument("seeds must be distinct")
    if kind is not None:
        kind = FunctionalKind.parse(kind)
    base = list(omega.points)
    sq = (seeds ** 2).sum(1)
    cells, dropped = [], []
    for i in range(len(seeds)):
        planes = []
        for j in range(len(seeds)):
            if j == i:
                continue
            n = 2.0 * (seeds[j] - seeds[i])
            length = math.hypot(n[0], n[1])
            c = sq[j] - sq[i] - weights[j] + weights[i]
            planes.append((n[0] / length, n[1] / length, c / length))
        pts = _clip_many(list(base), planes)
        cell = polygon_from_raw(pts) if len(pts) >= 3 and _signed_area(pts) >= DROP_AREA else None
        if cell is None:
            dropped.append(i)
        else:
            cells.append(cell)
    if not cells:
        raise DegenerateGeometry("every power cell is empty")
    return _partition_result(cells, omega, kind, dropped)


def random_points(omega: ConvexPolygon, n: int, rng: np.random.Generator) -> np.ndarray:
    lo, hi = omega.vertices.min(0), omega.vertices.max(0)
    hp = np.array(omega.halfplanes())
    out = []
    while len(out) < n:
        p = rng.uniform(lo, hi, size=(4 * n, 2))
        ok = (p @ hp[:, :2].T < hp[:, 2] - 1e-9 * omega.diameter).all(axis=1)
        out.extend(p[ok].tolist())
    return np.array(out[:n])


def optimize(omega: ConvexPolygon, k: int, kind: FunctionalKind, objective=Objective.MAX,
             rng_seed: int = 0, iterations: int = 100, step: float = 0.5) -> ConvexPartitionResult:
    """Heuristic search for a low-energy convex ``k``-partition.

    Starting from random seeds, alternate Lloyd moves (seeds to centroids)
    with multiplicative weight updates that enlarge cells whose energy is
    too high (decreasing functionals) or shrink them (increasing ones). The
    best iterate with all ``k`` cells is returned; it is never worse than the
    initial diagram.
    """
    kind = FunctionalKind.parse(kind)
    objective = Objective.parse(objective)
    if int(k) != k or k < 1:
        raise InvalidArgument("k must be a positive integer")
    k = int(k)
    if k == 1:
        return _partition_result([omega], omega, kind)
    rng = np.random.default_rng(rng_seed)
    seeds = random_points(omega, k, rng)
    weights = np.zeros(k)
    mean_area = omega.area / k
    sign = 1.0 if kind.decreasing else -1.0
    best, best_val = None, math.inf
    history = []
    for _ in range(max(1, int(iterations)) + 1):
        try:
            res = power_partition(omega, seeds, weights, kind)
        except (DegenerateGeometry, InvalidArgument):
            break
        if res.dropped:
            # a vanished cell: undo the weight spread and keep moving
            weights *= 0.5
            continue
        val = res.objective(objective)
        history.append(val)
        if val < best_val:
            best, best_val = res, val
        vals = np.array([s.value for s in res.per_cell])
        areas = np.array([s.area for s in res.per_cell])
        ratio = vals / areas if objective is Objective.SUM else vals
        weights = weights + step * mean_area * sign * np.log(ratio / ratio.mean())
        weights -= weights.mean()
        seeds = np.array([c.centroid for c in res.cells])
        if len(np.unique(seeds.round(14), axis=0)) != k:
            break
    if best is None:
        raise DegenerateGeometry("no admissible power partition found")
    tail = history[-5:]
    warning = None
    if len(tail) < 2 or (max(tail) - min(tail)) > 1e-6 * abs(best_val):
        warning = "not converged"
    return ConvexPartitionResult(best.cells, best.container, best.covers, best.per_cell,
                                 best.objective_sum, best.objective_max, kind, best.dropped, warning)


# --------------------------------------------------------------------------
# greedy growth

def _box_points(container: Container):
    v = container.vertices if isinstance(container, ConvexPolygon) else container.vertices()
    lo, hi = v.min(0), v.max(0)
    pad = float(np.max(hi - lo)) + 1.0
    x0, y0, x1, y1 = (float(z) for z in (lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad))
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


def _obstacles_outside(container: Container, box) -> list:
    if isinstance(container, HexStructure):
        return [list(hex_polygon(q, r).points) for q, r in container.ring()]
    out = []
    for nx, ny, c in container.halfplanes():
        piece = _clip_many(list(box), [(-nx, -ny, -c)])
        if len(piece) >= 3:
            out.append(piece)
    return out


def _push_limit(planes, e, obstacles, box, area_eps):
    """How far side ``e`` can move outward before meeting an obstacle."""
    nx, ny, c = planes[e]
    others = planes[:e] + planes[e + 1:]
    wedge_box = _clip_many(list(box), others)
    best = max(nx * x + ny * y for x, y in wedge_box) - c
    ranked = sorted((min(nx * x + ny * y for x, y in obs) - c, j) for j, obs in enumerate(obstacles))
    for lb, j in ranked:
        if lb >= best:
            break
        piece = _clip_many(list(obstacles[j]), others)
        if len(piece) < 3 or _signed_area(piece) <= area_eps:
            continue
        best = min(best, min(nx * x + ny * y for x, y in piece) - c)
    return max(best, 0.0)


def grow_to_max_area(cluster: ConvexCluster, max_passes: int = 200) -> ConvexCluster:
    """Push every side of every cell outward until it meets another cell or
    the container boundary.

    Passes repeat until no side advances by more than ``1e-7``. Afterwards
    every side must lie within ``1e-6`` of an obstacle, otherwise
    ``GrowthIncomplete`` lists the free sides.
    """
    container = cluster.container
    box = _box_points(container)
    outside = _obstacles_outside(container, box)
    cells = [list(c.points) for c in cluster.cells]
    scale = _container_diameter(container)
    area_eps = 1e-12 * scale * scale
    for _ in range(max_passes):
        moved = False
        for i in range(len(cells)):
            obstacles = cells[:i] + cells[i + 1:] + outside
            e = 0
            while e < len(_halfplanes(cells[i])):
                planes = _halfplanes(cells[i])
                d = _push_limit(planes, e, obstacles, box, area_eps)
                if d > ADVANCE_TOL:
                    nx, ny, c = planes[e]
                    planes[e] = (nx, ny, c + d)
                    grown = _clip_many(list(box), planes)
                    new = polygon_from_raw(grown)
                    if new is None or new.area < _signed_area(cells[i]) - 1e-12:
                        raise DegenerateGeometry("growth step lost area")
                    cells[i] = list(new.points)
                    moved = True
                e += 1
        if not moved:
            break
    free = []
    for i in range(len(cells)):
        obstacles = cells[:i] + cells[i + 1:] + outside
        planes = _halfplanes(cells[i])
        for e in range(len(planes)):
            if _push_limit(planes, e, obstacles, box, area_eps) > TOUCH_TOL:
                free.append((i, e))
    if free:
        raise GrowthIncomplete(free)
    return ConvexCluster(tuple(ConvexPolygon(np.array(c)) for c in cells), container)


def random_cluster_in_structure(S: HexStructure, rng: np.random.Generator, max_vertices: int = 6) -> ConvexCluster:
    """One small random convex polygon near the centre of each structure cell."""
    cells = []
    for q, r in S.sorted_cells():
        h = hex_polygon(q, r)
        cx, cy = h.centroid
        m = int(rng.integers(3, max_vertices + 1))
        ang = np.sort(rng.uniform(0, 2 * math.pi, size=m))
        while np.max(np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))) >= math.pi:
            ang = np.sort(rng.uniform(0, 2 * math.pi, size=m))
        rad = rng.uniform(0.05, 0.25, size=m)
        off = rng.uniform(-0.1, 0.1, size=2)
        pts = np.column_stack([cx + off[0] + rad * np.cos(ang), cy + off[1] + rad * np.sin(ang)])
        cells.append(ConvexPolygon.from_points(pts))
    return ConvexCluster(tuple(cells), S)


# --------------------------------------------------------------------------
# side counts

@dataclass(frozen=True)
class SideAudit:
    mean_sides: float
    bound: float
    passed: bool
    case: str

    def to_json(self) -> dict:
        return {"mean_sides": self.mean_sides, "bound": self.bound, "pass": self.passed, "case": self.case}


def audit_sides(result) -> SideAudit:
    """Mean number of sides against 6 (clusters in a k-triangle) or
    ``6 + (n_Q - 6)/k`` (partitions of a convex polygon ``Q``)."""
    cells = result.cells
    container = result.container
    mean = float(np.mean([c.n_sides for c in cells]))
    if isinstance(container, HexStructure):
        if container.kind != "k-triangle":
            raise InvalidArgument("side bound for hexagonal containers needs a k-triangle")
        bound, case = 6.0, "k-triangle"
    else:
        bound, case = 6.0 + (container.n_sides - 6.0) / len(cells), "convex"
    return SideAudit(mean, bound, mean <= bound + 1e-9, case)


# --------------------------------------------------------------------------
# convergence

def convergence_run(omega: ConvexPolygon, kind: FunctionalKind, objective, k_list) -> list:
    """Rows ``{k, upper, scaled_upper, lower, scaled_lower, reference}``."""
    kind = FunctionalKind.parse(kind)
    objective = Objective.parse(objective)
    ks = [int(k) for k in k_list]
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise InvalidArgument("k_list must be increasing")
    ref = hexagon_value(kind)
    rows = []
    for k in ks:
        cert = hex_pack_bound(omega, k, kind, objective)
        rows.append({"k": k, "upper": cert.upper, "scaled_upper": cert.scaled_upper,
                     "lower": cert.lower, "scaled_lower": cert.scaled_lower, "reference": ref})
    return rows
