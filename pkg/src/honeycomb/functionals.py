"""Shape functionals on convex polygons and their values on regular polygons.

Four functionals are supported: the Cheeger constant, the first Dirichlet
eigenvalue of the Laplacian, the logarithmic capacity and the perimeter.
Closed forms for regular unit-area polygons are written as functions of a
real number of sides ``t`` so that they can be sampled between integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidArgument, SolverFailure, Unsupported
from .fem import dirichlet_eigenvalue
from .geometry import ConvexPolygon, inner_parallel_area, regular_polygon

SQRT_PI = math.sqrt(math.pi)


class Direction(Enum):
    DECREASING = "decreasing"
    INCREASING = "increasing"


class FunctionalKind(Enum):
    CHEEGER = ("cheeger", 1.0, Direction.DECREASING)
    LAMBDA1 = ("lambda1", 2.0, Direction.DECREASING)
    LOGCAP = ("logcap", 1.0, Direction.INCREASING)
    PERIMETER = ("perimeter", 1.0, Direction.INCREASING)

    @property
    def tag(self) -> str:
        return self.value[0]

    @property
    def alpha(self) -> float:
        """Homogeneity degree: ``F(tP) = t**(-alpha) F(P)`` for decreasing kinds,
        ``t**alpha F(P)`` for increasing ones."""
        return self.value[1]

    @property
    def direction(self) -> Direction:
        return self.value[2]

    @property
    def decreasing(self) -> bool:
        return self.value[2] is Direction.DECREASING

    @classmethod
    def parse(cls, name) -> "FunctionalKind":
        if isinstance(name, cls):
            return name
        for kind in cls:
            if kind.tag == str(name).lower():
                return kind
        raise InvalidArgument(f"unknown functional {name!r}")


class Method(Enum):
    CLOSED_FORM = "closed-form"
    INNER_CHEEGER = "inner-cheeger"
    FEM = "fem"
    SERIES = "series"


class Exactness(Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower"
    UPPER_BOUND = "upper"


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    kind: FunctionalKind
    method: Method
    mesh_size: float | None = None
    n_triangles: int | None = None

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value > 0):
            raise SolverFailure(f"{self.kind.tag} value {self.value} is not finite and positive")


@dataclass(frozen=True)
class GammaPoint:
    n: int
    gamma: float
    exactness: Exactness

    def __post_init__(self):
        if self.n < 3 or not self.gamma > 0:
            raise InvalidArgument("gamma points need n >= 3 and gamma > 0")


# --------------------------------------------------------------------------
# Bessel zero

def _bessel_j0_j1(x: float, terms: int = 60) -> tuple:
    """Power series for J0 and J1; fine for |x| below about 10."""
    q = (x / 2.0) ** 2
    term0, term1 = 1.0, x / 2.0
    j0, j1 = term0, term1
    for m in range(1, terms):
        term0 *= -q / (m * m)
        term1 *= -q / (m * (m + 1))
        j0 += term0
        j1 += term1
    return j0, j1


@lru_cache(maxsize=None)
def bessel_j01() -> float:
    """First positive zero of J0, by Newton iteration (J0' = -J1)."""
    x = 2.4
    for _ in range(50):
        j0, j1 = _bessel_j0_j1(x)
        step = j0 / j1  # x - J0/J0' = x + J0/J1
        x += step
        if abs(step) < 1e-15:
            break
    return x


def lambda1_disk(area: float = 1.0) -> float:
    """First Dirichlet eigenvalue of the disk of the given area."""
    return math.pi * bessel_j01() ** 2 / area


# --------------------------------------------------------------------------
# closed forms for the unit-area regular polygon with t sides

def _check_sides(t):
    if not t >= 3:
        raise InvalidArgument(f"need at least 3 sides, got {t}")


def cheeger_formula(t: float) -> float:
    _check_sides(t)
    s1 = math.sin(math.pi / t)
    s2 = math.sin(2 * math.pi / t)
    return (2 * t * s1 + math.sqrt(2 * math.pi * t * s2)) / math.sqrt(2 * t * s2)


def perimeter_formula(t: float) -> float:
    """``2 sqrt(t tan(pi/t))``, evaluated as ``t`` sides of length
    ``2 R sin(pi/t)`` so that the square comes out as exactly 4."""
    _check_sides(t)
    radius = math.sqrt(2.0 / (t * math.sin(2 * math.pi / t)))
    return 2.0 * t * math.sin(math.pi / t) * radius


def logcap_formula(t: float) -> float:
    _check_sides(t)
    return (math.sqrt(t * math.tan(math.pi / t)) * math.gamma(1 + 1 / t)
            / (SQRT_PI * 2 ** (2 / t) * math.gamma(0.5 + 1 / t)))


def _integer_sides(n) -> int:
    if int(n) != n or n < 3:
        raise InvalidArgument(f"n must be an integer >= 3, got {n}")
    return int(n)


def cheeger_regular(n: int) -> float:
    """Cheeger constant of the unit-area regular ``n``-gon."""
    return cheeger_formula(_integer_sides(n))


def perimeter_regular(n: int) -> float:
    return perimeter_formula(_integer_sides(n))


def logcap_regular(n: int) -> float:
    """Logarithmic capacity of the unit-area regular ``n``-gon."""
    return logcap_formula(_integer_sides(n))


def regular_formula(kind: FunctionalKind, t: float) -> float:
    """``F(P_t)`` for the unit-area regular polygon, extended to real ``t``."""
    kind = FunctionalKind.parse(kind)
    if kind is FunctionalKind.CHEEGER:
        return cheeger_formula(t)
    if kind is FunctionalKind.PERIMETER:
        return perimeter_formula(t)
    if kind is FunctionalKind.LOGCAP:
        return logcap_formula(t)
    raise Unsupported(kind.tag, "regular t-gon", "no closed form in the number of sides")


# --------------------------------------------------------------------------
# general convex polygons

def cheeger_convex(P: ConvexPolygon) -> FunctionalValue:
    """Cheeger constant ``1/t`` where ``t`` solves ``|P_{-t}| = pi t^2``."""
    upper = 2.0 * P.area / P.perimeter  # inradius never exceeds this

    def f(t):
        return inner_parallel_area(P, t) - math.pi * t * t

    if not (f(0.0) > 0 > f(upper)):
        raise SolverFailure("inner Cheeger equation is not bracketed")
    t_star = brentq(f, 0.0, upper, xtol=1e-15 * upper, rtol=4 * np.finfo(float).eps, maxiter=500)
    h = 1.0 / t_star
    if h < 2.0 * math.sqrt(math.pi / P.area) * (1 - 1e-12):
        raise SolverFailure("Cheeger value below the disk bound")
    return FunctionalValue(h, FunctionalKind.CHEEGER, Method.INNER_CHEEGER)


def lambda1_fem(P: ConvexPolygon, h_target: float) -> FunctionalValue:
    """First Dirichlet eigenvalue by P1 finite elements (an upper estimate)."""
    lam, mesh = dirichlet_eigenvalue(P, h_target)
    return FunctionalValue(lam, FunctionalKind.LAMBDA1, Method.FEM, mesh.h, mesh.n_triangles)


def regular_sides(P: ConvexPolygon, rtol: float = 1e-9):
    """Number of sides if ``P`` is a regular polygon, else ``None``."""
    v = P.vertices
    c = P.centroid
    radii = np.hypot(*(v - c).T)
    edges = np.hypot(*(np.roll(v, -1, axis=0) - v).T)
    if np.ptp(radii) <= rtol * radii.mean() and np.ptp(edges) <= rtol * edges.mean():
        return len(v)
    return None


def evaluate(kind: FunctionalKind, P: ConvexPolygon, h_target: float | None = None) -> FunctionalValue:
    """``F(P)`` by the best available method.

    The logarithmic capacity is only available on regular polygons, through
    the closed form and homogeneity.
    """
    kind = FunctionalKind.parse(kind)
    if kind is FunctionalKind.CHEEGER:
        return cheeger_convex(P)
    if kind is FunctionalKind.PERIMETER:
        return FunctionalValue(P.perimeter, kind, Method.CLOSED_FORM)
    if kind is FunctionalKind.LAMBDA1:
        return lambda1_fem(P, h_target if h_target is not None else 0.02 * math.sqrt(P.area))
    n = regular_sides(P)
    if n is None:
        raise Unsupported(kind.tag, "irregular polygon", "capacity needs boundary-integral machinery")
    return FunctionalValue(logcap_regular(n) * math.sqrt(P.area), kind, Method.CLOSED_FORM)


HEX_FEM_H = 0.005


@lru_cache(maxsize=None)
def _lambda1_hexagon(h: float) -> float:
    return lambda1_fem(regular_polygon(6), h).value


def hexagon_value(kind: FunctionalKind, fem_h: float = HEX_FEM_H) -> float:
    """``F(H)`` for the unit-area regular hexagon; FEM (upper estimate) for lambda1."""
    kind = FunctionalKind.parse(kind)
    if kind is FunctionalKind.LAMBDA1:
        return _lambda1_hexagon(fem_h)
    return regular_formula(kind, 6)


# Lower bounds for the first eigenvalue of unit-area pentagons and heptagons,
# and the upper estimate for the hexagon used by the induction argument.
LAMBDA1_PENTAGON_BOUND = 6.022 * math.pi
LAMBDA1_HEPTAGON_BOUND = 5.82 * math.pi
LAMBDA1_HEXAGON_BOUND = 2.433 ** 2 * math.pi


def gamma_curve(kind: FunctionalKind, n_max: int, *, a: float = LAMBDA1_PENTAGON_BOUND,
                b: float = LAMBDA1_HEPTAGON_BOUND, fem_h: float = HEX_FEM_H) -> list:
    """``gamma(n)`` for ``3 <= n <= n_max`` with an exactness tag per entry."""
    kind = FunctionalKind.parse(kind)
    if int(n_max) != n_max or n_max < 6:
        raise InvalidArgument("n_max must be an integer >= 6")
    out = []
    for n in range(3, int(n_max) + 1):
        if kind is not FunctionalKind.LAMBDA1:
            out.append(GammaPoint(n, regular_formula(kind, n), Exactness.EXACT))
        elif n == 3:
            out.append(GammaPoint(n, 4 * math.pi ** 2 / math.sqrt(3), Exactness.EXACT))
        elif n == 4:
            out.append(GammaPoint(n, 2 * math.pi ** 2, Exactness.EXACT))
        elif n == 5:
            out.append(GammaPoint(n, a, Exactness.LOWER_BOUND))
        elif n == 6:
            out.append(GammaPoint(n, hexagon_value(kind, fem_h), Exactness.UPPER_BOUND))
        elif n == 7:
            out.append(GammaPoint(n, b, Exactness.LOWER_BOUND))
        else:
            out.append(GammaPoint(n, lambda1_disk(), Exactness.LOWER_BOUND))
    return out
