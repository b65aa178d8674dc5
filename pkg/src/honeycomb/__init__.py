"""Honeycomb-type bounds for optimal convex partitions.

Shape functionals on convex polygons (Cheeger constant, first Dirichlet
eigenvalue, logarithmic capacity, perimeter), checks of the hypotheses that
make hexagonal packings asymptotically optimal, and constructive partition
experiments.
"""

from .errors import (
    DegenerateGeometry,
    GrowthIncomplete,
    HoneycombError,
    InvalidArgument,
    SolverFailure,
    Unsupported,
)
from .functionals import FunctionalKind
from .geometry import ConvexPolygon, HexStructure, PackingRadii

__all__ = [
    "ConvexPolygon",
    "DegenerateGeometry",
    "FunctionalKind",
    "GrowthIncomplete",
    "HexStructure",
    "HoneycombError",
    "InvalidArgument",
    "PackingRadii",
    "SolverFailure",
    "Unsupported",
]
