import math

import numpy as np
import pytest

from honeycomb.errors import DegenerateGeometry, InvalidArgument, Unsupported
from honeycomb.functionals import FunctionalKind as K
from honeycomb.functionals import cheeger_regular, evaluate, hexagon_value, perimeter_regular
from honeycomb.geometry import (
    ConvexPolygon,
    build_k_triangle,
    hex_polygon,
    regular_polygon,
    unit_square,
)
from honeycomb.partition_lab import (
    ConvexCluster,
    Objective,
    audit_sides,
    check_disjoint,
    convergence_run,
    grow_to_max_area,
    hex_pack_bound,
    holder_lower_bound,
    optimize,
    power_partition,
    random_cluster_in_structure,
    random_points,
    scale_factor,
)

H_CHEEGER = cheeger_regular(6)
SQRT_PI = math.sqrt(math.pi)


def rect(x0, y0, x1, y1):
    return ConvexPolygon(np.array([(x0, y0), (x1, y0), (x1, y1), (x0, y1)], dtype=float))


# ---------------------------------------------------------------- clusters

def test_cluster_rejects_overlap_and_escape():
    box = rect(0, 0, 1, 1)
    with pytest.raises(DegenerateGeometry):
        ConvexCluster((rect(0, 0, 0.6, 1), rect(0.5, 0, 1, 1)), box)
    with pytest.raises(DegenerateGeometry):
        ConvexCluster((rect(0.5, 0.5, 1.2, 1),), box)
    ConvexCluster((rect(0, 0, 0.5, 1), rect(0.5, 0, 1, 1)), box)


def test_scale_factors():
    assert scale_factor(K.CHEEGER, Objective.MAX, 100, 1.0) == pytest.approx(0.1)
    assert scale_factor(K.CHEEGER, Objective.SUM, 100, 1.0) == pytest.approx(1e-3)
    assert scale_factor(K.LAMBDA1, Objective.SUM, 100, 4.0) == pytest.approx(4.0 / 100 ** 2)
    assert scale_factor(K.PERIMETER, Objective.MAX, 100, 1.0) == pytest.approx(10.0)


# ---------------------------------------------------------------- power diagrams

def test_power_single_seed_is_container():
    omega = regular_polygon(5, 3.0)
    res = power_partition(omega, [(0.1, 0.2)], [7.0])
    assert res.k == 1 and res.covers
    assert np.allclose(res.cells[0].vertices, omega.vertices)


def test_power_two_seeds_bisector():
    res = power_partition(unit_square(), [(0.25, 0.5), (0.75, 0.5)], [0.0, 0.0], K.PERIMETER)
    assert [c.area for c in res.cells] == pytest.approx([0.5, 0.5], abs=1e-14)
    assert res.objective_max == pytest.approx(3.0, abs=1e-14)
    assert res.objective_sum == pytest.approx(6.0, abs=1e-14)


def test_power_hexagonal_lattice_interior_cell():
    d = 1.0
    seeds = [(0.0, 0.0)] + [(d * math.cos(math.pi / 3 * i), d * math.sin(math.pi / 3 * i)) for i in range(6)]
    res = power_partition(regular_polygon(6, 50.0, phase=0.0), seeds, np.zeros(7))
    centre = res.cells[0]
    assert centre.n_sides == 6
    # the cell bounded by the six bisectors at distance d/2: apothem d/2
    assert centre.area == pytest.approx(math.sqrt(3) / 2 * d * d, rel=1e-12)
    assert np.allclose(np.hypot(*centre.vertices.T), d / math.sqrt(3))


def test_power_dominated_seed_dropped():
    res = power_partition(unit_square(), [(0.3, 0.5), (0.7, 0.5)], [0.0, -10.0])
    assert res.dropped == (1,) and res.k == 1
    assert res.cells[0].area == pytest.approx(1.0)


def test_power_input_validation():
    with pytest.raises(InvalidArgument):
        power_partition(unit_square(), [(0.2, 0.2), (0.2, 0.2)], [0, 0])
    with pytest.raises(InvalidArgument):
        power_partition(unit_square(), [(0.2, 0.2)], [0, 0])


def test_random_power_partitions_cover_and_are_disjoint():
    rng = np.random.default_rng(5)
    omega = regular_polygon(7, 2.0)
    for _ in range(20):
        k = int(rng.integers(2, 15))
        res = power_partition(omega, random_points(omega, k, rng), rng.normal(scale=0.05, size=k))
        assert res.covers
        check_disjoint(res.cells)
        assert audit_sides(res).passed


# ---------------------------------------------------------------- optimize

def test_optimize_single_cell():
    res = optimize(unit_square(), 1, K.CHEEGER)
    assert res.k == 1
    assert res.objective_max == pytest.approx(2 + SQRT_PI, abs=1e-8)


def test_optimize_perimeter_two_cells():
    res = optimize(unit_square(), 2, K.PERIMETER, "max", rng_seed=0, iterations=60)
    assert res.k == 2 and res.covers
    assert res.objective_max <= 3.0 + 1e-9


def test_optimize_cheeger_four_cells():
    res = optimize(unit_square(), 4, K.CHEEGER, "max", rng_seed=0, iterations=60)
    assert res.objective_max <= 2 * (2 + SQRT_PI) + 1e-6


def test_optimize_deterministic_and_not_worse_than_start():
    a = optimize(unit_square(), 6, K.CHEEGER, "sum", rng_seed=3, iterations=20)
    b = optimize(unit_square(), 6, K.CHEEGER, "sum", rng_seed=3, iterations=20)
    assert all(np.array_equal(x.vertices, y.vertices) for x, y in zip(a.cells, b.cells))
    start = optimize(unit_square(), 6, K.CHEEGER, "sum", rng_seed=3, iterations=0)
    assert a.objective_sum <= start.objective_sum


def test_optimize_never_beats_honeycomb_scale():
    # a sum of k cells of total area 1 costs at least k * h(disk of area 1/k)
    k = 8
    res = optimize(unit_square(), k, K.CHEEGER, "sum", rng_seed=1, iterations=30)
    assert res.objective_sum >= k * 2 * SQRT_PI * math.sqrt(k)


# ---------------------------------------------------------------- growth

def test_growth_single_square_fills_container():
    c = ConvexCluster((rect(0.4, 0.4, 0.6, 0.6),), rect(0, 0, 1, 1))
    g = grow_to_max_area(c)
    assert g.cells[0].area == pytest.approx(1.0, abs=1e-12)


def test_growth_two_squares_partition_rectangle():
    container = rect(0, 0, 2, 1)
    c = ConvexCluster((rect(0.2, 0.2, 0.5, 0.8), rect(1.5, 0.1, 1.9, 0.6)), container)
    g = grow_to_max_area(c)
    assert sum(x.area for x in g.cells) == pytest.approx(container.area, abs=1e-12)
    assert all(a.area >= b.area for a, b in zip(g.cells, c.cells))


def test_growth_fixed_point_on_k_triangle():
    S = build_k_triangle(3)
    c = ConvexCluster(tuple(S.polygons()), S)
    g = grow_to_max_area(c)
    for a, b in zip(g.cells, c.cells):
        assert a.area == pytest.approx(b.area, abs=1e-12)
        assert a.n_sides == 6


def test_growth_random_clusters_audit():
    rng = np.random.default_rng(0)
    for l in (2, 3, 4):
        S = build_k_triangle(l)
        start = random_cluster_in_structure(S, rng, max_vertices=10)
        g = grow_to_max_area(start)
        assert all(a.area >= b.area - 1e-12 for a, b in zip(g.cells, start.cells))
        assert audit_sides(g).passed


# ---------------------------------------------------------------- audits

def test_audit_equality_cases():
    hexagon = regular_polygon(6, 1.0)
    a = audit_sides(power_partition(hexagon, [(0.0, 0.0)], [0.0]))
    assert (a.mean_sides, a.bound, a.passed, a.case) == (6.0, 6.0, True, "convex")
    a = audit_sides(power_partition(unit_square(), [(0.5, 0.5)], [0.0]))
    assert (a.mean_sides, a.bound, a.passed) == (4.0, 4.0, True)


def test_audit_k_triangle_case():
    S = build_k_triangle(4)
    a = audit_sides(ConvexCluster(tuple(S.polygons()), S))
    assert a.case == "k-triangle" and a.bound == 6.0 and a.mean_sides == 6.0


# ---------------------------------------------------------------- bounds

def test_hex_pack_exact_fit():
    cert = hex_pack_bound(hex_polygon(0, 0), 1, K.CHEEGER, "max")
    assert cert.upper == pytest.approx(H_CHEEGER, rel=1e-9)
    assert cert.scaled_upper == pytest.approx(H_CHEEGER, rel=1e-9)
    assert cert.lower <= cert.upper * (1 + 1e-9)


@pytest.mark.parametrize("objective", ["max", "sum"])
def test_hex_pack_square_large_k(objective):
    cert = hex_pack_bound(unit_square(), 10_000, K.CHEEGER, objective)
    assert abs(cert.scaled_upper / H_CHEEGER - 1) <= 0.05
    assert cert.scaled_lower <= cert.scaled_upper


def test_hex_pack_unsupported_and_conditional():
    with pytest.raises(Unsupported):
        hex_pack_bound(unit_square(), 10, K.PERIMETER, "sum")
    assert hex_pack_bound(unit_square(), 10, K.LAMBDA1, "max").conditional
    assert not hex_pack_bound(unit_square(), 10, K.CHEEGER, "max").conditional


def test_hex_pack_dyadic_monotone():
    vals = [hex_pack_bound(unit_square(), 4 ** j, K.CHEEGER, "max").scaled_upper for j in range(2, 7)]
    assert all(b <= a + 1e-3 for a, b in zip(vals, vals[1:]))


def test_holder_single_hexagon():
    S = build_k_triangle(1)
    cert = holder_lower_bound(ConvexCluster(tuple(S.polygons()), S), K.CHEEGER)
    assert cert.lower == pytest.approx(H_CHEEGER, rel=1e-14)
    assert cert.upper == pytest.approx(H_CHEEGER, rel=1e-9)


@pytest.mark.parametrize("l", [2, 3, 4])
def test_holder_sandwich_equality(l):
    S = build_k_triangle(l)
    k = S.k
    cert = holder_lower_bound(ConvexCluster(tuple(S.polygons()), S), K.CHEEGER)
    assert cert.lower == pytest.approx(k * H_CHEEGER, rel=1e-12)
    assert abs(cert.upper - cert.lower) <= 1e-9 * cert.lower
    assert not cert.conditional


def test_holder_mean_six_beats_k_gamma6():
    rng = np.random.default_rng(2)
    S = build_k_triangle(3)
    g = grow_to_max_area(random_cluster_in_structure(S, rng))
    cert = holder_lower_bound(g, K.CHEEGER)
    assert cert.lower >= S.k * H_CHEEGER * (1 - 1e-12)
    assert cert.upper >= cert.lower


def test_holder_requires_k_triangle():
    with pytest.raises(InvalidArgument):
        holder_lower_bound(ConvexCluster((unit_square(),), unit_square()), K.CHEEGER)
    with pytest.raises(Unsupported):
        S = build_k_triangle(2)
        holder_lower_bound(ConvexCluster(tuple(S.polygons()), S), K.PERIMETER)


# ---------------------------------------------------------------- convergence

def test_convergence_rows():
    rows = convergence_run(unit_square(), K.CHEEGER, "max", [100, 1000, 10_000])
    assert [r["k"] for r in rows] == [100, 1000, 10_000]
    assert rows[0]["reference"] == pytest.approx(H_CHEEGER)
    errs = [abs(r["scaled_upper"] - r["reference"]) for r in rows]
    assert errs[2] < errs[1] < errs[0]
    assert errs[2] / H_CHEEGER <= 0.05
    with pytest.raises(InvalidArgument):
        convergence_run(unit_square(), K.CHEEGER, "max", [100, 10])


def test_convergence_perimeter():
    rows = convergence_run(unit_square(), K.PERIMETER, "max", [100, 1000, 10_000])
    ref = perimeter_regular(6)
    assert rows[-1]["reference"] == pytest.approx(ref)
    assert abs(rows[-1]["scaled_upper"] / ref - 1) <= 0.05
    assert all(r["scaled_lower"] <= r["scaled_upper"] for r in rows)


def test_cells_evaluate_consistently():
    res = power_partition(unit_square(), [(0.25, 0.5), (0.75, 0.5)], [0.0, 0.0], K.CHEEGER)
    for cell, stat in zip(res.cells, res.per_cell):
        assert stat.value == evaluate(K.CHEEGER, cell).value
    assert hexagon_value(K.CHEEGER) == H_CHEEGER
