from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from kstab.lattice import (Cone, Fan, GeometryError, MinFunction, PLFunction, RationalPolytope,
                           bounding_box, convexity_test, count_lattice_points, face_volume,
                           lattice_points, normalized_volume, refine_fan)
from kstab.toric import variety
from kstab.blowup import blowup_model
from kstab.ideals import InvariantIdeal, flag_ideal

from oracles import box_count, shoelace

SQUARE = RationalPolytope.from_vertices([(0, 0), (1, 0), (0, 1), (1, 1)])
TRIANGLE_P2 = RationalPolytope.from_vertices([(-1, -1), (2, -1), (-1, 2)])


# -- lattice points -----------------------------------------------------------

def test_unit_square_has_four_points():
    assert sorted(lattice_points(SQUARE)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_doubled_standard_triangle():
    P = RationalPolytope.from_vertices([(0, 0), (1, 0), (0, 1)]).scaled(2)
    assert count_lattice_points(P) == 6


def test_three_times_p2_polygon():
    assert count_lattice_points(variety("P2").Q.scaled(3)) == 55


def test_lattice_points_unbounded_rejected():
    with pytest.raises(GeometryError):
        RationalPolytope.from_halfspaces([(1, 0), (0, 1)], [0, 0])


# -- volumes ------------------------------------------------------------------

def test_unit_cube_volume():
    cube = RationalPolytope.from_vertices(list(product((0, 1), repeat=3)))
    assert normalized_volume(cube) == 1


def test_p2_polygon_volume():
    assert normalized_volume(TRIANGLE_P2) == Fraction(9, 2)


def test_degenerate_volume_is_zero():
    seg = RationalPolytope.from_vertices([(0, 0), (2, 2)])
    assert normalized_volume(seg) == 0


def test_face_volumes():
    assert face_volume(SQUARE, (0, 1)) == 1
    assert face_volume(TRIANGLE_P2, (1, 0)) == 3
    assert face_volume(SQUARE, (1, 1)) == 0


def test_face_volume_needs_primitive_normal():
    with pytest.raises(GeometryError):
        face_volume(SQUARE, (0, 2))


def test_face_volume_lattice_length_of_slanted_edge():
    # edge (2,-1)-(-1,2) has lattice length 3
    assert face_volume(TRIANGLE_P2, (-1, -1)) == 3


# -- refinement ---------------------------------------------------------------

def test_refine_quadrant_by_min():
    fan = Fan.of([(1, 0), (0, 1)], [(0, 1)])
    new, (f,) = refine_fan(fan, [MinFunction((((1, 0), (0, 1)),))])
    assert (1, 1) in new.rays
    assert len(new.cones) == 2
    assert f((3, 1)) == 1 and f((1, 3)) == 1


def test_refine_linear_is_identity():
    fan = Fan.of([(1, 0), (0, 1)], [(0, 1)])
    new, _ = refine_fan(fan, [MinFunction((((2, 5),),))])
    assert new.rays == fan.rays and len(new.cones) == 1


def test_refine_p1_times_line():
    # f(u, s) = min(max(u, 0), s) on P1 x A1
    X = variety("P1")
    J = flag_ideal(X, [InvariantIdeal.fixed_point(X.fan, 0), InvariantIdeal.unit(X.fan)])
    model = blowup_model(X, J)
    added = [r for r in model.fan.rays if r not in ((1, 0), (-1, 0), (0, 1))]
    assert added == [(1, 1)] or added == [(-1, 1)]


def test_refine_rejects_non_strongly_convex():
    fan = Fan((( 1, 0), (-1, 0), (0, 1)), ((0, 1, 2),))
    with pytest.raises(GeometryError):
        refine_fan(fan, [MinFunction((((0, 0),),))])


# -- convexity ----------------------------------------------------------------

def test_o1_on_p2_strictly_convex():
    X = variety("P2")
    f = PLFunction.from_ray_values(X.fan, [1, 0, 0])
    assert convexity_test(X.fan, f, strict=True).passed


def test_zero_convex_not_strict():
    X = variety("P2")
    f = PLFunction.from_ray_values(X.fan, [0, 0, 0])
    assert convexity_test(X.fan, f).passed
    assert not convexity_test(X.fan, f, strict=True).passed


def test_anticanonical_minus_four_point_orders_fails():
    X = variety("P2")
    I = InvariantIdeal.fixed_point(X.fan, 0)
    fan, (phi,) = refine_fan(X.fan, [I.min_function])
    psi = PLFunction.from_ray_values(fan, [X.psi(r) for r in fan.rays])
    v = convexity_test(fan, psi - phi.scale(4))
    assert not v.passed and v.witness is not None and v.gap < 0
    assert convexity_test(fan, psi - phi.scale(3)).passed


# -- properties ---------------------------------------------------------------

points2 = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=7)


def _unimodular(ops):
    M = [[1, 0], [0, 1]]
    for kind, k in ops:
        E = [[1, k], [0, 1]] if kind else [[1, 0], [k, 1]]
        M = [[sum(M[i][t] * E[t][j] for t in range(2)) for j in range(2)] for i in range(2)]
    return M


def _full(pts):
    (x0, y0) = pts[0]
    return any((x1 - x0) * (y2 - y0) != (x2 - x0) * (y1 - y0) for (x1, y1) in pts for (x2, y2) in pts)


@settings(max_examples=60, deadline=None)
@given(points2, st.lists(st.tuples(st.booleans(), st.integers(-2, 2)), max_size=4))
def test_volume_unimodular_invariance(pts, ops):
    if not _full(pts):
        return
    M = _unimodular(ops)
    img = [(M[0][0] * x + M[0][1] * y, M[1][0] * x + M[1][1] * y) for x, y in pts]
    P, Q = RationalPolytope.from_vertices(pts), RationalPolytope.from_vertices(img)
    assert normalized_volume(P) == normalized_volume(Q) == shoelace(P.vertices)


@settings(max_examples=60, deadline=None)
@given(points2)
def test_count_matches_box_scan(pts):
    if not _full(pts):
        return
    P = RationalPolytope.from_vertices(pts)
    lo, hi = bounding_box(P)
    assert count_lattice_points(P) == box_count(P.normals, P.offsets, lo, hi)


@settings(max_examples=60, deadline=None)
@given(points2)
def test_dual_round_trip(pts):
    if not _full(pts):
        return
    P = RationalPolytope.from_vertices(pts)
    back = RationalPolytope.from_halfspaces(P.normals, P.offsets)
    assert set(back.vertices) == set(P.vertices)
    P.check_consistency()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=3),
       st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_refinement_makes_min_linear(gens, probe):
    X = variety("P1xP1")
    forms = tuple(tuple(gens) for _ in X.fan.cones)
    fn = MinFunction(forms)
    fan, (f,) = refine_fan(X.fan, [fn])
    for i, c in enumerate(fan.cones):
        cone = fan.cone(i)
        for k in c:
            assert f.values[k] == min(sum(a * b for a, b in zip(g, fan.rays[k])) for g in gens)
        assert cone.dim == 2
    if any(probe):
        assert f(probe) == fn.value(X.fan.locate(probe), probe)


def test_cone_dimension():
    assert Cone.of([(1, 0, 0), (0, 1, 0)]).dim == 2
