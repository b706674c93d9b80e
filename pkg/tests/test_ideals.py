from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kstab.ideals import (FlagIdeal, IdealError, InvariantIdeal, flag_ideal, order_function,
                          trivial_flag)
from kstab.blowup import random_flag_ideal
from kstab.toric import variety


P2 = variety("P2")
CHART = 1  # rays (1,0), (0,1) of P2: the usual affine plane


def test_unit_order_is_zero():
    phi = order_function(P2, InvariantIdeal.unit(P2.fan))
    assert all(v == 0 for v in phi.values)


def test_maximal_ideal_order():
    I = InvariantIdeal.fixed_point(P2.fan, CHART)
    assert I.order_at((3, 5)) == 3 and I.order_at((1, 1)) == 1
    # trivial away from the chart's fixed point
    assert I.order_at((-1, -1)) == 0 and I.order_at((-1, 4)) == 0


def test_x2_y_order():
    I = InvariantIdeal.of(P2.fan, {CHART: [(2, 0), (0, 1)]})
    for u in [(1, 1), (1, 3), (4, 1), (0, 2)]:
        assert I.order_at(u) == min(2 * u[0], u[1])


def test_trivial_flag():
    J = trivial_flag(P2, 3)
    assert J.trivial_type and J.N == 3
    assert J.order_at((1, 2, 1)) == 3 and J.order_at((0, 0, 1)) == 3


def test_point_flag_on_p1_has_s_zero():
    X = variety("P1")
    J = flag_ideal(X, [InvariantIdeal.fixed_point(X.fan, 0)])
    assert J.cosupport_dimension == 0 and not J.trivial_type


def test_boundary_curve_flag_has_s_one():
    J = flag_ideal(P2, [InvariantIdeal.boundary_divisor(P2.fan, 0)])
    assert J.cosupport_dimension == 1


def test_flag_order_p1():
    X = variety("P1")
    J = flag_ideal(X, [InvariantIdeal.fixed_point(X.fan, 0)])
    # the fixed point of cone 0 sits at the ray +1
    for u, s in [(3, 1), (1, 3), (-2, 5), (2, 2), (-1, 0)]:
        assert J.order_at((u, s)) == min(max(u, 0), s)


def test_broken_chain_rejected():
    m = InvariantIdeal.fixed_point(P2.fan, CHART)
    with pytest.raises(IdealError):
        flag_ideal(P2, [InvariantIdeal.unit(P2.fan), m])


def test_incompatible_charts_rejected():
    with pytest.raises(IdealError):
        InvariantIdeal.of(P2.fan, {CHART: [(1, 0)]}).validate()


def test_all_zero_levels_is_trivial_not_error():
    assert trivial_flag(P2, 1).trivial_type


def test_leading_zero_levels_normalized():
    m = InvariantIdeal.fixed_point(P2.fan, CHART)
    J = flag_ideal(P2, [InvariantIdeal.zero(P2.fan), m])
    assert J.shift == 1 and J.N == 1


def test_irregular_generator_rejected():
    with pytest.raises(IdealError):
        InvariantIdeal.of(P2.fan, {CHART: [(-1, 2)]}).validate()


def test_json_round_trip():
    J = random_flag_ideal(P2, 5)
    assert FlagIdeal.from_json(P2, J.to_json()) == J


def test_json_level_count_mismatch():
    with pytest.raises(IdealError):
        FlagIdeal.from_json(P2, {"N": 2, "levels": [{"zero": True}]})


def test_zero_level_json():
    J = trivial_flag(P2, 2)
    assert J.to_json()["levels"] == [{"zero": True}, {"zero": True}]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["P1", "P2", "P1xP1", "F1"]), st.integers(0, 500), st.data())
def test_flag_order_monotone_under_inclusion(name, seed, data):
    X = variety(name)
    J = random_flag_ideal(X, seed)
    # enlarging the bottom level by the next one keeps the chain and the flag grows
    levels = list(J.levels)
    bigger = flag_ideal(X, [levels[0] + J.level(1)] + levels[1:])
    w = data.draw(st.tuples(*[st.integers(-4, 4)] * X.n, st.integers(0, 4)))
    assert bigger.order_at(w) <= J.order_at(w)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["P2", "P1xP1", "Bl3P2"]), st.integers(0, 300))
def test_random_flags_validate(name, seed):
    J = random_flag_ideal(variety(name), seed)
    J.validate()
    assert not J.trivial_type
    assert 0 <= J.cosupport_dimension < J.X.n


def test_order_value_is_fraction():
    assert isinstance(InvariantIdeal.unit(P2.fan).order_at((1, 1)), Fraction)
