from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kstab.blowup import blowup_model, minimal_semiample_r, random_flag_ideal
from kstab.dfinter import (build_nef_model, decomposition_check, donaldson_futaki_intersection,
                           intersection_numbers, mixed_products)
from kstab.dfweight import donaldson_futaki_weight
from kstab.ideals import InvariantIdeal, flag_ideal, trivial_flag
from kstab.toric import variety


def point_flag(name, cone=0):
    X = variety(name)
    return X, flag_ideal(X, [InvariantIdeal.fixed_point(X.fan, cone)])


def test_p1_table():
    X, J = point_flag("P1")
    nm = build_nef_model(X, J, 1)
    assert nm.m0 <= 1
    t = intersection_numbers(nm)
    assert (t["A^{n+1}"], t["A^n.L"], t["A^n.E"], t["A^n.K"]) == (-1, 0, 1, 1)


@pytest.mark.parametrize("N", [1, 2])
def test_trivial_model(N):
    X = variety("P2")
    J = trivial_flag(X, N)
    nm = build_nef_model(X, J, 1)
    t = intersection_numbers(nm)
    # E = N F_0, so A^{n+1} = -(n+1) N L^n while the DF terms cancel
    assert t["A^{n+1}"] == -(X.n + 1) * N * t["L^n"]
    assert t["A^n.E"] == N * t["L^n"]
    assert donaldson_futaki_intersection(X, J, 1).value == 0


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1", "F1"])
def test_lbar_top_power_vanishes(name):
    X, J = point_flag(name)
    assert mixed_products(build_nef_model(X, J, 1))[0] == 0


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1", "Bl3P2"])
def test_mixed_products_match_table(name):
    X, J = point_flag(name)
    nm = build_nef_model(X, J, 1)
    t, mixed = intersection_numbers(nm), mixed_products(nm)
    n = X.n
    assert mixed[n + 1] == t["A^{n+1}"] and mixed[n] == t["A^n.L"]


@pytest.mark.parametrize("name, df", [("P1", Fraction(1, 2)), ("P2", Fraction(3, 2)),
                                      ("P1xP1", Fraction(4, 3))])
def test_point_blowup_df(name, df):
    X, J = point_flag(name)
    assert donaldson_futaki_intersection(X, J, 1).value == df


def test_twist_independence():
    X = variety("P2")
    J = random_flag_ideal(X, 2)
    r = minimal_semiample_r(blowup_model(X, J))
    m0 = build_nef_model(X, J, r).m0
    values = {donaldson_futaki_intersection(X, J, r, m).value for m in (m0, m0 + 1, m0 + 3)}
    assert len(values) == 1


def test_decomposition_point_supported():
    X, J = point_flag("P2")
    dec = decomposition_check(X, J, 1)
    assert dec.s == 0 and dec.first == 0 and all(dec.checks.values())


def test_decomposition_divisor_supported():
    X = variety("P2")
    J = flag_ideal(X, [InvariantIdeal.boundary_divisor(X.fan, 0)])
    dec = decomposition_check(X, J, 1)
    assert dec.s == 1 and dec.first > 0 and dec.e_degree > 0 and dec.hodge < 0
    assert all(dec.checks.values())


instances = st.tuples(st.sampled_from(["P1", "P2", "P1xP1", "F1", "Bl2P2", "P(1,1,2)"]),
                      st.integers(0, 10 ** 4))


@settings(max_examples=25, deadline=None)
@given(instances)
def test_routes_agree(inst):
    X = variety(inst[0])
    J = random_flag_ideal(X, inst[1])
    r = minimal_semiample_r(blowup_model(X, J))
    assert donaldson_futaki_weight(X, J, r).value == donaldson_futaki_intersection(X, J, r).value


@settings(max_examples=25, deadline=None)
@given(instances)
def test_decomposition_random(inst):
    X = variety(inst[0])
    J = random_flag_ideal(X, inst[1])
    dec = decomposition_check(X, J)
    assert all(dec.checks.values()), dec.checks
