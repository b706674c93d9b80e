from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kstab.blowup import blowup_model, minimal_semiample_r, random_flag_ideal
from kstab.dfweight import (FitError, coefficient_ideal, donaldson_futaki_weight, fit_polynomial,
                            evaluate, literal_weight, normalized_weight, twisted_section_count,
                            weight, weight_data)
from kstab.ideals import InvariantIdeal, flag_ideal, trivial_flag
from kstab.toric import section_count, variety

from oracles import integral_closure_weight


def point_flag(name, cone=0):
    X = variety(name)
    return X, flag_ideal(X, [InvariantIdeal.fixed_point(X.fan, cone)])


def test_coefficient_ideal_tail_is_unit():
    X, J = point_flag("P2")
    assert coefficient_ideal(J, 3, 3).is_unit() and coefficient_ideal(J, 2, 5).is_unit()


def test_coefficient_ideal_k1_is_level():
    X = variety("P2")
    J = random_flag_ideal(X, 7, max_levels=3)
    for j in range(J.N):
        assert coefficient_ideal(J, 1, j) == J.level(j)


def test_coefficient_ideal_mixed_term():
    X, J = point_flag("P2")
    assert coefficient_ideal(J, 2, 1) == InvariantIdeal.fixed_point(X.fan, 0)
    assert coefficient_ideal(J, 2, 0) == InvariantIdeal.fixed_point(X.fan, 0) ** 2


def test_twisted_counts():
    X = variety("P1")
    m = InvariantIdeal.fixed_point(X.fan, 0)
    assert twisted_section_count(X, 1, InvariantIdeal.unit(X.fan)) == section_count(X, 1)
    assert twisted_section_count(X, 1, m) == 2
    assert twisted_section_count(X, 1, InvariantIdeal.zero(X.fan)) == 0


def test_p1_weight_k1():
    X, J = point_flag("P1")
    assert weight(X, J, 1, 1, closure=False) == -1 == weight(X, J, 1, 1)


def test_trivial_weight_is_linear():
    X = variety("P2")
    J = trivial_flag(X, 2)
    for k in (1, 2, 3):
        assert weight(X, J, 1, k) == -2 * k * section_count(X, k)


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1"])
def test_unit_tail_leaves_weight(name):
    X = variety(name)
    J = random_flag_ideal(X, 11)
    longer = flag_ideal(X, list(J.levels) + [InvariantIdeal.unit(X.fan)])
    for k in (1, 2):
        assert weight(X, J, 1, k) == weight(X, longer, 1, k)
        assert weight(X, J, 1, k, closure=False) == weight(X, longer, 1, k, closure=False)


@pytest.mark.parametrize("name", ["P1", "P2", "P1xP1"])
def test_literal_matches_normalized_on_points(name):
    X, J = point_flag(name)
    for k in (1, 2, 3):
        assert literal_weight(X, J, 1, k) == normalized_weight(blowup_model(X, J), 1, k)[1]


@pytest.mark.parametrize("N", [1, 2, 3])
def test_trivial_df_zero(N):
    X = variety("P1xP1")
    assert donaldson_futaki_weight(X, trivial_flag(X, N), 1).value == 0


def test_p2_point_df():
    X, J = point_flag("P2")
    rep = donaldson_futaki_weight(X, J, 1)
    assert rep.value == Fraction(3, 2)
    assert rep.e[(3, 3)] == 0


def test_p1_point_df():
    X, J = point_flag("P1")
    # the blown-up central fibre is a chain of two lines, not a product configuration
    assert donaldson_futaki_weight(X, J, 1).value == Fraction(1, 2)
    assert donaldson_futaki_weight(X, J, 1, closure=False).value == Fraction(1, 2)


def test_fit_error_below_ceiling():
    X, J = point_flag("P2")
    with pytest.raises(FitError):
        weight_data(X, J, 1, kmax=3)


def test_not_semiample_rejected():
    X = variety("P2")
    J = flag_ideal(X, [InvariantIdeal.fixed_point(X.fan, 0) ** 5])
    with pytest.raises(ValueError):
        donaldson_futaki_weight(X, J, 1)


def test_report_carries_samples():
    X, J = point_flag("P2")
    out = donaldson_futaki_weight(X, J, 1).to_json()
    assert out["DF"] == "3/2" and len(out["weights"]["samples"]) >= 5


def test_fit_and_evaluate():
    coeffs = fit_polynomial([0, 1, 2, 3], [1, 3, 11, 31], 3)
    assert [evaluate(coeffs, x) for x in (0, 1, 2, 3, 4)] == [1, 3, 11, 31, 69]
    with pytest.raises(FitError):
        fit_polynomial([0, 1], [1, 2], 3)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["P1", "P2", "P1xP1", "F1"]), st.integers(0, 10 ** 4), st.integers(1, 2))
def test_normalized_weight_matches_valuation_oracle(name, seed, K):
    X = variety(name)
    J = random_flag_ideal(X, seed)
    model = blowup_model(X, J)
    r = minimal_semiample_r(model)
    assert normalized_weight(model, r, K)[1] == integral_closure_weight(X, J, r, K)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["P1", "P2", "P1xP1"]), st.integers(0, 10 ** 4))
def test_top_coefficient_vanishes(name, seed):
    X = variety(name)
    J = random_flag_ideal(X, seed)
    rep = donaldson_futaki_weight(X, J)
    assert rep.e[(X.n + 1, X.n + 1)] == 0
