from fractions import Fraction
from math import factorial

import pytest

from kstab.dfweight import fit_polynomial, evaluate
from kstab.lattice import normalized_volume
from kstab.toric import (CORPORA, NotFanoError, TInvariantDivisor, ToricFanoVariety, load_corpus,
                         section_count, variety)


def test_p1_polytope():
    assert sorted(variety("P1").Q.vertices) == [(-1,), (1,)]


def test_p2_polytope():
    assert set(variety("P2").Q.vertices) == {(-1, -1), (2, -1), (-1, 2)}


def test_p1xp1_polytope():
    assert set(variety("P1xP1").Q.vertices) == {(-1, -1), (-1, 1), (1, -1), (1, 1)}


@pytest.mark.parametrize("name, m, count", [("P1", 1, 3), ("P2", 1, 10), ("P2", 0, 1), ("P1xP1", 0, 1)])
def test_section_counts(name, m, count):
    assert section_count(variety(name), m) == count


def test_corpus_sizes():
    assert len(load_corpus("reflexive-polygons-16")) == 16
    assert len(load_corpus("threefolds-basic")) == 4
    assert len(load_corpus("smooth-del-pezzo-toric")) == 5


def test_unknown_corpus():
    with pytest.raises(KeyError):
        load_corpus("nope")


def test_non_fano_rejected():
    # Hirzebruch F2 is not Fano: origin lies on the boundary of Q
    with pytest.raises(NotFanoError):
        ToricFanoVariety.from_json({"name": "F2", "rays": [[1, 0], [0, 1], [-1, 2], [0, -1]],
                                    "max_cones": [[0, 1], [1, 2], [2, 3], [3, 0]]}).Q


@pytest.mark.parametrize("corpus", CORPORA)
def test_reflexive_iff_lattice_vertices(corpus):
    for X in load_corpus(corpus):
        assert X.is_gorenstein
        assert all(x.denominator == 1 for v in X.Q.vertices for x in v)


@pytest.mark.parametrize("corpus", CORPORA)
def test_degree_is_volume(corpus):
    for X in load_corpus(corpus):
        assert X.degree == factorial(X.n) * normalized_volume(X.Q)


@pytest.mark.parametrize("name, n", [("P1", 1), ("P2", 2), ("P3", 3)])
def test_projective_space_degree(name, n):
    assert variety(name).degree == (n + 1) ** n


@pytest.mark.parametrize("name", ["P2", "P1xP1", "refl-b6-3", "P1xP2"])
def test_section_count_polynomial(name):
    X = variety(name)
    ms = list(range(X.n + 4))
    ys = [section_count(X, m) for m in ms]
    coeffs = fit_polynomial(ms, ys, X.n)
    assert all(evaluate(coeffs, m) == y for m, y in zip(ms, ys))
    assert coeffs[X.n] == X.degree / factorial(X.n)


def test_json_round_trip():
    X = variety("Bl3P2")
    Y = ToricFanoVariety.from_json(X.to_json())
    assert Y.fan == X.fan and Y.name == X.name


def test_divisor_witness():
    X = variety("P2")
    D = TInvariantDivisor.from_character(X, (-1, -1), 1)
    assert D.coefficients == (3, 0, 0)
    D.validate(X)
    with pytest.raises(ValueError):
        TInvariantDivisor((Fraction(3), Fraction(0), Fraction(1)), 1, (-1, -1)).validate(X)
