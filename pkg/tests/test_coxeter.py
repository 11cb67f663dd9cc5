from fractions import Fraction
import pytest
from hypothesis import given

from coxcohom import (CoxeterSystem, InvalidInput, MultiParameter, classify_finite, enumerate_words,
                      finite_type, growth_series, radius_of_convergence, reciprocal_growth,
                      regime_test, spherical_poset)
from coxcohom.coxeter import (FINITE_TYPES_RANK4, check_census_braid, inverse_growth_value,
                              reciprocal_growth_uniform, to_fraction)
from coxcohom.weighted import dihedral_system

from conftest import coxeter_systems, positive_rationals

INF = "infinity"


def triangle(p, q, r):
    return CoxeterSystem.from_edges("stu", {("s", "t"): p, ("t", "u"): q, ("s", "u"): r})


def pentagon():
    v = [f"v{i}" for i in range(5)]
    return CoxeterSystem.right_angled(v, [(v[i], v[(i + 1) % 5]) for i in range(5)])


def truncate(series, n):
    return {e: c for e, c in series.items() if sum(e) <= n and c}


def test_labels_validated():
    with pytest.raises(InvalidInput):
        CoxeterSystem.from_edges("st", {("s", "t"): 1})
    with pytest.raises(InvalidInput):
        CoxeterSystem.from_edges("st", {("s", "t"): "7.5"})


def test_classification_examples():
    c = classify_finite(CoxeterSystem.from_edges("st", {("s", "t"): 7}))
    assert c.finite and c.order == 14 and c.components[0][0].name == "I2(7)"
    assert not classify_finite(triangle(3, 3, 3)).finite
    c = classify_finite(triangle(3, 3, 2))
    assert c.finite and c.order == 24 and c.components[0][0].name == "A3"


@pytest.mark.parametrize("kind,n,m,order", [
    ("A", 4, 0, 120), ("B", 4, 0, 384), ("D", 4, 0, 192), ("F", 4, 0, 1152), ("H", 3, 0, 120),
    ("H", 4, 0, 14400), ("E", 6, 0, 51840), ("I", 2, 5, 10)])
def test_catalogue_orders(kind, n, m, order):
    assert classify_finite(finite_type(kind, n, m)).order == order


@pytest.mark.parametrize("kind,n,m", [("A", 3, 0), ("B", 3, 0), ("H", 3, 0), ("I", 2, 6), ("D", 4, 0)])
def test_enumeration_matches_catalogue(kind, n, m):
    W = finite_type(kind, n, m)
    order = classify_finite(W).order
    census = enumerate_words(W, 100)
    assert census.complete and len(census) == order
    prof = census.length_profile()
    assert prof == tuple(reversed(prof))  # longest element gives a palindrome
    poly = growth_series(W).uniform().series(len(prof))
    assert [poly.get((k,), 0) for k in range(len(prof))] == list(prof)


def test_spherical_subsets():
    v = pentagon()
    assert len(v.spherical_subsets) == 11
    assert set(dihedral_system().spherical_subsets) == {frozenset(), frozenset("+"), frozenset("-")}
    T = triangle(3, 3, 3)
    sph = T.spherical_subsets
    assert len(sph) == 7 and frozenset("stu") not in sph
    nerve = T.nerve
    assert nerve.f_vector() == [1, 3, 3] and not nerve.is_flag()


@given(coxeter_systems())
def test_spherical_subsets_downward_closed(W):
    sph = set(W.spherical_subsets)
    for J in sph:
        for s in J:
            assert J - {s} in sph
        assert classify_finite(W, sorted(J)).finite


def test_word_enumeration_examples():
    Z2 = CoxeterSystem.from_edges("s", {})
    assert len(enumerate_words(Z2, 5)) == 2
    assert enumerate_words(finite_type("I", 2, 3), 10).length_profile() == (1, 2, 2, 1)
    assert enumerate_words(dihedral_system(), 3).length_profile() == (1, 2, 2, 2)


def test_classes():
    assert all(len(c) == 1 for c in pentagon().classes)
    assert finite_type("I", 2, 3).nclasses == 1
    assert finite_type("B", 2).nclasses == 2


def test_growth_series_examples():
    Z2 = CoxeterSystem.from_edges("s", {})
    assert growth_series(Z2).series(3) == {(0,): 1, (1,): 1}
    D = dihedral_system()
    a, b = Fraction(1, 3), Fraction(2, 7)
    assert growth_series(D).evaluate((a, b)) == (1 + a) * (1 + b) / (1 - a * b)
    A3 = growth_series(finite_type("A", 3)).uniform()
    expected = {}
    for i in range(2):
        for j in range(3):
            for k in range(4):
                expected[i + j + k] = expected.get(i + j + k, 0) + 1
    assert A3.series(6) == {(k,): c for k, c in expected.items()}


@given(coxeter_systems(max_rank=4))
def test_growth_series_matches_census(W):
    n = 6
    census = enumerate_words(W, n)
    assert truncate(growth_series(W).series(n), n) == census.growth_polynomial()


@given(coxeter_systems(max_rank=3, labels=(2, 3, 4, INF)))
def test_braid_enumeration_agrees_with_reflection(W):
    a = enumerate_words(W, 5)
    b = enumerate_words(W, 5, method="braid")
    assert sorted(e.word for e in a.entries) == sorted(e.word for e in b.entries)
    assert check_census_braid(a) == []


@given(coxeter_systems(max_rank=4))
def test_reciprocal_identity(W):
    prod_fn = reciprocal_growth(W) * growth_series(W)
    assert prod_fn.is_polynomial() and prod_fn.series(0) == {(0,) * W.nclasses: 1}
    assert prod_fn.series(4) == {(0,) * W.nclasses: 1}
    assert reciprocal_growth(W).uniform() == reciprocal_growth_uniform(W)


@given(coxeter_systems(max_rank=4), positive_rationals)
def test_inverse_growth_value(W, q):
    q = q / (1 + q) / 4  # inside the radius of convergence for every rank-4 system
    point = (q,) * W.nclasses
    assert inverse_growth_value(W, point) * growth_series(W).evaluate(point) == 1


def test_regime_examples():
    A3 = finite_type("A", 3)
    assert regime_test(A3, MultiParameter.uniform(A3, 5)).verdict == "Both"
    D = dihedral_system()
    assert regime_test(D, MultiParameter.uniform(D, Fraction(1, 2))).verdict == "InClosureR"
    assert regime_test(D, MultiParameter.uniform(D, 1)).verdict == "Both"
    P = pentagon()
    assert regime_test(P, MultiParameter.uniform(P, 1)).verdict == "Unknown"
    lo, hi = radius_of_convergence(P)
    rho = (3 - 5 ** 0.5) / 2
    assert lo <= Fraction(rho) <= hi and hi - lo < Fraction(1, 10 ** 9)


@given(coxeter_systems(max_rank=4), positive_rationals)
def test_regime_consistent_with_inverse(W, q):
    a = regime_test(W, MultiParameter.uniform(W, q))
    b = regime_test(W, MultiParameter.uniform(W, 1 / q))
    assert a.small == b.large and a.large == b.small


def test_multiparameter_validation():
    D = dihedral_system()
    assert MultiParameter(D, {"+": "1/3", "-": 2}).values == (Fraction(1, 3), Fraction(2))
    for bad in (["0.5", "1"], [0, 1], [True, 1], ["1e3", "1"]):
        with pytest.raises(InvalidInput):
            MultiParameter(D, bad)
    A2 = finite_type("I", 2, 3)
    with pytest.raises(InvalidInput):
        MultiParameter(A2, {1: 2, 2: 3})
    with pytest.raises(InvalidInput):
        to_fraction(0.5)


def test_rank4_catalogue_is_finite():
    for kind, n in FINITE_TYPES_RANK4:
        W = finite_type(kind, n)
        assert W.is_finite() and W.rank == n


def test_spherical_poset_is_graded_by_size():
    P = spherical_poset(pentagon())
    assert len(P.poset.elements) == 11
