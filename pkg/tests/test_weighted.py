from fractions import Fraction
from math import prod

import pytest
from hypothesis import assume, given, strategies as st

from coxcohom import (CoxeterSystem, CoxeterVertex, FiniteOfOrder, InfiniteGeneric, IntegerGroup,
                      InvalidInput, MultiParameter, PoleError, ProvisoViolation, RegimeUncertifiable,
                      SimplicialComplex, VertexGroupDescriptor, cycle_graph, dim_D, dims_D,
                      finite_type, graph_product_system, octahedralization, l2_graphproduct_finite, oct_limits,
                      oct_weighted, path_graph, regime_test, sphere0, weighted_betti,
                      weighted_graphproduct)
from coxcohom.coxeter import inverse_growth_value
from coxcohom.homology import reduced_betti
from coxcohom.weighted import dihedral_system, growth_value, kunneth, oct_p

from conftest import coxeter_systems, flag_complexes, positive_rationals

Z2 = CoxeterSystem.from_edges("s", {})
D = dihedral_system()


def pentagon():
    return CoxeterSystem.right_angled(cycle_graph(5))


def certified(W, q):
    c = regime_test(W, MultiParameter.uniform(W, q))
    return c.small or c.large


def test_dim_D_for_Z2():
    q = Fraction(2, 5)
    d = dims_D(Z2, MultiParameter.uniform(Z2, q))
    assert d[frozenset()] == q / (1 + q)
    assert d[frozenset("s")] == 1 / (1 + q)


@pytest.mark.parametrize("kind,n", [("A", 3), ("B", 3), ("H", 3), ("I", 2)])
def test_dim_D_top_for_finite(kind, n):
    W = finite_type(kind, n, 5 if kind == "I" else 0)
    q = MultiParameter.uniform(W, Fraction(3, 7))
    assert dim_D(W, q, W.generators) == 1 / growth_value(W, q)


def test_dims_sum_pentagon():
    P = pentagon()
    assert sum(dims_D(P, MultiParameter.uniform(P, 3)).values()) == 1


@given(coxeter_systems(max_rank=4), positive_rationals)
def test_dims_sum_to_one(W, q):
    assert sum(dims_D(W, MultiParameter.uniform(W, q)).values()) == 1


@given(coxeter_systems(max_rank=4), positive_rationals)
def test_dims_nonnegative_in_large_regime(W, q):
    mp = MultiParameter.uniform(W, q)
    assume(regime_test(W, mp).large)
    assert all(d >= 0 for d in dims_D(W, mp).values())


def test_dinf_weighted_betti():
    for q in (Fraction(3), Fraction(7, 2), Fraction(100)):
        prof = weighted_betti(D, q)
        assert prof.branch == "large" and prof.betti == {1: (q - 1) / (q + 1)}
    q = Fraction(1, 2)
    assert weighted_betti(D, q).betti == {0: (1 - q) / (1 + q)}
    assert weighted_betti(D, 1).betti == {}


def test_finite_and_uncertified():
    for q in (Fraction(1, 3), Fraction(1), Fraction(4)):
        assert weighted_betti(Z2, q).betti == {0: 1 / (1 + q)}
    with pytest.raises(RegimeUncertifiable):
        weighted_betti(pentagon(), 1)
    forced = weighted_betti(pentagon(), 1, force="large")
    assert forced.unverified and forced.branch == "large"


@given(coxeter_systems(max_rank=4), positive_rationals)
def test_euler_characteristic_is_reciprocal_growth(W, q):
    assume(certified(W, q))
    prof = weighted_betti(W, q)
    assert prof.euler_characteristic() == inverse_growth_value(W, (q,) * W.nclasses)


@given(coxeter_systems(max_rank=3), coxeter_systems(max_rank=2), positive_rationals)
def test_kunneth_for_direct_products(A, B, q):
    B = CoxeterSystem.from_edges([("b", s) for s in B.generators],
                                 {(("b", s), ("b", t)): B.m(s, t)
                                  for s in B.generators for t in B.generators if s < t})
    gens = list(A.generators) + list(B.generators)
    labels = {(s, t): A.m(s, t) for s in A.generators for t in A.generators if s < t}
    labels |= {(s, t): B.m(s, t) for s in B.generators for t in B.generators if s < t}
    labels |= {(s, t): 2 for s in A.generators for t in B.generators}
    AB = CoxeterSystem.from_edges(gens, labels)
    assume(certified(A, q) and certified(B, q) and certified(AB, q))
    ra, rb, rab = (regime_test(X, MultiParameter.uniform(X, q)) for X in (A, B, AB))
    # factors must be read in a common regime
    assume((ra.small and rb.small) or (ra.large and rb.large))
    branch = "small" if ra.small and rb.small else "large"
    assume(getattr(rab, branch))
    pa, pb, pab = (weighted_betti(X, q, force=branch) for X in (A, B, AB))
    assert pab.betti == kunneth([pa.betti, pb.betti])


def test_graph_products_of_finite_groups():
    free = l2_graphproduct_finite(sphere0("a", "b"), {"a": 2, "b": 2})
    assert free.betti == {}
    z3 = l2_graphproduct_finite(sphere0("a", "b"), {"a": 3, "b": 3})
    chi_orb = Fraction(1, 3) + Fraction(1, 3) - 1
    assert z3.betti == {1: -chi_orb}
    prod = l2_graphproduct_finite(SimplicialComplex.simplex("ab"), {"a": 2, "b": 2})
    assert prod.betti == {0: Fraction(1, 4)}


@given(flag_complexes(max_vertices=4), st.lists(st.integers(2, 5), min_size=4, max_size=4))
def test_finite_graph_product_euler_characteristic(L, orders):
    orders = dict(zip(L.vertices, orders))
    assume(regime_test(CoxeterSystem.right_angled(L),
                       MultiParameter(CoxeterSystem.right_angled(L),
                                      {s: orders[s] - 1 for s in L.vertices})).verdict != "Unknown")
    prof = l2_graphproduct_finite(L, orders)
    # orbifold Euler characteristic: sum over simplices of prod (1/|G_s| - 1)
    chi = sum(prod((Fraction(1, orders[s]) - 1 for s in J), start=Fraction(1)) for J in L.simplices())
    assert prof.euler_characteristic() == chi


def _finite_factor(draw_kind):
    return {"A1": CoxeterSystem.from_edges("x", {}), "A2": finite_type("A", 2),
            "B2": finite_type("B", 2), "I5": finite_type("I", 2, 5)}[draw_kind]


@given(flag_complexes(max_vertices=3),
       st.lists(st.sampled_from(["A1", "A2", "B2", "I5"]), min_size=3, max_size=3),
       st.sampled_from([Fraction(1, 10), Fraction(1, 5), Fraction(1, 20)]))
def test_graph_product_small_branch_matches_direct(L, kinds, q):
    factors = {s: _finite_factor(k) for s, k in zip(L.vertices, kinds)}
    V = graph_product_system(L, factors)
    assume(certified(V, q))
    res = weighted_graphproduct(L, factors, q)
    assert res.branch == "small"
    assert res.growth_check["V(q)"] == res.growth_check["W(p)"]
    assert res.betti == weighted_betti(V, q).betti


def test_graph_product_of_dihedral_vertices():
    L = sphere0("a", "b")
    q = Fraction(3)
    res = weighted_graphproduct(L, {"a": D, "b": D}, q)
    assert res.branch == "large"
    assert res.betti == {1: 1 + 2 * (q - 1) / (q + 1)}
    V = graph_product_system(L, {"a": D, "b": D})
    assert weighted_betti(V, q).betti == res.betti


def test_graph_product_proviso():
    L = sphere0("a", "b")
    with pytest.raises(ProvisoViolation):
        weighted_graphproduct(L, {"a": D, "b": finite_type("A", 2)}, 3, branch="large")


def test_oct_examples():
    two = sphere0("a", "b")
    q = Fraction(5)
    rep = oct_weighted(two, q)
    assert rep.clause == "q > 1" and rep.betti == {1: 1 + 2 * (q - 1) / (q + 1)}
    for L in (two, path_graph(2), cycle_graph(4), SimplicialComplex.simplex("abc")):
        at1 = oct_weighted(L, 1)
        assert at1.clause == "q = 1" and at1.p == {}
        assert at1.betti == {n + 1: Fraction(b) for n, b in reduced_betti(L).items()}


@given(flag_complexes(max_vertices=4), st.sampled_from([Fraction(1, 10), Fraction(1, 7), Fraction(1, 4)]))
def test_oct_growth_identity(L, q):
    W = CoxeterSystem.right_angled(L)
    O = CoxeterSystem.right_angled(octahedralization(L))
    try:
        rhs = growth_value(W, MultiParameter.uniform(W, oct_p(q, q)))
    except PoleError:
        assume(False)
    assert growth_value(O, MultiParameter.uniform(O, q)) == rhs


def test_oct_p_pole():
    with pytest.raises(PoleError):
        oct_p(Fraction(2), Fraction(1, 2))


def test_oct_limits_on_path():
    lim = oct_limits(path_graph(2))
    assert lim["acyclic"]
    assert lim["from_below"] == lim["from_above"] == lim["link_sum"] == {1: 1}


def test_vertex_group_descriptors():
    for d in (FiniteOfOrder(3), IntegerGroup(), CoxeterVertex(D), InfiniteGeneric({1: "1/2"}, 2)):
        assert VertexGroupDescriptor.from_json(d.to_json()) == d
    assert VertexGroupDescriptor.from_json("Z/5") == FiniteOfOrder(5)
    assert FiniteOfOrder(4).l2_betti() == {0: Fraction(1, 4)}
    assert CoxeterVertex(finite_type("A", 2)).l2_betti() == {0: Fraction(1, 6)}
    assert IntegerGroup().l2_betti() == {}
    with pytest.raises(InvalidInput):
        FiniteOfOrder(1)
    with pytest.raises(InvalidInput):
        InfiniteGeneric({0: "-1"})
    with pytest.raises(InvalidInput):
        VertexGroupDescriptor.from_json("SL2")
