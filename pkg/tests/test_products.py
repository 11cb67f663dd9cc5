from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coxcohom import (CoxeterSystem, FiniteOfOrder, InfiniteGeneric, IntegerGroup, PjoinContext,
                      ProvisoViolation, SimplicialComplex, cycle_graph, duality_report, finite_type,
                      groupring_bb, groupring_coxeter, groupring_graphproduct, groupring_salvetti,
                      l2_bb, l2_graphproduct, l2_salvetti, path_graph, pjoin_cohomology, sphere0)
from coxcohom.weighted import dihedral_system

from conftest import coxeter_systems, flag_complexes

Z = IntegerGroup


def signature(expr, degree=None):
    return sorted((sorted(map(str, J)), g.rank, g.torsion) for J, g in expr.signature(degree))


def test_l2_salvetti_examples():
    assert l2_salvetti(CoxeterSystem.right_angled(sphere0("a", "b"))).betti == {1: 1}
    assert l2_salvetti(CoxeterSystem.right_angled(cycle_graph(4))).betti == {2: 1}
    assert l2_salvetti(CoxeterSystem.right_angled(SimplicialComplex.simplex("abc"))).betti == {}


@given(coxeter_systems(max_rank=4))
def test_l2_salvetti_euler_characteristic(W):
    chi = sum((-1) ** len(J) for J in W.spherical_subsets)
    assert l2_salvetti(W).euler_characteristic() == chi


def test_l2_bb_examples():
    assert l2_bb(SimplicialComplex.simplex("st")).betti == {}
    assert l2_bb(path_graph(2)).betti == {1: 1}
    assert l2_bb(SimplicialComplex.simplex("abc")).betti == {}


def test_l2_graphproduct_examples():
    two = sphere0("s", "t")
    assert l2_graphproduct(two, {"s": Z(), "t": Z()}).betti == {1: 1}
    assert l2_graphproduct(cycle_graph(4), {v: Z() for v in cycle_graph(4).vertices}).betti == {2: 1}
    pt = SimplicialComplex.from_simplices([["s"]])
    gen = InfiniteGeneric({1: "2/3", 3: "1"})
    assert l2_graphproduct(pt, {"s": gen}).betti == {1: Fraction(2, 3), 3: 1}
    with pytest.raises(ProvisoViolation):
        l2_graphproduct(two, {"s": Z(), "t": FiniteOfOrder(3)})


@given(flag_complexes(max_vertices=5))
def test_integer_vertices_match_salvetti(L):
    desc = {v: Z() for v in L.vertices}
    W = CoxeterSystem.right_angled(L)
    assert l2_graphproduct(L, desc).betti == l2_salvetti(W).betti
    assert signature(groupring_graphproduct(L, desc)) == signature(groupring_salvetti(W))


def test_groupring_graphproduct_examples():
    two = sphere0("s", "t")
    e = groupring_graphproduct(two, {"s": Z(), "t": Z()})
    assert e.degrees() == [1]
    assert signature(e) == [([], 1, ()), (["s"], 1, ()), (["t"], 1, ())]
    f = groupring_graphproduct(two, {"s": FiniteOfOrder(2), "t": FiniteOfOrder(2)})
    assert signature(f) == [([], 1, ())] and f.degrees() == [1]
    with pytest.raises(ProvisoViolation):
        groupring_graphproduct(two, {"s": Z(), "t": FiniteOfOrder(3)})


def test_groupring_salvetti_examples():
    braid = groupring_salvetti(finite_type("I", 2, 3))
    assert braid.degrees() == [2] and signature(braid) == [(["1", "2"], 1, ())]
    F3 = CoxeterSystem.from_edges("abc", {}, default="infinity")
    e = groupring_salvetti(F3)
    assert e.degrees() == [1]
    assert signature(e) == [([], 2, ()), (["a"], 1, ()), (["b"], 1, ()), (["c"], 1, ())]


@given(flag_complexes(max_vertices=5))
def test_groupring_degree_bookkeeping(L):
    e = groupring_salvetti(CoxeterSystem.right_angled(L))
    for t in e.terms:
        assert not t.coefficient.is_zero()
        assert t.degree >= len(t.J)


def test_groupring_bb_examples():
    e = groupring_bb(SimplicialComplex.simplex("st"))
    assert e.degrees() == [1] and signature(e) == [(["s", "t"], 1, ())]
    p = groupring_bb(path_graph(2))
    assert p.degrees() == [1] and p.coefficient_sum(1).rank == 3
    c = groupring_bb(cycle_graph(4))
    assert c.notes["acyclic"] is False


def test_groupring_coxeter_examples():
    d = groupring_coxeter(dihedral_system())
    assert d.degrees() == [1] and signature(d) == [([], 1, ())]
    p = groupring_coxeter(CoxeterSystem.right_angled(cycle_graph(5)))
    assert p.degrees() == [2] and signature(p) == [([], 1, ())]
    z2 = groupring_coxeter(CoxeterSystem.from_edges("s", {}))
    assert z2.degrees() == [0] and signature(z2) == [(["s"], 1, ())]


def test_markdown_rows_sorted():
    e = groupring_salvetti(CoxeterSystem.from_edges("abc", {}, default="infinity"))
    md = e.to_markdown()
    rows = [line for line in md.splitlines() if line.startswith("|") and "---" not in line][1:]
    assert len(rows) == len(e.terms)
    assert [t.sort_key() for t in e.terms] == sorted(t.sort_key() for t in e.terms)
    for row, t in zip(rows, e.terms):
        assert f"| {t.degree} |" in row or row.startswith(f"| {t.degree}")


def test_pjoin_two_points_with_spheres():
    ctx = PjoinContext(sphere0("s", "t"), {"s": sphere0(), "t": sphere0()})
    rep = pjoin_cohomology(ctx, ())
    assert rep.formula.ranks() == {1: 3}
    assert rep.direct.ranks() == {1: 3} and rep.ranks_agree


def test_pjoin_simplex_factors_reduce_to_chamber_pair():
    L = path_graph(2)
    ctx = PjoinContext(L, {v: SimplicialComplex.simplex([0]) for v in L.vertices})
    rep = pjoin_cohomology(ctx, ())
    assert rep.ranks_agree and rep.direct.ranks() == {}
    L = cycle_graph(4)
    ctx = PjoinContext(L, {v: SimplicialComplex.simplex([0]) for v in L.vertices})
    assert pjoin_cohomology(ctx, ()).direct.ranks() == {2: 1}


def test_pjoin_with_full_simplex_factor():
    ctx = PjoinContext(SimplicialComplex.simplex("st"),
                       {"s": sphere0(), "t": SimplicialComplex.simplex("xyz")})
    I = frozenset(("t", v) for v in "xyz")
    rep = pjoin_cohomology(ctx, I)
    assert rep.ranks_agree


FACTORS = {"pt": SimplicialComplex.simplex(["a"]), "S0": sphere0("a", "b"),
           "edge": SimplicialComplex.simplex("ab"), "path": path_graph(1),
           "pt+edge": SimplicialComplex.from_simplices([["a"], ["b", "c"]])}


@given(flag_complexes(max_vertices=3), st.lists(st.sampled_from(sorted(FACTORS)), min_size=3, max_size=3),
       st.data())
def test_pjoin_formula_matches_direct(L, names, data):
    ctx = PjoinContext(L, {v: FACTORS[n] for v, n in zip(L.vertices, names)})
    simplices = sorted(ctx.complex.simplices(), key=lambda s: (len(s), sorted(map(str, s))))
    I = data.draw(st.sampled_from(simplices))
    rep = pjoin_cohomology(ctx, I)
    assert rep.ranks_agree, rep.to_json()


def test_duality_examples():
    c4 = duality_report(cycle_graph(4), "raag")
    assert c4.holds and c4.dimension == 2
    two_edges = duality_report(SimplicialComplex.from_simplices([["a", "b"], ["c", "d"]]), "raag")
    assert not two_edges.holds and two_edges.witness["J"] == [] and two_edges.witness["degree"] == 0
    ph = duality_report(cycle_graph(4), "graphproduct-finite")
    assert ph.holds
    assert not duality_report(path_graph(2), "graphproduct-finite").holds


@given(coxeter_systems(max_rank=4))
def test_descent_census_tabulations(W):
    from coxcohom.coxeter import enumerate_words
    from coxcohom.products import descent_census
    n = 4
    census = descent_census(W, n)
    profile = list(enumerate_words(W, n).length_profile()) + [0] * (n + 1)
    for k in range(n + 1):
        # every descent set is spherical, so the equality table partitions each length
        assert sum(v[k] for v in census.equal.values()) == profile[k]
    for J, counts in census.contained.items():
        assert counts == [sum(census.equal[I][k] for I in census.equal if I <= J) for k in range(n + 1)]
