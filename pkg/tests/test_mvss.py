import pytest
from hypothesis import given, strategies as st

from coxcohom import (InvalidPosetOfSpaces, PjoinContext, Poset, PosetOfSpaces, SimplicialComplex,
                      build_pages, check_conditions, cycle_graph, path_graph, pjoin_cover,
                      rp2_six_vertex, sphere0, verify_decomposition)
from coxcohom.homology import betti_numbers
from coxcohom.mvss import single_piece

from conftest import flag_complexes


def two_arc_cover():
    C = cycle_graph(4)
    arc_a = SimplicialComplex.from_simplices([["v0", "v1"], ["v1", "v2"]])
    arc_b = SimplicialComplex.from_simplices([["v2", "v3"], ["v3", "v0"]])
    ends = SimplicialComplex.from_simplices([["v0"], ["v2"]])
    P = Poset(["A", "B", "X"], [("X", "A"), ("X", "B")])
    return PosetOfSpaces(P, {"A": arc_a, "B": arc_b, "X": ends}, C)


def test_two_arc_circle():
    ps = two_arc_cover()
    rep = build_pages(ps)
    assert {n: r for n, r in rep.total.items() if r} == {0: 1, 1: 1}
    assert rep.total_matches_direct and rep.degenerates
    cond = check_conditions(ps)
    assert not cond.Z_prime
    bad = [m for m in cond.maps if not m.zero_Q]
    assert any(m.degree == 0 and m.target == "X" for m in bad)


def test_single_piece():
    for Y in (cycle_graph(5), rp2_six_vertex(), path_graph(3)):
        ps = single_piece(Y)
        rep = build_pages(ps)
        assert rep.e2_total() == {n: r for n, r in betti_numbers(Y).items() if r}
        assert rep.degenerates
        cond = check_conditions(ps)
        assert cond.Z and cond.Z_prime
        dec = verify_decomposition(ps, cond)
        assert dec.holds and dec.summands["Y"] == {n: r for n, r in betti_numbers(Y).items() if r}


def test_integral_pages_see_torsion():
    rep = build_pages(single_piece(rp2_six_vertex()), integral=True)
    assert rep.total_integral == rep.direct_integral


def test_validation():
    C = cycle_graph(4)
    arc = SimplicialComplex.from_simplices([["v0", "v1"], ["v1", "v2"]])
    small = SimplicialComplex.from_simplices([["v0"]])
    P = Poset(["a", "b"], [("a", "b")])
    with pytest.raises(InvalidPosetOfSpaces):
        PosetOfSpaces(P, {"a": arc, "b": small}, C)  # not monotone
    with pytest.raises(InvalidPosetOfSpaces):
        PosetOfSpaces(Poset(["a"]), {"a": arc}, C)  # does not cover
    other = SimplicialComplex.from_simplices([["x", "y"]])
    with pytest.raises(InvalidPosetOfSpaces):
        PosetOfSpaces(Poset(["a"]), {"a": other}, C)
    arc_b = SimplicialComplex.from_simplices([["v2", "v3"], ["v3", "v0"]])
    with pytest.raises(InvalidPosetOfSpaces):
        PosetOfSpaces(Poset(["A", "B"]), {"A": arc, "B": arc_b}, C)  # intersection not a piece


def test_pjoin_cover_two_points():
    ctx = PjoinContext(sphere0("s", "t"), {"s": sphere0(), "t": sphere0()})
    ps = pjoin_cover(ctx)
    cond = check_conditions(ps)
    assert cond.Z
    dec = verify_decomposition(ps, cond)
    assert dec.holds and {n: r for n, r in dec.direct.items() if r} == {1: 3}
    ranks = sorted(s.get(1, 0) for s in dec.summands.values() if s)
    assert ranks == [1, 1, 1]
    rep = build_pages(ps)
    assert rep.degenerates and rep.rows_exact


FACTORS = {"S0": sphere0("a", "b"), "path": path_graph(1),
           "pt+edge": SimplicialComplex.from_simplices([["a"], ["b", "c"]])}


@given(flag_complexes(max_vertices=3), st.lists(st.sampled_from(sorted(FACTORS)), min_size=3, max_size=3))
def test_pjoin_cover_without_simplex_factors(L, names):
    ctx = PjoinContext(L, {v: FACTORS[n] for v, n in zip(L.vertices, names)})
    ps = pjoin_cover(ctx)
    cond = check_conditions(ps)
    assert cond.Z
    assert all(m.zero_Z is not False for m in cond.maps)
    assert verify_decomposition(ps, cond).holds
    rep = build_pages(ps)
    assert rep.total_matches_direct and rep.rows_exact and rep.degenerates


@given(flag_complexes(max_vertices=3))
def test_total_complex_computes_cohomology_of_chamber_cover(L):
    ctx = PjoinContext(L, {v: SimplicialComplex.simplex(["a"]) for v in L.vertices})
    rep = build_pages(pjoin_cover(ctx))
    assert rep.total_matches_direct
