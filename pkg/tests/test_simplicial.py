from itertools import combinations

import pytest
from hypothesis import given

from coxcohom import (InvalidInput, PjoinContext, Poset, SimplicialComplex, barycentric_subdivision,
                      betti_numbers, chamber, cycle_graph, flag_complex, full_subcomplex, join,
                      link, octahedralization, octahedron_boundary, order_complex, path_graph,
                      polyhedral_join, sphere0)
from coxcohom.homology import reduced_betti
from coxcohom.simplicial import face_poset

from conftest import flag_complexes


def reduced_euler(K):
    return K.euler_characteristic() - 1


def test_flag_complex_small_cases():
    two = flag_complex(["a", "b"], [])
    assert sorted(map(sorted, two.simplices())) == [[], ["a"], ["b"]]
    tri = flag_complex("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert tri.is_full_simplex() and tri.dimension == 2
    c4 = flag_complex("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    assert c4.f_vector()[1:] == [4, 4]


def test_simplices_include_empty_and_are_face_closed():
    K = octahedron_boundary()
    assert frozenset() in K
    for s in K.simplices():
        for k in range(len(s)):
            for f in combinations(s, k):
                assert frozenset(f) in K


def test_json_rejects_undeclared_vertex_and_repeats():
    with pytest.raises(InvalidInput):
        SimplicialComplex.from_json({"vertices": ["a"], "facets": [["a", "b"]]})
    with pytest.raises(InvalidInput):
        SimplicialComplex.from_simplices([["a", "a"]])


def test_links():
    C4 = cycle_graph(4)
    assert link(C4, []) == C4
    lk = link(C4, ["v0"])
    assert set(lk.vertices) == {"v1", "v3"} and lk.dimension == 0
    O = octahedron_boundary()
    lo = link(O, [O.vertices[0]])
    assert lo.f_vector()[1:] == [4, 4] and betti_numbers(lo) == {0: 1, 1: 1}


def test_full_subcomplex():
    C4 = cycle_graph(4)
    assert full_subcomplex(C4, C4.vertices) == C4
    assert full_subcomplex(C4, []).f_vector() == [1]
    ac = full_subcomplex(C4, ["v0", "v2"])
    assert ac.f_vector() == [1, 2]


def test_join_small_cases():
    S1 = join(sphere0("a", "b"), sphere0("c", "d"))
    assert S1.f_vector() == [1, 4, 4] and reduced_betti(S1) == {1: 1}
    B = path_graph(2)
    assert join(SimplicialComplex.empty(), B) == B
    cone = join(SimplicialComplex.simplex(["x"]), B)
    assert cone.f_vector() == [1, 4, 5, 2]
    assert reduced_betti(cone) == {}


@given(flag_complexes(max_vertices=4), flag_complexes(max_vertices=4))
def test_join_multiplies_reduced_euler(A, B):
    B = B.relabel(lambda v: ("b", v))
    assert reduced_euler(join(A, B)) == -reduced_euler(A) * reduced_euler(B)


@given(flag_complexes(max_vertices=5))
def test_barycentric_subdivision_preserves_homology(K):
    assert betti_numbers(barycentric_subdivision(K)) == betti_numbers(K)


@given(flag_complexes(max_vertices=6))
def test_flag_complex_is_flag_and_links_are_flag(K):
    assert K.is_flag()
    for v in K.vertices:
        assert link(K, [v]).is_flag()


def test_polyhedral_join_special_cases():
    pt = SimplicialComplex.from_simplices([["s"]])
    ctx = PjoinContext(pt, {"s": cycle_graph(4)})
    assert polyhedral_join(ctx).f_vector() == cycle_graph(4).f_vector()
    edge = SimplicialComplex.simplex(["s", "t"])
    ctx = PjoinContext(edge, {"s": sphere0(), "t": path_graph(1)})
    assert polyhedral_join(ctx).f_vector() == join(sphere0(), path_graph(1)).f_vector()


def test_octahedralization_of_triangle_is_octahedron():
    O = octahedralization(SimplicialComplex.simplex("abc"))
    assert O.f_vector() == [1, 6, 12, 8]
    assert reduced_betti(O) == {2: 1}


@given(flag_complexes(max_vertices=4))
def test_octahedralization_is_flag_with_euler_from_f_vector(L):
    O = octahedralization(L)
    assert O.is_flag()
    # each k-simplex of L becomes 2^(k+1) simplices
    f = L.f_vector()
    assert O.f_vector() == [fk * 2 ** k for k, fk in enumerate(f)]


def test_order_complex_examples():
    anti = Poset(["a", "b", "c"])
    assert order_complex(anti).f_vector() == [1, 3]
    P = Poset.by_inclusion([frozenset(), frozenset("s"), frozenset("t")])
    K = order_complex(P)
    assert K.f_vector() == [1, 3, 2]
    chain = Poset.by_inclusion([frozenset("abc"[:k]) for k in range(4)])
    assert order_complex(chain).is_full_simplex()


def test_chains_of_non_linear_order():
    # elements listed out of order: chains must still be found
    P = Poset.by_inclusion([frozenset("ab"), frozenset("a"), frozenset(), frozenset("b")])
    assert P.count_chains() == len(order_complex(P).simplices()) - 1
    assert order_complex(P).f_vector() == [1, 4, 5, 2]


@given(flag_complexes(max_vertices=5))
def test_face_poset_order_complex_is_subdivision(K):
    P = face_poset(K, with_empty=False)
    assert betti_numbers(order_complex(P)) == betti_numbers(K)


def test_chamber_examples():
    ch = chamber(SimplicialComplex.from_simplices([["s"]]))
    assert ch.K.f_vector() == [1, 2, 1]
    assert ch.mirror("s").f_vector() == [1, 1]
    ch = chamber(sphere0("s", "t"))
    assert ch.K.f_vector() == [1, 3, 2]
    assert ch.boundary().f_vector() == [1, 2]
    assert chamber(cycle_graph(5)).K.f_vector()[1] == 11


@given(flag_complexes(max_vertices=5))
def test_chamber_is_cone_and_mirror_pieces(L):
    ch = chamber(L)
    assert reduced_betti(ch.K) == {}
    for J in L.simplices():
        if not J:
            continue
        # ∂K_J has the homology of the link of J
        assert reduced_betti(ch.boundary(J)) == reduced_betti(link(L, J))


def test_pjoin_simplex_structure():
    edge = SimplicialComplex.simplex(["s", "t"])
    ctx = PjoinContext(edge, {"s": sphere0(), "t": SimplicialComplex.simplex("xyz")})
    assert ctx.full_simplex_vertices == frozenset({"t"})
    I = frozenset({("t", "x"), ("t", "y"), ("t", "z")})
    G = ctx.G(ctx.check_simplex(I))
    assert G <= ctx.project(I)
    with pytest.raises(InvalidInput):
        ctx.check_simplex({("s", "+"), ("s", "-")})


def test_json_roundtrip():
    K = octahedron_boundary()
    assert SimplicialComplex.from_json(K.to_json()) == K
