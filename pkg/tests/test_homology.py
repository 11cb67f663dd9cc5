from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from coxcohom import (FgAbelianGroup, SimplicialComplex, betti_numbers, chamber, cycle_graph,
                      homology_groups, join, rp2_six_vertex, smith_normal_form, sphere0)
from coxcohom.homology import (apply_sparse, invariant_factors_sparse, matmul, nullspace_Q, rank_sparse,
                               reduced_betti)

from conftest import flag_complexes

matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)))


def det(M):
    return int(Matrix(M).det())


def test_snf_small_cases():
    assert smith_normal_form([[1, 0], [0, 1]]).invariants == [1, 1]
    assert smith_normal_form([[0, 0], [0, 0]]).invariants == []
    assert smith_normal_form([[2, 4], [6, 8]]).invariants == [2, 4]


@given(matrices)
def test_snf_certificate_and_divisibility(M):
    S = smith_normal_form(M)
    assert matmul(matmul(S.U, M), S.V) == S.D
    assert abs(det(S.U)) == 1 and abs(det(S.V)) == 1
    inv = S.invariants
    assert all(d > 0 for d in inv)
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))
    for i, row in enumerate(S.D):
        for j, x in enumerate(row):
            assert i == j or x == 0


@given(matrices)
def test_snf_matches_sympy(M):
    ours = smith_normal_form(M).invariants
    D = sympy_snf(Matrix(M), domain=ZZ)
    theirs = [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0]
    assert ours == theirs


@given(matrices)
def test_sparse_routines_agree_with_dense(M):
    rows = [{c: v for c, v in enumerate(r) if v} for r in M]
    dense = smith_normal_form(M).invariants
    assert rank_sparse(rows) == len(dense) == Matrix(M).rank()
    assert invariant_factors_sparse(rows) == dense
    ncols = len(M[0])
    basis = nullspace_Q(rows, ncols)
    assert len(basis) == ncols - len(dense)
    for x in basis:
        assert not any(apply_sparse(rows, x).values())


def test_fg_abelian_group_algebra():
    Z2 = FgAbelianGroup.from_cyclic(0, [2])
    Z3 = FgAbelianGroup.from_cyclic(0, [3])
    Z6 = FgAbelianGroup.from_cyclic(0, [2, 3])
    assert Z6 == FgAbelianGroup.from_cyclic(0, [6])
    assert Z2.tensor(Z3).is_zero()
    assert FgAbelianGroup.from_cyclic(0, [4]).tensor(FgAbelianGroup.from_cyclic(0, [6])) == Z2
    assert FgAbelianGroup.from_cyclic(0, [4]).tor(FgAbelianGroup.from_cyclic(0, [6])) == Z2
    Z = FgAbelianGroup.from_cyclic(1)
    assert Z.tor(Z2).is_zero() and Z.tensor(Z2) == Z2
    assert FgAbelianGroup.from_json(Z6.to_json()) == Z6


def test_standard_spaces():
    H = homology_groups(cycle_graph(4), theory="homology")
    assert H.ranks() == {0: 1, 1: 1} and H.is_torsion_free()
    E = homology_groups(SimplicialComplex.empty(), variant="reduced")
    assert E.ranks() == {-1: 1}
    P = homology_groups(rp2_six_vertex(), theory="homology")
    assert P.ranks() == {0: 1} and P[1] == FgAbelianGroup.from_cyclic(0, [2])
    Pc = homology_groups(rp2_six_vertex(), theory="cohomology")
    assert Pc[2] == FgAbelianGroup.from_cyclic(0, [2]) and 1 not in Pc.degrees()


def test_pentagon_chamber_pair():
    ch = chamber(cycle_graph(5))
    H = homology_groups(ch.K, ch.boundary())
    assert H.ranks() == {2: 1} and H.is_torsion_free()


@given(flag_complexes(max_vertices=6))
def test_universal_coefficients(K):
    hom = homology_groups(K, theory="homology")
    coh = homology_groups(K, theory="cohomology")
    for n in range(K.dimension + 2):
        assert coh[n].rank == hom[n].rank
        assert coh[n].torsion == hom[n - 1].torsion


@given(flag_complexes(max_vertices=6))
def test_euler_characteristic_from_betti(K):
    b = betti_numbers(K)
    assert sum((-1) ** n * r for n, r in b.items()) == K.euler_characteristic()


@given(flag_complexes(max_vertices=4), flag_complexes(max_vertices=4))
def test_join_suspension_shift(A, B):
    # reduced homology of A * S0 is that of A shifted up by one
    S = join(A, sphere0(("z", 0), ("z", 1)))
    assert reduced_betti(S) == {n + 1: r for n, r in reduced_betti(A).items()}
