"""Integral (co)homology of finite simplicial complexes and pairs.

Everything is exact.  Boundary and coboundary matrices are kept sparse
(one ``dict`` per row); unit pivots are eliminated first and only the small
remainder goes through a dense Smith normal form.

>>> from coxcohom.simplicial import rp2_six_vertex
>>> homology_groups(rp2_six_vertex(), theory="homology")[1]
FgAbelianGroup(rank=0, torsion=(2,))
>>> homology_groups(rp2_six_vertex())[2]
FgAbelianGroup(rank=0, torsion=(2,))
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd

from sympy import factorint

from .errors import InvalidInput, ResourceCap
from .simplicial import SimplicialComplex, _bits

MAX_MATRIX_ENTRIES = 1 << 26


# ---------------------------------------------------------------------------
# finitely generated abelian groups


def _invariant_factors(orders) -> tuple:
    """Invariant factors of a direct sum of cyclic groups of the given orders."""
    by_prime = defaultdict(list)
    for d in orders:
        d = abs(int(d))
        if d <= 1:
            continue
        for p, e in factorint(d).items():
            by_prime[p].append(p ** e)
    if not by_prime:
        return ()
    length = max(len(v) for v in by_prime.values())
    facs = [1] * length
    for p, powers in by_prime.items():
        powers.sort(reverse=True)
        for k, q in enumerate(powers):
            facs[length - 1 - k] *= q
    return tuple(facs)


@dataclass(frozen=True, order=True)
class FgAbelianGroup:
    """``Z^rank`` plus the cyclic groups ``Z/d`` with ``d`` in ``torsion``.

    ``torsion`` is an invariant-factor chain ``d1 | d2 | ...`` of integers
    at least 2.
    """

    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.rank < 0:
            raise InvalidInput("negative rank")
        if any(d < 2 for d in t) or any(b % a for a, b in zip(t, t[1:])):
            raise InvalidInput(f"{t} is not an invariant-factor chain")

    @classmethod
    def from_cyclic(cls, rank=0, orders=()):
        return cls(rank, _invariant_factors(orders))

    @classmethod
    def Z(cls, n=1):
        return cls(n)

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def is_free(self) -> bool:
        return not self.torsion

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        return FgAbelianGroup.from_cyclic(self.rank + other.rank, self.torsion + other.torsion)

    def tensor(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        orders = [d for d in self.torsion for _ in range(other.rank)]
        orders += [e for e in other.torsion for _ in range(self.rank)]
        orders += [gcd(d, e) for d in self.torsion for e in other.torsion]
        return FgAbelianGroup.from_cyclic(self.rank * other.rank, orders)

    def tor(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        return FgAbelianGroup.from_cyclic(0, [gcd(d, e) for d in self.torsion for e in other.torsion])

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["rank"]), tuple(data.get("torsion", ())))


ZERO = FgAbelianGroup()
Z = FgAbelianGroup(1)


class GradedGroups:
    """Finitely supported map from integer degrees to :class:`FgAbelianGroup`."""

    __slots__ = ("_groups",)

    def __init__(self, groups=None):
        groups = dict(groups or {})
        self._groups = {int(k): v for k, v in sorted(groups.items()) if not v.is_zero()}

    def __getitem__(self, degree) -> FgAbelianGroup:
        return self._groups.get(degree, ZERO)

    def degrees(self):
        return list(self._groups)

    def items(self):
        return self._groups.items()

    def ranks(self) -> dict:
        return {d: g.rank for d, g in self._groups.items() if g.rank}

    def total_rank(self) -> int:
        return sum(g.rank for g in self._groups.values())

    def is_torsion_free(self) -> bool:
        return all(g.is_free() for g in self._groups.values())

    def is_zero(self) -> bool:
        return not self._groups

    def concentrated_in(self, degree) -> bool:
        return all(d == degree for d in self._groups)

    def shift(self, k) -> "GradedGroups":
        return GradedGroups({d + k: g for d, g in self._groups.items()})

    def __eq__(self, other):
        return isinstance(other, GradedGroups) and self._groups == other._groups

    def __hash__(self):
        return hash(tuple(self._groups.items()))

    def __repr__(self):
        inner = ", ".join(f"{d}: {g}" for d, g in self._groups.items())
        return f"GradedGroups({{{inner}}})"

    def to_json(self) -> dict:
        return {str(d): g.to_json() for d, g in self._groups.items()}

    @classmethod
    def from_json(cls, data):
        return cls({int(k): FgAbelianGroup.from_json(v) for k, v in data.items()})


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    D: list
    U: list
    V: list

    @property
    def invariants(self) -> list:
        n = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(n) if self.D[i][i]]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    cols = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def smith_normal_form(M) -> SmithForm:
    """Smith normal form with a certificate: ``U @ M @ V == D``.

    Pivots are chosen with the smallest nonzero absolute value.

    >>> smith_normal_form([[2, 4], [6, 8]]).invariants
    [2, 4]
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    if m * n > MAX_MATRIX_ENTRIES:
        raise ResourceCap(f"{m}x{n} matrix exceeds the dense SNF cap")
    U = _identity(m)
    V = _identity(n)
    _snf_inplace(A, U, V)
    return SmithForm(A, U, V)


def _snf_inplace(A, U=None, V=None):
    m = len(A)
    n = len(A[0]) if m else 0

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in A:
            row[dst] += c * row[src]
        if V is not None:
            for row in V:
                row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = A[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, "r")
                for j in range(t, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    return A


# ---------------------------------------------------------------------------
# sparse exact linear algebra


def _sparse_unit_eliminate(rows, ncols=None):
    """Eliminate unit pivots from an integer sparse matrix (list of dicts).

    Returns ``(k, rest)`` where ``k`` pivots equal to one were removed and
    ``rest`` is the remaining rows; the original matrix is equivalent to
    ``I_k (+) rest`` under unimodular row and column operations.
    """
    rows = {i: dict(r) for i, r in enumerate(rows) if r}
    cols = defaultdict(set)
    for i, r in rows.items():
        for c in r:
            cols[c].add(i)
    units = 0
    progress = True
    while progress:
        progress = False
        for i in sorted(rows, key=lambda i: len(rows[i])):
            r = rows.get(i)
            if r is None:
                continue
            cand = [c for c, v in r.items() if v in (1, -1)]
            if not cand:
                continue
            c = min(cand, key=lambda c: len(cols[c]))
            piv = r[c]
            for i2 in list(cols[c]):
                if i2 == i:
                    continue
                r2 = rows[i2]
                f = r2[c] * piv
                for c2, v in r.items():
                    nv = r2.get(c2, 0) - f * v
                    if nv:
                        if c2 not in r2:
                            cols[c2].add(i2)
                        r2[c2] = nv
                    elif c2 in r2:
                        del r2[c2]
                        cols[c2].discard(i2)
                if not r2:
                    del rows[i2]
            for c2 in r:
                cols[c2].discard(i)
            del rows[i]
            units += 1
            progress = True
    return units, list(rows.values())


def _densify(rows):
    colset = sorted({c for r in rows for c in r})
    idx = {c: j for j, c in enumerate(colset)}
    if len(rows) * len(colset) > MAX_MATRIX_ENTRIES:
        raise ResourceCap("dense remainder too large")
    dense = [[0] * len(colset) for _ in rows]
    for i, r in enumerate(rows):
        for c, v in r.items():
            dense[i][idx[c]] = v
    return dense


def _bareiss_rank(A) -> int:
    A = [row[:] for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    rank, prev = 0, 1
    for c in range(n):
        piv = next((i for i in range(rank, m) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank][c]
        for i in range(rank + 1, m):
            a = A[i][c]
            A[i] = [(p * A[i][j] - a * A[rank][j]) // prev for j in range(n)]
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def invariant_factors_sparse(rows) -> list:
    """Nonzero invariant factors of a sparse integer matrix."""
    units, rest = _sparse_unit_eliminate(rows)
    out = [1] * units
    if rest:
        D = _snf_inplace(_densify(rest))
        out += [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i]]
    return out


def rank_sparse(rows) -> int:
    """Rank over the rationals of a sparse matrix with integer or Fraction entries."""
    rows = [_integral_row(r) for r in rows]
    units, rest = _sparse_unit_eliminate(rows)
    return units + (_bareiss_rank(_densify(rest)) if rest else 0)


def _integral_row(r):
    if all(isinstance(v, int) for v in r.values()):
        return r
    den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(v).denominator for v in r.values()), 1)
    return {c: int(Fraction(v) * den) for c, v in r.items()}


def transpose(rows, ncols=None):
    out = defaultdict(dict)
    for i, r in enumerate(rows):
        for c, v in r.items():
            out[c][i] = v
    n = ncols if ncols is not None else (max(out) + 1 if out else 0)
    return [out.get(c, {}) for c in range(n)]


def nullspace_Q(rows, ncols) -> list:
    """Basis (sparse dicts of Fractions) of ``{x : A x = 0}`` for ``A`` given by rows."""
    pivots = {}  # pivot column -> reduced row
    for r in rows:
        r = {c: Fraction(v) for c, v in r.items() if v}
        for pc in [c for c in r if c in pivots]:
            f = r.get(pc)
            if f:
                for c, v in pivots[pc].items():
                    nv = r.get(c, 0) - f * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
        if not r:
            continue
        pc = min(r)
        inv = 1 / r[pc]
        r = {c: v * inv for c, v in r.items()}
        for q, prow in pivots.items():
            f = prow.get(pc)
            if f:
                for c, v in r.items():
                    nv = prow.get(c, 0) - f * v
                    if nv:
                        prow[c] = nv
                    else:
                        prow.pop(c, None)
        pivots[pc] = r
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        x = {f: Fraction(1)}
        for pc, prow in pivots.items():
            v = prow.get(f)
            if v:
                x[pc] = -v
        basis.append(x)
    return basis


def apply_sparse(rows, x) -> dict:
    """``A x`` for sparse ``A`` (rows) and sparse vector ``x``."""
    out = {}
    for i, r in enumerate(rows):
        s = sum(v * x[c] for c, v in r.items() if c in x)
        if s:
            out[i] = s
    return out


# ---------------------------------------------------------------------------
# chain complexes of pairs


class CochainComplex:
    """Relative simplicial cochains ``C^*(K, A)`` with bases indexed by faces.

    ``faces[d]`` lists the masks of ``d``-faces of ``K`` not in ``A``
    (``d = -1`` only for the reduced absolute complex); ``delta(d)`` is the
    sparse matrix of ``C^d -> C^{d+1}`` with rows indexed by ``faces[d+1]``.
    """

    def __init__(self, K: SimplicialComplex, sub_masks=frozenset(), reduced=False):
        self.K = K
        excluded = set(sub_masks)
        if not reduced or excluded:
            excluded.add(0)
        self.faces = {}
        for d, ms in K.by_dimension.items():
            kept = [m for m in ms if m not in excluded]
            if kept:
                self.faces[d] = kept
        self.index = {d: {m: i for i, m in enumerate(ms)} for d, ms in self.faces.items()}
        self._delta = {}

    @property
    def degrees(self):
        return sorted(self.faces)

    def dim(self, d) -> int:
        return len(self.faces.get(d, ()))

    def delta(self, d):
        if d not in self._delta:
            rows = []
            col = self.index.get(d, {})
            for tau in self.faces.get(d + 1, ()):
                row = {}
                for k, i in enumerate(_bits(tau)):
                    j = col.get(tau ^ (1 << i))
                    if j is not None:
                        row[j] = -1 if k % 2 else 1
                rows.append(row)
            self._delta[d] = rows
        return self._delta[d]


def _sub_masks(K: SimplicialComplex, sub) -> frozenset:
    if sub is None:
        return frozenset()
    if isinstance(sub, SimplicialComplex):
        out = set()
        for m in sub.masks:
            labels = sub.labels_of(m)
            if labels not in K:
                raise InvalidInput("second space of the pair is not a subcomplex")
            out.add(K.mask_of(labels))
        return frozenset(out)
    return frozenset(sub)


@lru_cache(maxsize=4096)
def _groups_cached(K, sub_masks, reduced, theory):
    C = CochainComplex(K, sub_masks, reduced)
    if not C.faces:
        return GradedGroups()
    lo, hi = min(C.faces), max(C.faces)
    facs = {d: invariant_factors_sparse(C.delta(d)) for d in range(lo - 1, hi + 1)}
    out = {}
    for d in range(lo, hi + 1):
        rank = C.dim(d) - len(facs[d]) - len(facs[d - 1])
        tors = facs[d - 1] if theory == "cohomology" else facs[d]
        out[d] = FgAbelianGroup(rank, tuple(x for x in tors if x > 1))
    return GradedGroups(out)


def homology_groups(space, sub=None, variant="absolute", theory="cohomology") -> GradedGroups:
    """Integral (co)homology of ``space`` or of the pair ``(space, sub)``.

    ``variant="reduced"`` augments with the empty simplex; it only changes
    absolute groups, since a pair always has the empty simplex in its
    second space.  The empty complex has reduced cohomology ``Z`` in
    degree -1.
    """
    if isinstance(space, tuple):
        space, sub = space
    if variant not in ("absolute", "reduced"):
        raise InvalidInput(f"unknown variant {variant!r}")
    if theory not in ("homology", "cohomology"):
        raise InvalidInput(f"unknown theory {theory!r}")
    return _groups_cached(space, _sub_masks(space, sub), variant == "reduced", theory)


@lru_cache(maxsize=16384)
def _betti_cached(K, sub_masks, reduced):
    C = CochainComplex(K, sub_masks, reduced)
    if not C.faces:
        return {}
    lo, hi = min(C.faces), max(C.faces)
    ranks = {d: rank_sparse(C.delta(d)) for d in range(lo - 1, hi + 1)}
    out = {}
    for d in range(lo, hi + 1):
        b = C.dim(d) - ranks[d] - ranks[d - 1]
        if b:
            out[d] = b
    return out


def betti_numbers(space, sub=None, reduced=False) -> dict:
    """Rational Betti numbers ``{degree: b}`` (nonzero entries only)."""
    return dict(_betti_cached(space, _sub_masks(space, sub), bool(reduced)))


def reduced_betti(K: SimplicialComplex) -> dict:
    return betti_numbers(K, reduced=True)


def euler_from_chains(K: SimplicialComplex) -> int:
    return K.euler_characteristic()


def with_coefficients(H: GradedGroups, M: FgAbelianGroup) -> GradedGroups:
    """Cohomology with coefficients in ``M`` from integral cohomology:
    ``H^i(C; M) = H^i(C) (x) M  +  Tor(H^{i+1}(C), M)``."""
    degs = set(H.degrees()) | {d - 1 for d in H.degrees()}
    return GradedGroups({d: H[d].tensor(M) + H[d + 1].tor(M) for d in degs})


# ---------------------------------------------------------------------------
# chamber pairs through the nerve
#
# For the Davis chamber K of a nerve L:
#   H^n(K_J, dK_J)   = reduced H^{n-1}(Lk(J, L))
#   H^n(K, K^{S-J})  = reduced H^{n-1}(full subcomplex of L on S - J)
# with the empty complex contributing Z in degree -1.  Tests compare these
# with direct computations on the order complex.


def link_pair_cohomology(L: SimplicialComplex, J) -> GradedGroups:
    from .simplicial import link
    return homology_groups(link(L, J), variant="reduced").shift(1)


def complement_pair_cohomology(L: SimplicialComplex, J) -> GradedGroups:
    from .simplicial import full_subcomplex
    J = set(J)
    return homology_groups(full_subcomplex(L, [s for s in L.vertices if s not in J]),
                           variant="reduced").shift(1)


def link_pair_betti(L: SimplicialComplex, J) -> dict:
    from .simplicial import link
    return {d + 1: b for d, b in betti_numbers(link(L, J), reduced=True).items()}


def complement_pair_betti(L: SimplicialComplex, J) -> dict:
    from .simplicial import full_subcomplex
    J = set(J)
    sub = full_subcomplex(L, [s for s in L.vertices if s not in J])
    return {d + 1: b for d, b in betti_numbers(sub, reduced=True).items()}
