"""The Mayer–Vietoris double complex of a poset of spaces, as an oracle.

A :class:`PosetOfSpaces` covers a finite simplicial complex ``Y`` (or a
pair ``(Y, B)``) by subcomplexes ``Y_a`` indexed by a poset.  The double
complex has ``E_0^{i,j} = sum over i-chains s of C^j(Y_{min s}, B)``; all
page ranks below are over the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .errors import InvalidInput, InvalidPosetOfSpaces
from .homology import (betti_numbers, homology_groups, invariant_factors_sparse,
                       nullspace_Q, rank_sparse, smith_normal_form)
from .simplicial import (Poset, PjoinContext, SimplicialComplex, _bits, _popcount, chamber,
                         fmt_label)

INTEGRAL_CHECK_LIMIT = 400     # largest cochain group handled by dense integral checks


class PosetOfSpaces:
    """``spaces[a]`` are subcomplexes of ``ambient``; ``relative`` (optional)
    is a subcomplex ``B`` and every piece is read as the pair ``(Y_a, Y_a ∩ B)``."""

    def __init__(self, poset: Poset, spaces, ambient: SimplicialComplex, relative: SimplicialComplex = None,
                 validate=True):
        self.poset = poset
        self.Y = ambient
        if set(spaces) != set(poset.elements):
            raise InvalidInput("need one space per poset element")
        self.masks = {}
        for a in poset.elements:
            sp = spaces[a]
            self.masks[a] = sp if isinstance(sp, frozenset) else self._embed(sp, f"Y_{fmt_label(a)}")
        self.B = frozenset() if relative is None else self._embed(relative, "B")
        if validate:
            self.validate()

    def _embed(self, sub: SimplicialComplex, name) -> frozenset:
        out = set()
        for m in sub.masks:
            labels = sub.labels_of(m)
            if labels not in self.Y:
                raise InvalidPosetOfSpaces(f"{name} is not a subcomplex of the ambient complex",
                                           witness={"space": name, "simplex": list(map(fmt_label, labels))})
            out.add(self.Y.mask_of(labels))
        return frozenset(out)

    def validate(self):
        P = self.poset
        for a in P.elements:
            for b in P.above(a):
                if not self.masks[a] <= self.masks[b]:
                    raise InvalidPosetOfSpaces("a < b but Y_a is not contained in Y_b",
                                               witness={"a": fmt_label(a), "b": fmt_label(b)})
        union = frozenset().union(*self.masks.values()) if self.masks else frozenset()
        if union | {0} != self.Y.masks | {0}:
            raise InvalidPosetOfSpaces("the pieces do not cover the ambient complex", witness={})
        # pairwise closure under nonempty intersection gives closure for all finite families
        for a, b in combinations(P.elements, 2):
            inter = self.masks[a] & self.masks[b]
            if inter <= {0}:
                continue
            g = P.glb([a, b])
            if g is None or self.masks[g] != inter:
                raise InvalidPosetOfSpaces(
                    "intersection of two pieces is not the piece of their greatest lower bound",
                    witness={"a": fmt_label(a), "b": fmt_label(b),
                             "glb": None if g is None else fmt_label(g)})

    # -- cochains ----------------------------------------------------------

    def faces(self, a, j) -> list:
        """Basis of ``C^j(Y_a, B_a)``: ``j``-faces of ``Y_a`` outside ``B``."""
        return self._faces_by_dim(a).get(j, [])

    def _faces_by_dim(self, a):
        cache = self.__dict__.setdefault("_fcache", {})
        if a not in cache:
            out = {}
            src = self.masks[a] if a is not None else self.Y.masks
            for m in sorted(src - self.B - {0}):
                out.setdefault(_popcount(m) - 1, []).append(m)
            cache[a] = out
        return cache[a]

    def union_faces(self, elts) -> frozenset:
        return frozenset().union(*(self.masks[b] for b in elts)) if elts else frozenset({0})

    @cached_property
    def chains(self) -> dict:
        """Nonempty chains of the poset by dimension, as tuples in element order."""
        out = {}
        for m in self.poset.chain_masks():
            if m:
                c = tuple(self.poset.elements[i] for i in _bits(m))
                out.setdefault(len(c) - 1, []).append(c)
        return out

    def chain_min(self, chain):
        return self.poset.minimum(chain)

    @property
    def max_dim(self) -> int:
        return max((_popcount(m) - 1 for m in self.Y.masks), default=-1)


# ---------------------------------------------------------------------------
# coboundaries on sets of faces


class _PieceCochains:
    """Cochains of one pair ``(Y_a, B_a)`` with column-vector coboundaries."""

    def __init__(self, faces_by_dim):
        self.faces = faces_by_dim
        self.index = {j: {m: i for i, m in enumerate(fs)} for j, fs in faces_by_dim.items()}
        self._up = {}
        self._cocycles = {}

    def cofaces(self, j):
        if j not in self._up:
            up = {}
            idx = self.index.get(j + 1, {})
            nbits = max((g.bit_length() for g in idx), default=0)
            for f in self.faces.get(j, []):
                col = {}
                for v in range(nbits):
                    bit = 1 << v
                    gi = None if f & bit else idx.get(f | bit)
                    if gi is not None:
                        col[gi] = -1 if _popcount(f & (bit - 1)) % 2 else 1
                up[f] = col
            self._up[j] = up
        return self._up[j]

    def d_columns(self, j) -> list:
        return [self.cofaces(j)[f] for f in self.faces.get(j, [])]

    def cocycles(self, j) -> list:
        """Basis of ``ker d`` in ``C^j`` as sparse dicts ``{face mask: coeff}``."""
        if j not in self._cocycles:
            fs = self.faces.get(j, [])
            rows = _transpose_cols(self.d_columns(j), len(self.index.get(j + 1, {})))
            self._cocycles[j] = [{fs[i]: v for i, v in x.items()} for x in nullspace_Q(rows, len(fs))]
        return self._cocycles[j]

    def coboundaries(self, j) -> list:
        """Spanning set of ``im d`` in ``C^j`` as sparse dicts over face masks."""
        fs = self.faces.get(j, [])
        out = []
        for f in self.faces.get(j - 1, []):
            col = self.cofaces(j - 1)[f]
            if col:
                out.append({fs[i]: v for i, v in col.items()})
        return out

    def betti(self, j) -> int:
        n = len(self.faces.get(j, []))
        return n - rank_sparse(self.d_columns(j)) - rank_sparse(self.d_columns(j - 1))


def _transpose_cols(cols, nrows):
    rows = [dict() for _ in range(nrows)]
    for c, col in enumerate(cols):
        for r, v in col.items():
            rows[r][c] = v
    return rows


def _restrict(vec, target_index):
    return {target_index[f]: v for f, v in vec.items() if f in target_index}


# ---------------------------------------------------------------------------
# pages


@dataclass
class SpectralReport:
    E1: dict                     # (i, j) -> rank
    E2: dict
    total: dict                  # n -> rank of total-complex cohomology
    direct: dict                 # n -> rank of H^n(Y, B)
    rows_exact: bool
    row_defects: list = field(default_factory=list)
    total_integral: dict | None = None
    direct_integral: dict | None = None

    def e2_total(self) -> dict:
        out = {}
        for (i, j), r in self.E2.items():
            if r:
                out[i + j] = out.get(i + j, 0) + r
        return out

    @property
    def degenerates(self) -> bool:
        return self.e2_total() == {n: r for n, r in self.direct.items() if r}

    @property
    def total_matches_direct(self) -> bool:
        return {n: r for n, r in self.total.items() if r} == {n: r for n, r in self.direct.items() if r}

    def to_json(self) -> dict:
        def tab(d):
            return {f"{i},{j}": r for (i, j), r in sorted(d.items()) if r}
        out = {"E1": tab(self.E1), "E2": tab(self.E2),
               "total": {str(n): r for n, r in sorted(self.total.items()) if r},
               "direct": {str(n): r for n, r in sorted(self.direct.items()) if r},
               "rows_exact": self.rows_exact, "degenerates": self.degenerates}
        if self.total_integral is not None:
            out["total_integral"] = self.total_integral
            out["direct_integral"] = self.direct_integral
        return out


class _DoubleComplex:
    def __init__(self, ps: PosetOfSpaces):
        self.ps = ps
        self.pieces = {a: _PieceCochains(ps._faces_by_dim(a)) for a in ps.poset.elements}
        self.chains = ps.chains
        self.mins = {c: ps.chain_min(c) for cs in self.chains.values() for c in cs}
        self.jmax = ps.max_dim
        self._basis = {}
        # cofaces of each chain
        self.cochains = {}
        for i, cs in self.chains.items():
            for c in cs:
                self.cochains[c] = []
        for i, cs in self.chains.items():
            for t in self.chains.get(i + 1, []):
                for k in range(len(t)):
                    s = t[:k] + t[k + 1:]
                    self.cochains[s].append((t, -1 if k % 2 else 1))

    def basis(self, i, j):
        """Index of E_0^{i,j}: ``{(chain, face): position}``."""
        key = (i, j)
        if key not in self._basis:
            idx = {}
            for c in self.chains.get(i, []):
                for f in self.pieces[self.mins[c]].faces.get(j, []):
                    idx[(c, f)] = len(idx)
            self._basis[key] = idx
        return self._basis[key]

    def horizontal(self, i, j, vec_by_chain):
        """``δ`` of ``{chain: {face: coeff}}`` in E_0^{i,j}, as a dict on E_0^{i+1,j}."""
        tgt = self.basis(i + 1, j)
        out = {}
        for c, vec in vec_by_chain.items():
            for t, sign in self.cochains[c]:
                piece = self.pieces[self.mins[t]]
                tidx = piece.index.get(j, {})
                for f, v in vec.items():
                    if f in tidx:
                        k = tgt[(t, f)]
                        nv = out.get(k, 0) + sign * v
                        if nv:
                            out[k] = nv
                        else:
                            out.pop(k, None)
        return out

    def vertical_image(self, i, j) -> list:
        """Spanning vectors of ``d(E_0^{i,j-1})`` inside E_0^{i,j}."""
        tgt = self.basis(i, j)
        out = []
        for c in self.chains.get(i, []):
            for vec in self.pieces[self.mins[c]].coboundaries(j):
                out.append({tgt[(c, f)]: v for f, v in vec.items()})
        return out

    def horizontal_matrix(self, i, j) -> list:
        """Columns of δ on E_0^{i,j} (one per basis element)."""
        cols = []
        for (c, f) in self.basis(i, j):
            cols.append(self.horizontal(i, j, {c: {f: 1}}))
        return cols

    def e1_rank(self, i, j) -> int:
        return sum(self.pieces[self.mins[c]].betti(j) for c in self.chains.get(i, []))

    def d1_rank(self, i, j) -> int:
        reps = []
        cocyc = {}
        for c in self.chains.get(i, []):
            a = self.mins[c]
            if (a, j) not in cocyc:
                cocyc[(a, j)] = self.pieces[a].cocycles(j)
            for z in cocyc[(a, j)]:
                img = self.horizontal(i, j, {c: z})
                if img:
                    reps.append(img)
        if not reps:
            return 0
        D = self.vertical_image(i + 1, j)
        return rank_sparse(reps + D) - rank_sparse(D)

    def total_columns(self, n) -> tuple:
        """Total differential ``δ + (-1)^i d`` on Tot^n, with the Tot^{n+1} index."""
        src = [(i, n - i) for i in self.chains if 0 <= n - i <= self.jmax]
        tgt_blocks = [(i, n + 1 - i) for i in self.chains if 0 <= n + 1 - i <= self.jmax]
        offset, pos = {}, 0
        for b in tgt_blocks:
            offset[b] = pos
            pos += len(self.basis(*b))
        cols = []
        for (i, j) in src:
            for (c, f) in self.basis(i, j):
                col = {}
                if (i + 1, j) in offset:
                    for k, v in self.horizontal(i, j, {c: {f: 1}}).items():
                        col[offset[(i + 1, j)] + k] = v
                if (i, j + 1) in offset:
                    piece = self.pieces[self.mins[c]]
                    vb = self.basis(i, j + 1)
                    sign = -1 if i % 2 else 1
                    faces_next = piece.faces.get(j + 1, [])
                    for gi, v in piece.cofaces(j).get(f, {}).items():
                        k = offset[(i, j + 1)] + vb[(c, faces_next[gi])]
                        col[k] = col.get(k, 0) + sign * v
                cols.append({k: v for k, v in col.items() if v})
        return cols, pos


def build_pages(ps: PosetOfSpaces, integral=False) -> SpectralReport:
    dc = _DoubleComplex(ps)
    imax = max(dc.chains, default=-1)
    jmax = dc.jmax
    E1, E2 = {}, {}
    d1 = {}
    for i in range(imax + 1):
        for j in range(jmax + 1):
            E1[(i, j)] = dc.e1_rank(i, j)
            d1[(i, j)] = dc.d1_rank(i, j) if i < imax and E1[(i, j)] else 0
    for (i, j), r in E1.items():
        E2[(i, j)] = r - d1[(i, j)] - d1.get((i - 1, j), 0)
    # rows of E_0 under δ: exact except at i = 0, where the kernel is C^j(Y, B)
    defects = []
    for j in range(jmax + 1):
        ranks = {i: rank_sparse(dc.horizontal_matrix(i, j)) for i in range(imax + 1)}
        for i in range(imax + 1):
            dim = len(dc.basis(i, j))
            kernel = dim - ranks[i]
            expect = len(ps.faces(None, j)) if i == 0 else ranks.get(i - 1, 0)
            if kernel != expect:
                defects.append({"i": i, "j": j, "kernel": kernel, "expected": expect})
    # total complex
    total, tot_int = {}, {} if integral else None
    top = imax + jmax
    ranks, facs = {}, {}
    for n in range(-1, top + 1):
        cols, _ = dc.total_columns(n) if n >= 0 else ([], 0)
        ranks[n] = rank_sparse(cols)
        if integral:
            facs[n] = [x for x in invariant_factors_sparse(cols) if x > 1]
    for n in range(top + 1):
        dim = sum(len(dc.basis(i, n - i)) for i in dc.chains if 0 <= n - i <= jmax)
        total[n] = dim - ranks[n] - ranks[n - 1]
        if integral:
            tot_int[str(n)] = {"rank": total[n], "torsion": facs[n - 1]}
    direct = betti_numbers(ps.Y, ps.B) if ps.B else betti_numbers(ps.Y)
    direct_int = None
    if integral:
        H = homology_groups(ps.Y, ps.B) if ps.B else homology_groups(ps.Y)
        direct_int = {str(n): g.to_json() for n, g in H.items()}
        tot_int = {n: v for n, v in tot_int.items() if v["rank"] or v["torsion"]}
    return SpectralReport(E1, E2, total, direct, not defects, defects, tot_int, direct_int)


# ---------------------------------------------------------------------------
# conditions (Z') and (Z)


@dataclass
class ZeroMapVerdict:
    source: str
    target: str
    degree: int
    zero_Q: bool
    zero_Z: bool | None      # None when the integral check was skipped for size

    def to_json(self):
        return {"source": self.source, "target": self.target, "degree": self.degree,
                "zero_Q": self.zero_Q, "zero_Z": self.zero_Z}


@dataclass
class ConditionReport:
    Z_prime: bool
    Z: bool
    maps: list

    def to_json(self):
        return {"Z'": self.Z_prime, "Z": self.Z, "maps": [m.to_json() for m in self.maps if not m.zero_Q]}


def _restriction_is_zero(ps: PosetOfSpaces, src: _PieceCochains, tgt_faces: frozenset, j):
    """Whether ``H^j(src) -> H^j(target)`` vanishes, over Q and over Z."""
    tgt = _PieceCochains(_group_faces(tgt_faces - ps.B - {0}))
    tidx = tgt.index.get(j, {})
    if not tidx:
        return True, True
    Z = [_restrict(z, tidx) for z in src.cocycles(j)]
    Z = [z for z in Z if z]
    if not Z:
        return True, True
    Bd = [{tidx[f]: v for f, v in vec.items()} for vec in tgt.coboundaries(j)]
    rB = rank_sparse(Bd)
    zero_Q = rank_sparse(Z + Bd) == rB
    zero_Z = None
    n_src = len(src.faces.get(j, []))
    if not zero_Q:
        zero_Z = False
    elif not any(d > 1 for d in invariant_factors_sparse(tgt.d_columns(j - 1))):
        # torsion-free target: a rationally zero map is integrally zero
        zero_Z = True
    elif n_src <= INTEGRAL_CHECK_LIMIT and len(tidx) <= INTEGRAL_CHECK_LIMIT:
        zero_Z = _integral_zero(src, tgt, j, tidx)
    return zero_Q, zero_Z


def _group_faces(masks):
    out = {}
    for m in sorted(masks):
        out.setdefault(_popcount(m) - 1, []).append(m)
    return out


def _integral_zero(src: _PieceCochains, tgt: _PieceCochains, j, tidx) -> bool:
    """Integer cocycles of ``src`` restrict into integer coboundaries of ``tgt``."""
    fs = src.faces.get(j, [])
    nrow = len(src.index.get(j + 1, {}))
    M = [[0] * len(fs) for _ in range(nrow)]
    for c, col in enumerate(src.d_columns(j)):
        for r, v in col.items():
            M[r][c] = v
    if nrow == 0:
        kernel = [[int(i == k) for i in range(len(fs))] for k in range(len(fs))]
    else:
        snf = smith_normal_form(M)
        r = len(snf.invariants)
        kernel = [[snf.V[i][k] for i in range(len(fs))] for k in range(r, len(fs))]
    # image lattice of d into C^j(target)
    tf = tgt.faces.get(j - 1, [])
    nt = len(tidx)
    A = [[0] * max(len(tf), 1) for _ in range(nt)]
    for c, f in enumerate(tf):
        for g, v in tgt.cofaces(j - 1)[f].items():
            A[g][c] = v
    snf = smith_normal_form(A)
    D = [snf.D[i][i] if i < min(len(snf.D), len(snf.D[0])) else 0 for i in range(nt)]
    fs_index = {f: i for i, f in enumerate(fs)}
    for kv in kernel:
        vec = [0] * nt
        for f, i in fs_index.items():
            if kv[i] and f in tidx:
                vec[tidx[f]] = kv[i]
        y = [sum(snf.U[r][c] * vec[c] for c in range(nt)) for r in range(nt)]
        for k, yk in enumerate(y):
            d = D[k]
            if (d == 0 and yk) or (d and yk % d):
                return False
    return True


def check_conditions(ps: PosetOfSpaces) -> ConditionReport:
    P = ps.poset
    jmax = ps.max_dim
    maps = []
    zp = zz = True
    for a in P.elements:
        src = _PieceCochains(ps._faces_by_dim(a))
        below = P.below(a)
        if below:
            Ylt = ps.union_faces(below)
            for j in range(jmax + 1):
                q, z = _restriction_is_zero(ps, src, Ylt, j)
                maps.append(ZeroMapVerdict(fmt_label(a), f"Y_<{fmt_label(a)}", j, q, z))
                zz &= q
        for b in below:
            for j in range(jmax + 1):
                q, z = _restriction_is_zero(ps, src, ps.masks[b], j)
                maps.append(ZeroMapVerdict(fmt_label(a), fmt_label(b), j, q, z))
                zp &= q
    return ConditionReport(zp, zz, maps)


# ---------------------------------------------------------------------------
# the decomposition


@dataclass
class DecompositionRecord:
    summands: dict      # a -> {n: rank}
    rhs: dict           # n -> total rank
    direct: dict
    holds: bool

    def to_json(self):
        return {"summands": {fmt_label(a): {str(n): r for n, r in sorted(s.items())}
                             for a, s in self.summands.items() if s},
                "rhs": {str(n): r for n, r in sorted(self.rhs.items()) if r},
                "direct": {str(n): r for n, r in sorted(self.direct.items()) if r},
                "holds": self.holds}


def verify_decomposition(ps: PosetOfSpaces, conditions: ConditionReport = None) -> DecompositionRecord:
    conditions = conditions or check_conditions(ps)
    if not conditions.Z:
        raise InvalidInput("condition (Z) does not hold; the decomposition is not available")
    P = ps.poset
    flag = SimplicialComplex(P.elements, P.chain_masks())
    summands, rhs = {}, {}
    for a in P.elements:
        ge = set(P.above(a, strict=False))
        gt = ge - {a}
        star = flag.subcomplex(lambda m: all(flag.vertices[i] in ge for i in _bits(m)))
        bd = star.subcomplex(lambda m: all(star.vertices[i] in gt for i in _bits(m)))
        flag_b = betti_numbers(star, bd)
        piece = _PieceCochains(ps._faces_by_dim(a))
        fib = {j: piece.betti(j) for j in range(ps.max_dim + 1)}
        s = {}
        for i, x in flag_b.items():
            for j, y in fib.items():
                if x * y:
                    s[i + j] = s.get(i + j, 0) + x * y
        summands[a] = s
        for n, r in s.items():
            rhs[n] = rhs.get(n, 0) + r
    direct = betti_numbers(ps.Y, ps.B) if ps.B else betti_numbers(ps.Y)
    holds = {n: r for n, r in rhs.items() if r} == {n: r for n, r in direct.items() if r}
    return DecompositionRecord(summands, rhs, direct, holds)


# ---------------------------------------------------------------------------
# covers coming from polyhedral joins


def pjoin_cover(ctx: PjoinContext, I=()) -> PosetOfSpaces:
    """Cover of the chamber ``𝒦`` of a polyhedral join, relative to ``𝒦^{T-I}``.

    Pieces are indexed by the simplices ``J`` of ``^I L`` (the base with the
    vertices of ``G(I)`` removed); the piece over ``J`` holds the chains
    whose members project into some simplex ``J'`` of the base with
    ``J' - G(I)`` inside ``J``.  For ``G(I)`` empty these are the chains
    projecting into ``J`` itself.
    """
    I = ctx.check_simplex(I)
    G = ctx.G(I)
    Lj = ctx.complex
    ch = chamber(Lj)
    K = ch.K
    P = Poset.by_inclusion(ctx.restricted_base(I).simplices())
    proj = {v: frozenset(s for s, _ in v) - G for v in K.vertices}
    spaces = {}
    for J in P.elements:
        spaces[J] = frozenset(m for m in K.masks if all(proj[K.vertices[i]] <= J for i in _bits(m)))
    rel = ch.union_of_mirrors([v for v in Lj.vertices if v not in I])
    return PosetOfSpaces(P, spaces, K, rel)


def single_piece(Y: SimplicialComplex) -> PosetOfSpaces:
    return PosetOfSpaces(Poset(["Y"]), {"Y": Y}, Y)
