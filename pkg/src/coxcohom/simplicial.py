"""Finite abstract simplicial complexes and the constructions built on them.

A complex is stored as a sorted tuple of vertex labels together with a
frozenset of integer bitmasks, one per simplex.  The empty simplex (mask 0)
is always present, so the *empty complex* is the one whose only simplex is
the empty one.

>>> L = flag_complex("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
>>> L.f_vector()
[1, 4, 4]
>>> sorted(map(sorted, link(L, {"a"}).simplices()))
[[], ['b'], ['d']]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Callable, Hashable, Iterable, Mapping

from .errors import InvalidInput, ResourceCap

MAX_SIMPLICES = 1 << 20


def label_key(x):
    """Total order on labels: ints, then strings, then tuples, then sets."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, len(x), tuple(label_key(e) for e in x))
    if isinstance(x, (frozenset, set)):
        return (3, len(x), tuple(sorted(label_key(e) for e in x)))
    return (4, repr(x))


def sort_labels(labels):
    return sorted(labels, key=label_key)


def fmt_label(x) -> str:
    if isinstance(x, tuple):
        return ".".join(fmt_label(e) for e in x)
    if isinstance(x, (frozenset, set)):
        return "{" + ",".join(fmt_label(e) for e in sort_labels(x)) + "}"
    return str(x)


def label_to_json(x):
    if isinstance(x, tuple):
        return [label_to_json(e) for e in x]
    if isinstance(x, (frozenset, set)):
        return {"set": [label_to_json(e) for e in sort_labels(x)]}
    return x


def label_from_json(x):
    if isinstance(x, list):
        return tuple(label_from_json(e) for e in x)
    if isinstance(x, dict) and set(x) == {"set"}:
        return frozenset(label_from_json(e) for e in x["set"])
    if isinstance(x, (str, int)):
        return x
    raise InvalidInput(f"unsupported vertex label {x!r}")


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _close(masks, cap=MAX_SIMPLICES) -> set:
    out = {0}
    for m in sorted(set(masks), key=_popcount, reverse=True):
        if m in out:
            continue
        if _popcount(m) > 20:
            raise ResourceCap("simplex with more than 20 vertices exceeds the face cap")
        out.update(_submasks(m))
        if len(out) > cap:
            raise ResourceCap(f"complex exceeds {cap} simplices")
    return out


class SimplicialComplex:
    """An immutable finite simplicial complex.

    Build one with :meth:`from_simplices` (face closure is taken for you),
    :func:`flag_complex`, or the other module-level constructors.
    """

    __slots__ = ("_vertices", "_index", "_faces", "__dict__")

    def __init__(self, vertices, faces):
        # internal constructor: ``vertices`` already sorted, ``faces`` closed masks
        self._vertices = tuple(vertices)
        self._index = {v: i for i, v in enumerate(self._vertices)}
        self._faces = frozenset(faces)

    # construction -------------------------------------------------------
    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[Hashable]], vertices=()):
        simplices = [tuple(s) for s in simplices]
        labels = set(vertices)
        for s in simplices:
            if len(set(s)) != len(s):
                raise InvalidInput(f"repeated vertex in simplex {s!r}")
            labels.update(s)
        verts = sort_labels(labels)
        index = {v: i for i, v in enumerate(verts)}
        masks = [sum(1 << index[v] for v in s) for s in simplices]
        masks.extend(1 << i for i in range(len(verts)))
        return cls(verts, _close(masks))

    from_facets = from_simplices

    @classmethod
    def empty(cls):
        return cls((), {0})

    @classmethod
    def simplex(cls, vertices):
        vertices = list(vertices)
        return cls.from_simplices([vertices], vertices)

    @classmethod
    def _from_masks(cls, vertices, masks):
        """Re-index a family of (closed) masks over ``vertices`` onto the used vertices."""
        used = 0
        for m in masks:
            used |= m
        keep = [i for i in range(len(vertices)) if used >> i & 1]
        if len(keep) == len(vertices):
            return cls(vertices, set(masks) | {0})
        remap = {old: new for new, old in enumerate(keep)}
        out = {0}
        for m in masks:
            out.add(sum(1 << remap[i] for i in _bits(m)))
        return cls([vertices[i] for i in keep], out)

    # basic accessors ----------------------------------------------------
    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def masks(self) -> frozenset:
        return self._faces

    def __len__(self):
        return len(self._faces)

    def mask_of(self, labels) -> int:
        try:
            return sum(1 << self._index[v] for v in labels)
        except KeyError as exc:
            raise InvalidInput(f"unknown vertex {exc.args[0]!r}") from None

    def labels_of(self, mask: int) -> tuple:
        return tuple(self._vertices[i] for i in _bits(mask))

    def __contains__(self, simplex) -> bool:
        simplex = list(simplex)
        if any(v not in self._index for v in simplex):
            return False
        return self.mask_of(simplex) in self._faces

    is_simplex = __contains__

    def simplices(self, dim=None):
        """Simplices as frozensets, in a deterministic order."""
        ms = sorted(self._faces, key=lambda m: (_popcount(m), self._sortkey(m)))
        if dim is not None:
            ms = [m for m in ms if _popcount(m) == dim + 1]
        return [frozenset(self.labels_of(m)) for m in ms]

    def _sortkey(self, m):
        return tuple(_bits(m))

    @cached_property
    def by_dimension(self) -> dict:
        out: dict = {}
        for m in self._faces:
            out.setdefault(_popcount(m) - 1, []).append(m)
        for d in out:
            out[d].sort()
        return out

    @property
    def dimension(self) -> int:
        return max(self.by_dimension)

    def f_vector(self) -> list:
        """Counts of simplices by dimension, starting at dimension -1."""
        return [len(self.by_dimension.get(d, ())) for d in range(-1, self.dimension + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(ms) for d, ms in self.by_dimension.items() if d >= 0)

    @cached_property
    def facet_masks(self) -> tuple:
        n = len(self._vertices)
        out = []
        for m in self._faces:
            if not any(not (m >> i & 1) and (m | 1 << i) in self._faces for i in range(n)):
                out.append(m)
        return tuple(sorted(out, key=lambda m: (-_popcount(m), self._sortkey(m))))

    def facets(self):
        return [tuple(self.labels_of(m)) for m in self.facet_masks]

    def edges(self):
        return [self.labels_of(m) for m in self.by_dimension.get(1, ())]

    def is_flag(self) -> bool:
        """Every pairwise adjacent vertex set spans a simplex."""
        return self == flag_complex(self._vertices, self.edges())

    def is_full_simplex(self) -> bool:
        return len(self._faces) == 1 << len(self._vertices)

    # comparisons ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._vertices == other._vertices and self._faces == other._faces

    def __hash__(self):
        return hash((self._vertices, self._faces))

    def __repr__(self):
        facets = ", ".join("{" + ",".join(map(fmt_label, f)) + "}" for f in self.facets())
        return f"SimplicialComplex([{facets}])"

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        if any(v not in other._index for v in self._vertices):
            return False
        return all(other.mask_of(self.labels_of(m)) in other._faces for m in self._faces)

    # derived complexes ---------------------------------------------------
    def subcomplex(self, keep: Callable[[int], bool]) -> "SimplicialComplex":
        """Faces whose mask satisfies ``keep`` (caller guarantees closure)."""
        return SimplicialComplex._from_masks(self._vertices, [m for m in self._faces if keep(m)])

    def relabel(self, f: Callable) -> "SimplicialComplex":
        new = [f(v) for v in self._vertices]
        if len(set(new)) != len(new):
            raise InvalidInput("relabelling is not injective")
        return SimplicialComplex.from_simplices(
            ([new[i] for i in _bits(m)] for m in self._faces), new
        )

    def cone(self, apex="*"):
        if apex in self._index:
            raise InvalidInput(f"cone apex {apex!r} is already a vertex")
        return join(self, SimplicialComplex.simplex([apex]))

    def to_json(self) -> dict:
        return {
            "vertices": [label_to_json(v) for v in self._vertices],
            "facets": [[label_to_json(v) for v in f] for f in sorted(self.facets(), key=lambda f: [label_key(v) for v in f])
                       if f],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SimplicialComplex":
        try:
            verts = [label_from_json(v) for v in data["vertices"]]
            facets = [[label_from_json(v) for v in f] for f in data["facets"]]
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"bad complex JSON: {exc}") from None
        if len(set(verts)) != len(verts):
            raise InvalidInput("duplicate vertex labels")
        if any(v not in set(verts) for f in facets for v in f):
            raise InvalidInput("facet uses an undeclared vertex")
        return cls.from_simplices(facets, verts)


# ---------------------------------------------------------------------------
# module-level constructions


def flag_complex(vertices, edges) -> SimplicialComplex:
    """Clique complex of a simple graph."""
    vertices = list(vertices)
    if len(set(vertices)) != len(vertices):
        raise InvalidInput("duplicate vertex labels")
    verts = sort_labels(vertices)
    index = {v: i for i, v in enumerate(verts)}
    nbr = [0] * len(verts)
    for e in edges:
        a, b = tuple(e)
        if a == b:
            raise InvalidInput(f"self-loop at {a!r}")
        if a not in index or b not in index:
            raise InvalidInput(f"edge {e!r} uses an unknown vertex")
        nbr[index[a]] |= 1 << index[b]
        nbr[index[b]] |= 1 << index[a]
    faces = {0}

    def grow(mask, cand):
        faces.add(mask)
        if len(faces) > MAX_SIMPLICES:
            raise ResourceCap(f"flag complex exceeds {MAX_SIMPLICES} simplices")
        while cand:
            low = cand & -cand
            i = low.bit_length() - 1
            cand ^= low
            grow(mask | low, cand & nbr[i])

    grow(0, (1 << len(verts)) - 1)
    return SimplicialComplex(verts, faces)


def link(K: SimplicialComplex, J) -> SimplicialComplex:
    J = list(J)
    if J not in K:
        raise InvalidInput(f"{J!r} is not a simplex")
    j = K.mask_of(J)
    return SimplicialComplex._from_masks(
        K.vertices, [m & ~j for m in K.masks if m & j == j]
    )


def full_subcomplex(K: SimplicialComplex, A) -> SimplicialComplex:
    A = set(A)
    a = K.mask_of(v for v in K.vertices if v in A)
    return SimplicialComplex._from_masks(K.vertices, [m for m in K.masks if m & ~a == 0])


def join(A: SimplicialComplex, B: SimplicialComplex) -> SimplicialComplex:
    common = set(A.vertices) & set(B.vertices)
    if common:
        raise InvalidInput(f"join of complexes sharing labels {sort_labels(common)!r}")
    n = len(A.masks) * len(B.masks)
    if n > MAX_SIMPLICES:
        raise ResourceCap(f"join exceeds {MAX_SIMPLICES} simplices")
    verts = sort_labels(set(A.vertices) | set(B.vertices))
    index = {v: i for i, v in enumerate(verts)}
    ia = [index[v] for v in A.vertices]
    ib = [index[v] for v in B.vertices]
    ma = [sum(1 << ia[i] for i in _bits(m)) for m in A.masks]
    mb = [sum(1 << ib[i] for i in _bits(m)) for m in B.masks]
    return SimplicialComplex(verts, {x | y for x in ma for y in mb})


def join_all(complexes) -> SimplicialComplex:
    out = SimplicialComplex.empty()
    for c in complexes:
        out = join(out, c)
    return out


def sphere0(a="+", b="-") -> SimplicialComplex:
    return SimplicialComplex.from_simplices([[a], [b]])


def barycentric_subdivision(K: SimplicialComplex) -> SimplicialComplex:
    return order_complex(face_poset(K, with_empty=False))


# ---------------------------------------------------------------------------
# posets and order complexes


class Poset:
    """A finite strict partial order on hashable elements.

    ``less`` is any iterable of pairs ``(a, b)`` with ``a < b``; the
    transitive closure is taken and cycles are rejected.
    """

    def __init__(self, elements, less=()):
        elements = list(elements)
        if len(set(elements)) != len(elements):
            raise InvalidInput("duplicate poset elements")
        self.elements = tuple(sort_labels(elements))
        self.index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        up = [0] * n
        for a, b in less:
            if a not in self.index or b not in self.index:
                raise InvalidInput(f"relation ({a!r}, {b!r}) uses an unknown element")
            up[self.index[a]] |= 1 << self.index[b]
        self._up = self._transitive_closure(up)
        for i in range(n):
            if self._up[i] >> i & 1:
                raise InvalidInput(f"cyclic relation through {self.elements[i]!r}")
        self._down = [0] * n
        for i in range(n):
            for j in _bits(self._up[i]):
                self._down[j] |= 1 << i

    @staticmethod
    def _transitive_closure(up):
        n = len(up)
        out = list(up)
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = out[i]
                for j in _bits(out[i]):
                    acc |= out[j]
                if acc != out[i]:
                    out[i] = acc
                    changed = True
        return out

    @classmethod
    def by_inclusion(cls, sets):
        sets = [frozenset(s) for s in sets]
        return cls(sets, [(a, b) for a in sets for b in sets if a < b])

    def __len__(self):
        return len(self.elements)

    def lt(self, a, b) -> bool:
        return bool(self._up[self.index[a]] >> self.index[b] & 1)

    def le(self, a, b) -> bool:
        return a == b or self.lt(a, b)

    def above(self, a, strict=True):
        m = self._up[self.index[a]]
        out = [self.elements[j] for j in _bits(m)]
        return out if strict else [a] + out

    def below(self, a, strict=True):
        m = self._down[self.index[a]]
        out = [self.elements[j] for j in _bits(m)]
        return out if strict else out + [a]

    def minimum(self, chain):
        chain = list(chain)
        for a in chain:
            if all(a == b or self.lt(a, b) for b in chain):
                return a
        raise InvalidInput(f"{chain!r} is not a chain")

    def maximum(self, chain):
        chain = list(chain)
        for a in chain:
            if all(a == b or self.lt(b, a) for b in chain):
                return a
        raise InvalidInput(f"{chain!r} is not a chain")

    def glb(self, subset):
        """Greatest lower bound of a nonempty subset, or None."""
        subset = list(subset)
        lows = None
        for a in subset:
            m = self._down[self.index[a]] | 1 << self.index[a]
            lows = m if lows is None else lows & m
        cands = [self.elements[j] for j in _bits(lows or 0)]
        for c in cands:
            if all(self.le(d, c) for d in cands):
                return c
        return None

    def subposet(self, keep) -> "Poset":
        keep = [e for e in self.elements if keep(e)]
        ks = set(keep)
        return Poset(keep, [(a, b) for a in keep for b in self.above(a) if b in ks])

    def maximal(self):
        return [e for i, e in enumerate(self.elements) if self._up[i] == 0]

    def minimal(self):
        return [e for i, e in enumerate(self.elements) if self._down[i] == 0]

    def chain_masks(self, cap=MAX_SIMPLICES):
        """All chains as masks over ``self.elements`` (including the empty chain)."""
        out = [0]

        def grow(mask, i):
            for j in _bits(self._up[i]):
                new = mask | 1 << j
                out.append(new)
                if len(out) > cap:
                    raise ResourceCap(f"order complex exceeds {cap} simplices")
                grow(new, j)

        for i in range(len(self.elements)):
            out.append(1 << i)
            grow(1 << i, i)
        return out

    def count_chains(self) -> int:
        """Number of nonempty chains, by dynamic programming (no enumeration)."""
        ending = {}
        for i in sorted(range(len(self.elements)), key=lambda i: _popcount(self._down[i])):
            ending[i] = 1 + sum(ending[j] for j in _bits(self._down[i]))
        return sum(ending.values())


def order_complex(P: Poset) -> SimplicialComplex:
    """Simplices are the chains of ``P``."""
    return SimplicialComplex(P.elements, P.chain_masks())


def face_poset(K: SimplicialComplex, with_empty=True) -> Poset:
    sims = [s for s in K.simplices() if with_empty or s]
    return Poset.by_inclusion(sims)


# ---------------------------------------------------------------------------
# Davis chamber


class MirroredChamber:
    """Order complex ``K`` of a poset of vertex sets containing the empty set.

    Vertices of ``K`` are frozensets.  ``mirror(s)`` is the subcomplex of
    chains whose elements all contain ``s``; ``K_J``, ``boundary(J)`` and
    ``union_of_mirrors(A)`` give the pieces used throughout.
    """

    def __init__(self, poset: Poset, generators=None):
        if frozenset() not in poset.index:
            raise InvalidInput("spherical poset must contain the empty set")
        self.poset = poset
        gens = set()
        for e in poset.elements:
            gens |= set(e)
        self.generators = tuple(sort_labels(generators if generators is not None else gens))
        self.complex = order_complex(poset)
        # elements are sorted by size first, so the minimum of a chain is its lowest bit
        self._elts = poset.elements

    @property
    def K(self):
        return self.complex

    def chain_min(self, mask: int) -> frozenset:
        return self._elts[(mask & -mask).bit_length() - 1]

    def _chains_where(self, pred_min) -> SimplicialComplex:
        K = self.complex
        return K.subcomplex(lambda m: m == 0 or pred_min(self.chain_min(m)))

    def mirror(self, s) -> SimplicialComplex:
        return self._chains_where(lambda a: s in a)

    @property
    def mirror_map(self) -> dict:
        return {s: self.mirror(s) for s in self.generators}

    def K_J(self, J) -> SimplicialComplex:
        J = frozenset(J)
        if J not in self.poset.index:
            raise InvalidInput(f"{sort_labels(J)!r} is not spherical")
        return self._chains_where(lambda a: J <= a)

    def boundary(self, J=()) -> SimplicialComplex:
        """``∂K_J``: chains of sets strictly containing ``J``."""
        J = frozenset(J)
        if J not in self.poset.index:
            raise InvalidInput(f"{sort_labels(J)!r} is not spherical")
        return self._chains_where(lambda a: J < a)

    def union_of_mirrors(self, A) -> SimplicialComplex:
        """``K^A``: union of the mirrors ``K_s`` for ``s`` in ``A``."""
        A = frozenset(A)
        return self._chains_where(lambda a: bool(a & A))

    def complement_union(self, J) -> SimplicialComplex:
        """``K^{S-J}``."""
        return self.union_of_mirrors(set(self.generators) - set(J))


def davis_chamber(poset: Poset, generators=None) -> MirroredChamber:
    return MirroredChamber(poset, generators)


def chamber(L: SimplicialComplex) -> MirroredChamber:
    """Davis chamber built from the simplices of a nerve ``L``."""
    return MirroredChamber(face_poset(L), L.vertices)


# ---------------------------------------------------------------------------
# polyhedral joins


@dataclass(frozen=True)
class PjoinContext:
    """A base complex ``L`` and a complex ``factors[s]`` for every vertex ``s``.

    Vertices of the polyhedral join are pairs ``(s, t)`` with ``t`` a vertex
    of ``factors[s]``.
    """

    base: SimplicialComplex
    factors: Mapping = field(hash=False)

    def __post_init__(self):
        if set(self.factors) != set(self.base.vertices):
            raise InvalidInput("need exactly one factor complex per base vertex")
        for s, c in self.factors.items():
            if not c.vertices:
                raise InvalidInput(f"factor at {s!r} has no vertices")

    def T(self, s) -> tuple:
        return tuple((s, t) for t in self.factors[s].vertices)

    @cached_property
    def full_simplex_vertices(self) -> frozenset:
        """``F``: base vertices whose factor is a full simplex."""
        return frozenset(s for s, c in self.factors.items() if c.is_full_simplex())

    @property
    def F(self) -> frozenset:
        return self.full_simplex_vertices

    @cached_property
    def complex(self) -> SimplicialComplex:
        return polyhedral_join(self)

    def project(self, I) -> frozenset:
        return frozenset(s for s, _ in I)

    def part(self, I, s) -> frozenset:
        return frozenset(t for s2, t in I if s2 == s)

    def check_simplex(self, I):
        I = frozenset(I)
        J = self.project(I)
        if J not in self.base or any(self.part(I, s) not in self.factors[s] for s in J):
            raise InvalidInput(f"{sort_labels(I)!r} is not a simplex of the polyhedral join")
        return I

    def G(self, I) -> frozenset:
        I = self.check_simplex(I)
        return frozenset(
            s for s in self.project(I) & self.F
            if self.part(I, s) == frozenset(self.factors[s].vertices)
        )

    def restricted_base(self, I) -> SimplicialComplex:
        """``^I L``: full subcomplex of ``L`` on ``S - G(I)``."""
        G = self.G(I)
        return full_subcomplex(self.base, [s for s in self.base.vertices if s not in G])

    def punctured_factor(self, I, s) -> SimplicialComplex:
        """``L^I(s)``: full subcomplex of ``factors[s]`` on ``T_s - I_s``, relabelled by pairs."""
        Is = self.part(I, s)
        fac = full_subcomplex(self.factors[s], [t for t in self.factors[s].vertices if t not in Is])
        return fac.relabel(lambda t: (s, t)) if fac.vertices else SimplicialComplex.empty()

    def punctured_join(self, I, J) -> SimplicialComplex:
        return join_all(self.punctured_factor(I, s) for s in sort_labels(J))


def polyhedral_join(ctx: PjoinContext) -> SimplicialComplex:
    """Union over simplices ``J`` of the base of the joins of the factors."""
    verts = sort_labels((s, t) for s in ctx.base.vertices for t in ctx.factors[s].vertices)
    index = {v: i for i, v in enumerate(verts)}
    fmasks = {}
    for s, c in ctx.factors.items():
        loc = [index[(s, t)] for t in c.vertices]
        fmasks[s] = [sum(1 << loc[i] for i in _bits(m)) for m in c.facet_masks]
    tops = set()
    for J in ctx.base.facets():
        for combo in product(*(fmasks[s] for s in J)):
            m = 0
            for x in combo:
                m |= x
            tops.add(m)
    return SimplicialComplex(verts, _close(tops))


def octahedralization(L: SimplicialComplex) -> SimplicialComplex:
    ctx = PjoinContext(L, {s: sphere0() for s in L.vertices})
    return polyhedral_join(ctx)


# ---------------------------------------------------------------------------
# small catalogue of named complexes used in examples and tests


def cycle_graph(n: int, prefix="v") -> SimplicialComplex:
    vs = [f"{prefix}{i}" for i in range(n)]
    return flag_complex(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)]) if n > 3 else \
        SimplicialComplex.from_simplices([(vs[i], vs[(i + 1) % n]) for i in range(n)])


def path_graph(n_edges: int, prefix="v") -> SimplicialComplex:
    vs = [f"{prefix}{i}" for i in range(n_edges + 1)]
    return flag_complex(vs, list(zip(vs, vs[1:])))


def octahedron_boundary() -> SimplicialComplex:
    return octahedralization(SimplicialComplex.simplex("abc"))


def rp2_six_vertex() -> SimplicialComplex:
    """The minimal 6-vertex triangulation of the real projective plane."""
    tris = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
            (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    return SimplicialComplex.from_simplices(tris)


def all_subsets(xs):
    xs = list(xs)
    for r in range(len(xs) + 1):
        yield from combinations(xs, r)
