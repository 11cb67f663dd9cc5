"""Coxeter systems given by a labelled graph.

Covers finite-type recognition, spherical subsets and the nerve,
enumeration of group elements with reduced words, conjugacy classes of
generators, multiparameter growth series and a certificate for the
convergence regime of a weight.

>>> W = CoxeterSystem.from_edges("st", {("s", "t"): 3})
>>> classify_finite(W).order
6
>>> growth_series(W).uniform().num
{(0,): 1, (1,): 2, (2,): 2, (3,): 1}
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial, lcm
from typing import Mapping

import numpy as np
import sympy

from .errors import InvalidInput, ResourceCap
from .polynomials import (MultivarRationalFn, count_roots_open, padd, pconst, peval, pmul,
                          pprod, premap, psubs_uniform, ptop, q_integer,
                          univariate_positive_roots)
from .simplicial import (MirroredChamber, Poset, SimplicialComplex, fmt_label,
                         label_key, sort_labels)

INF = float("inf")
DEFAULT_ELEMENT_CAP = 100_000
BRAID_ORBIT_CAP = 10_000
ENUMERATE_ORDER_LIMIT = 2_000


def _parse_label(m):
    if m in (INF, "inf", "infinity", "∞", None):
        return INF
    if isinstance(m, bool) or not isinstance(m, (int, str)):
        raise InvalidInput(f"bad Coxeter label {m!r}")
    try:
        m = int(m)
    except ValueError:
        raise InvalidInput(f"bad Coxeter label {m!r}") from None
    if m < 2:
        raise InvalidInput(f"Coxeter label {m} is below 2")
    return m


def label_str(m) -> str:
    return "infinity" if m == INF else str(m)


class CoxeterSystem:
    """Generators ``S`` (sorted) with a symmetric Coxeter matrix.

    ``m(s, t)`` is an integer at least 2 or :data:`INF`; ``m(s, s) = 1``.
    """

    def __init__(self, generators, labels: Mapping = None, default=2):
        gens = list(generators)
        if len(set(gens)) != len(gens):
            raise InvalidInput("duplicate generator labels")
        self.generators = tuple(sort_labels(gens))
        self.index = {s: i for i, s in enumerate(self.generators)}
        n = len(self.generators)
        d = _parse_label(default)
        M = [[1 if i == j else d for j in range(n)] for i in range(n)]
        for key, m in (labels or {}).items():
            s, t = tuple(key)
            if s not in self.index or t not in self.index:
                raise InvalidInput(f"label on unknown pair {(s, t)!r}")
            if s == t:
                raise InvalidInput(f"self-loop at {s!r}")
            i, j = self.index[s], self.index[t]
            m = _parse_label(m)
            if M[i][j] not in (d, m) and M[i][j] != M[j][i]:
                raise InvalidInput(f"conflicting labels on {(s, t)!r}")
            M[i][j] = M[j][i] = m
        self.matrix = tuple(tuple(r) for r in M)

    # constructors ----------------------------------------------------------
    @classmethod
    def from_edges(cls, generators, labels, default=2):
        return cls(generators, labels, default)

    @classmethod
    def right_angled(cls, L_or_vertices, edges=None):
        """Right-angled system: ``m = 2`` on edges of the graph, ``INF`` otherwise."""
        if edges is None:
            L = L_or_vertices
            return cls(L.vertices, {tuple(e): 2 for e in L.edges()}, default=INF)
        return cls(L_or_vertices, {tuple(e): 2 for e in edges}, default=INF)

    @classmethod
    def from_matrix(cls, generators, matrix):
        gens = list(generators)
        labels = {}
        for i, s in enumerate(gens):
            for j, t in enumerate(gens):
                if i < j:
                    labels[(s, t)] = matrix[i][j]
        return cls(gens, labels, default=2)

    def to_json(self) -> dict:
        pairs = []
        n = len(self.generators)
        for i in range(n):
            for j in range(i + 1, n):
                m = self.matrix[i][j]
                pairs.append([self.generators[i], self.generators[j], label_str(m) if m == INF else m])
        return {"generators": list(self.generators), "m": pairs, "default": "2"}

    @classmethod
    def from_json(cls, data):
        if "default" not in data or str(data["default"]) not in ("2", "infinity"):
            raise InvalidInput('Coxeter JSON needs "default": "2" or "infinity"')
        labels = {}
        for row in data.get("m", []):
            s, t, m = row
            labels[(s, t)] = m
        return cls(data["generators"], labels, default=INF if data["default"] == "infinity" else 2)

    # basic data ----------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.generators)

    def m(self, s, t):
        return self.matrix[self.index[s]][self.index[t]]

    def __eq__(self, other):
        return isinstance(other, CoxeterSystem) and (self.generators, self.matrix) == (other.generators, other.matrix)

    def __hash__(self):
        return hash((self.generators, self.matrix))

    def __repr__(self):
        labs = {(a, b): label_str(self.m(a, b)) for i, a in enumerate(self.generators)
                for b in self.generators[i + 1:] if self.m(a, b) != 2}
        return f"CoxeterSystem({list(self.generators)}, {labs})"

    def presentation_graph(self):
        """Edges ``{s, t}`` with finite label."""
        return [(a, b) for i, a in enumerate(self.generators) for b in self.generators[i + 1:]
                if self.m(a, b) != INF]

    def restrict(self, J) -> "CoxeterSystem":
        J = sort_labels(J)
        return CoxeterSystem(J, {(a, b): self.m(a, b) for i, a in enumerate(J) for b in J[i + 1:]})

    def is_right_angled(self) -> bool:
        return all(self.matrix[i][j] in (2, INF) for i in range(self.rank) for j in range(self.rank) if i != j)

    def diagram_components(self, J=None):
        """Connected components of the Coxeter diagram (edges with label >= 3) on ``J``."""
        J = list(self.generators if J is None else J)
        idx = [self.index[s] for s in sort_labels(J)]
        seen, comps = set(), []
        for i in idx:
            if i in seen:
                continue
            stack, comp = [i], []
            seen.add(i)
            while stack:
                a = stack.pop()
                comp.append(a)
                for b in idx:
                    if b not in seen and self.matrix[a][b] >= 3:
                        seen.add(b)
                        stack.append(b)
            comps.append(tuple(sorted(comp)))
        return comps

    # cached derived structure -------------------------------------------
    @cached_property
    def classes(self) -> tuple:
        return tuple(tuple(c) for c in generator_classes(self))

    @cached_property
    def class_of(self) -> tuple:
        out = [0] * self.rank
        for k, cls_ in enumerate(self.classes):
            for s in cls_:
                out[self.index[s]] = k
        return tuple(out)

    @property
    def nclasses(self) -> int:
        return len(self.classes)

    @cached_property
    def spherical_subsets(self) -> tuple:
        return tuple(_spherical_subsets(self))

    @cached_property
    def nerve(self) -> SimplicialComplex:
        return SimplicialComplex.from_simplices([J for J in self.spherical_subsets if J], self.generators)

    def is_spherical(self, J) -> bool:
        return frozenset(J) in self._spherical_set

    @cached_property
    def _spherical_set(self):
        return frozenset(self.spherical_subsets)

    def is_finite(self) -> bool:
        return frozenset(self.generators) in self._spherical_set

    @cached_property
    def chamber(self) -> MirroredChamber:
        return MirroredChamber(spherical_poset(self).poset, self.generators)


# ---------------------------------------------------------------------------
# finite type catalogue


def _degrees(kind: str, n: int, m: int = 0):
    if kind == "A":
        return list(range(2, n + 2))
    if kind == "B":
        return list(range(2, 2 * n + 1, 2))
    if kind == "D":
        return sorted(list(range(2, 2 * n - 1, 2)) + [n])
    if kind == "I":
        return [2, m]
    return {
        ("E", 6): [2, 5, 6, 8, 9, 12], ("E", 7): [2, 6, 8, 10, 12, 14, 18],
        ("E", 8): [2, 8, 12, 14, 18, 20, 24, 30], ("F", 4): [2, 6, 8, 12],
        ("H", 3): [2, 6, 10], ("H", 4): [2, 12, 20, 30],
    }[(kind, n)]


def _order(kind: str, n: int, m: int = 0) -> int:
    if kind == "A":
        return factorial(n + 1)
    if kind == "B":
        return 2 ** n * factorial(n)
    if kind == "D":
        return 2 ** (n - 1) * factorial(n)
    if kind == "I":
        return 2 * m
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152,
            ("H", 3): 120, ("H", 4): 14400}[(kind, n)]


@dataclass(frozen=True)
class FiniteType:
    """An irreducible finite Coxeter type, e.g. ``A3`` or ``I2(7)``."""

    kind: str
    n: int
    m: int = 0  # dihedral label for kind "I"

    @property
    def name(self) -> str:
        return f"I2({self.m})" if self.kind == "I" else f"{self.kind}{self.n}"

    @property
    def order(self) -> int:
        return _order(self.kind, self.n, self.m)

    @property
    def degrees(self):
        return _degrees(self.kind, self.n, self.m)

    def __str__(self):
        return self.name


def _component_type(sys: CoxeterSystem, comp) -> FiniteType | None:
    n = len(comp)
    M = sys.matrix
    if n == 1:
        return FiniteType("A", 1)
    edges = [(a, b, M[a][b]) for i, a in enumerate(comp) for b in comp[i + 1:] if M[a][b] >= 3]
    if any(m == INF for *_, m in edges):
        return None
    if n == 2:
        m = edges[0][2]
        if m == 3:
            return FiniteType("A", 2)
        if m == 4:
            return FiniteType("B", 2)
        return FiniteType("I", 2, m)
    if len(edges) != n - 1:
        return None  # contains a cycle
    deg = Counter()
    for a, b, _ in edges:
        deg[a] += 1
        deg[b] += 1
    big = [(a, b, m) for a, b, m in edges if m > 3]
    if any(m > 5 for *_, m in big) or len(big) > 1 or max(deg.values()) > 3:
        return None
    branch = [v for v in comp if deg[v] == 3]
    if not big:
        if not branch:
            return FiniteType("A", n)
        if len(branch) > 1:
            return None
        arms = sorted(_arm_lengths(comp, edges, branch[0]))
        if arms[0] == 1 and arms[1] == 1:
            return FiniteType("D", n)
        if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
            return FiniteType("E", n)
        return None
    if branch:
        return None
    a, b, m = big[0]
    at_end = deg[a] == 1 or deg[b] == 1
    if m == 4:
        if at_end:
            return FiniteType("B", n)
        return FiniteType("F", 4) if n == 4 else None
    if m == 5 and at_end and n in (3, 4):
        return FiniteType("H", n)
    return None


def _arm_lengths(comp, edges, centre):
    nbr = {v: [] for v in comp}
    for a, b, _ in edges:
        nbr[a].append(b)
        nbr[b].append(a)
    arms = []
    for start in nbr[centre]:
        length, prev, cur = 1, centre, start
        while True:
            nxt = [w for w in nbr[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return arms


@dataclass(frozen=True)
class Classification:
    finite: bool
    components: tuple  # ((FiniteType | None, generators), ...)
    order: int | None

    def describe(self) -> str:
        parts = [(t.name if t else "infinite") + "{" + ",".join(map(fmt_label, g)) + "}"
                 for t, g in self.components]
        return " x ".join(parts) if parts else "trivial"


def classify_finite(sys: CoxeterSystem, J=None) -> Classification:
    """Decompose the diagram on ``J`` and match each component against the catalogue."""
    J = sys.generators if J is None else J
    comps = []
    order = 1
    finite = True
    for comp in sys.diagram_components(J):
        t = _component_type(sys, comp)
        comps.append((t, tuple(sys.generators[i] for i in comp)))
        if t is None:
            finite = False
        else:
            order *= t.order
    return Classification(finite, tuple(comps), order if finite else None)


def _spherical_subsets(sys: CoxeterSystem):
    n = sys.rank
    out = [frozenset()]

    def grow(J, start):
        for i in range(start, n):
            K = J + (i,)
            if _is_finite_idx(sys, K):
                out.append(frozenset(sys.generators[k] for k in K))
                grow(K, i + 1)

    grow((), 0)
    return sorted(out, key=label_key)


def _is_finite_idx(sys, idx) -> bool:
    return all(_component_type(sys, c) is not None
               for c in sys.diagram_components([sys.generators[i] for i in idx]))


@dataclass(frozen=True)
class SphericalPoset:
    system: CoxeterSystem
    subsets: tuple
    poset: Poset
    nerve: SimplicialComplex


def spherical_poset(sys: CoxeterSystem) -> SphericalPoset:
    subsets = sys.spherical_subsets
    return SphericalPoset(sys, subsets, Poset.by_inclusion(subsets), sys.nerve)


def davis_chamber_of(sys: CoxeterSystem) -> MirroredChamber:
    return sys.chamber


def generator_classes(sys: CoxeterSystem):
    """Conjugacy classes of generators: components of the odd-label graph."""
    parent = list(range(sys.rank))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(sys.rank):
        for j in range(i + 1, sys.rank):
            m = sys.matrix[i][j]
            if m != INF and m % 2 == 1:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(sys.rank):
        groups.setdefault(find(i), []).append(sys.generators[i])
    return sorted((tuple(g) for g in groups.values()), key=lambda g: label_key(g[0]))


# ---------------------------------------------------------------------------
# word enumeration


@dataclass
class CensusEntry:
    word: tuple          # canonical (lexicographically least) reduced word, as generator labels
    length: int
    monomial: tuple      # exponent vector over generator classes
    descents: frozenset  # right descent set


@dataclass
class WordCensus:
    system: CoxeterSystem
    entries: list
    length_bound: int
    complete: bool       # True when the whole (finite) group was enumerated

    def length_profile(self):
        c = Counter(e.length for e in self.entries)
        return tuple(c[k] for k in range(max(c) + 1)) if c else ()

    def __len__(self):
        return len(self.entries)

    def growth_polynomial(self) -> dict:
        out = {}
        for e in self.entries:
            out[e.monomial] = out.get(e.monomial, 0) + 1
        return out

    def by_descent_set(self):
        out = Counter()
        for e in self.entries:
            out[e.descents] += 1
        return out


class _TitsRep:
    """Exact geometric representation over the cyclotomic ring ``Z[z]/Phi_N``.

    ``2 cos(pi/m) = z^a + z^-a`` with ``a = N/(2m)``; an infinite label
    contributes the integer 2.  Elements are stored as ``n x n x deg(Phi_N)``
    integer arrays.
    """

    def __init__(self, sys: CoxeterSystem):
        n = sys.rank
        ms = {sys.matrix[i][j] for i in range(n) for j in range(n)
              if i != j and sys.matrix[i][j] not in (2, INF)}
        N = 2 * lcm(*ms) if ms else 2
        x = sympy.Symbol("x")
        phi = [int(c) for c in sympy.Poly(sympy.cyclotomic_poly(N, x), x).all_coeffs()][::-1]
        deg = len(phi) - 1
        powers = []  # x^k mod phi as coefficient vectors
        cur = [0] * deg
        cur[0] = 1
        for _ in range(2 * N + deg):
            powers.append(cur[:])
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [c - top * p for c, p in zip(cur, phi[:-1])]
        self.n, self.deg = n, deg
        self.coupling = {}
        for i in range(n):
            for j in range(n):
                m = sys.matrix[i][j]
                if i == j or m == 2:
                    continue
                if m == INF:
                    C = 2 * np.eye(deg, dtype=np.int64)
                else:
                    a = N // (2 * m)
                    C = np.zeros((deg, deg), dtype=np.int64)
                    for k in range(deg):
                        C[:, k] = np.add(powers[k + a], powers[k + N - a])
                self.coupling[(i, j)] = C.T  # acts on row vectors from the right
        self.identity = np.zeros((n, n, deg), dtype=np.int64)
        for i in range(n):
            self.identity[i, i, 0] = 1

    def left_mult(self, M, s):
        """Matrix of ``sigma(s) @ M``: only row ``s`` changes."""
        out = M.copy()
        row = -M[s]
        for (i, j), C in self.coupling.items():
            if i == s:
                row = row + M[j] @ C
        out[s] = row
        return out


def enumerate_words(sys: CoxeterSystem, length_bound: int, element_cap: int = DEFAULT_ELEMENT_CAP,
                    method: str = "reflection") -> WordCensus:
    """Breadth-first enumeration of elements up to length ``length_bound``.

    ``method="reflection"`` decides equality with the exact geometric
    representation; ``method="braid"`` decides it by closing reduced words
    under braid moves (slower, used as an independent check).
    """
    if length_bound < 0:
        raise InvalidInput("length bound must be nonnegative")
    if method == "braid":
        return _enumerate_braid(sys, length_bound, element_cap)
    rep = _TitsRep(sys)
    n = sys.rank
    ncls = sys.nclasses
    cls_of = sys.class_of
    unit = [tuple(int(k == cls_of[s]) for k in range(ncls)) for s in range(n)]
    entries = [CensusEntry((), 0, (0,) * ncls, frozenset())]
    # per element of the current level: matrix, word (indices), monomial, descents (indices)
    level = {rep.identity.tobytes(): [rep.identity, (), (0,) * ncls, set()]}
    k = 0
    complete = False
    while k < length_bound:
        nxt = {}
        for M, word, mono, desc in level.values():
            for s in range(n):
                if s in desc:
                    continue
                M2 = rep.left_mult(M, s)
                key = M2.tobytes()
                cand = word + (s,)
                hit = nxt.get(key)
                if hit is None:
                    nxt[key] = [M2, cand, tuple(a + b for a, b in zip(mono, unit[s])), {s}]
                else:
                    hit[3].add(s)
                    if cand < hit[1]:
                        hit[1] = cand
        k += 1
        if not nxt:
            complete = True
            break
        biggest = max(int(np.abs(v[0]).max()) for v in nxt.values())
        if biggest > 2 ** 40:
            raise ResourceCap("coefficient growth in the reflection representation",
                              partial=WordCensus(sys, entries, k - 1, False))
        for M, word, mono, desc in nxt.values():
            entries.append(CensusEntry(tuple(sys.generators[i] for i in word), k, mono,
                                       frozenset(sys.generators[i] for i in desc)))
        if len(entries) > element_cap:
            raise ResourceCap(f"more than {element_cap} elements",
                              partial=WordCensus(sys, entries, k, False))
        level = nxt
    if not complete:
        # the longest element has every generator as a descent
        complete = all(len(v[3]) == n for v in level.values())
    return WordCensus(sys, _sorted_entries(entries), length_bound, complete)


def _sorted_entries(entries):
    return sorted(entries, key=lambda e: (e.length, [label_key(x) for x in e.word]))


def braid_orbit(sys: CoxeterSystem, word, cap: int = BRAID_ORBIT_CAP) -> set:
    """All words reachable from ``word`` by braid moves."""
    word = tuple(word)
    moves = []
    for i, s in enumerate(sys.generators):
        for t in sys.generators[i + 1:]:
            m = sys.m(s, t)
            if m != INF:
                a = tuple(s if k % 2 == 0 else t for k in range(m))
                b = tuple(t if k % 2 == 0 else s for k in range(m))
                moves.append((a, b))
                moves.append((b, a))
    seen = {word}
    stack = [word]
    while stack:
        w = stack.pop()
        for a, b in moves:
            m = len(a)
            for i in range(len(w) - m + 1):
                if w[i:i + m] == a:
                    w2 = w[:i] + b + w[i + m:]
                    if w2 not in seen:
                        seen.add(w2)
                        if len(seen) > cap:
                            raise ResourceCap(f"braid orbit exceeds {cap} words")
                        stack.append(w2)
    return seen


def _word_key(w):
    return [label_key(x) for x in w]


def _enumerate_braid(sys, length_bound, element_cap):
    ncls = sys.nclasses
    cls_of = {s: sys.class_of[i] for i, s in enumerate(sys.generators)}
    entries = [CensusEntry((), 0, (0,) * ncls, frozenset())]
    level = {(): (0,) * ncls}
    complete = False
    for k in range(1, length_bound + 1):
        nxt = {}
        for w, mono in level.items():
            for s in sys.generators:
                orbit = braid_orbit(sys, w + (s,))
                if any(u[i] == u[i + 1] for u in orbit for i in range(len(u) - 1)):
                    continue  # not reduced (Tits)
                canon = min(orbit, key=_word_key)
                if canon not in nxt:
                    m2 = list(mono)
                    m2[cls_of[s]] += 1
                    nxt[canon] = (tuple(m2), frozenset(u[-1] for u in orbit))
        if not nxt:
            complete = True
            break
        for w, (mono, desc) in nxt.items():
            entries.append(CensusEntry(w, k, mono, desc))
        if len(entries) > element_cap:
            raise ResourceCap(f"more than {element_cap} elements", partial=WordCensus(sys, entries, k, False))
        level = {w: mono for w, (mono, _) in nxt.items()}
    return WordCensus(sys, _sorted_entries(entries), length_bound, complete)


def check_census_braid(census: WordCensus, cap: int = BRAID_ORBIT_CAP) -> list:
    """Compare every census entry with its braid orbit.

    Returns a list of problems (empty when the canonical word is the least
    word of its orbit, the monomial is constant on the orbit and the last
    letters of the orbit are exactly the descent set).
    """
    sys = census.system
    cls_of = {s: sys.class_of[i] for i, s in enumerate(sys.generators)}
    problems = []
    for e in census.entries:
        orbit = braid_orbit(sys, e.word, cap)
        if min(orbit, key=_word_key) != e.word:
            problems.append((e.word, "canonical word is not least in its orbit"))
        for u in orbit:
            mono = [0] * sys.nclasses
            for x in u:
                mono[cls_of[x]] += 1
            if tuple(mono) != e.monomial:
                problems.append((e.word, "monomial differs across the orbit"))
                break
        if e.length and frozenset(u[-1] for u in orbit) != e.descents:
            problems.append((e.word, "descent set differs from orbit last letters"))
    return problems


# ---------------------------------------------------------------------------
# growth polynomials and series


def _i2_poly(m: int):
    """Two-variable growth polynomial of I2(m), m even; variables (t_s, t_r)."""
    k = m // 2
    p = {(0, 0): 1, (k, k): 1}
    for length in range(1, m):
        hi, lo = (length + 1) // 2, length // 2
        p = padd(p, {(hi, lo): 1})
        p = padd(p, {(lo, hi): 1})
    return p


def _b_poly(n: int):
    """Growth of B_n in variables (t_a, t_b), ``t_b`` the generator at the 4-end."""
    out = pconst(1, 2)
    for i in range(1, n + 1):
        qi = {(k, 0): 1 for k in range(i)}
        out = pmul(out, pmul(qi, {(0, 0): 1, (i - 1, 1): 1}))
    return out


def product_formula(t: FiniteType):
    """One-variable growth polynomial ``prod [d_i]_t`` from the catalogue degrees."""
    return pprod([q_integer(d) for d in t.degrees], 1)


@lru_cache(maxsize=None)
def _component_growth(matrix: tuple, local_classes: tuple, method: str):
    """Growth polynomial of an irreducible finite system (given by its matrix)
    in its own class variables.  ``local_classes[i]`` is the class index of
    generator ``i``."""
    n = len(matrix)
    gens = tuple(range(n))
    sub = CoxeterSystem.from_matrix(gens, matrix)
    t = _component_type(sub, gens)
    ncl = max(local_classes) + 1
    if method == "auto":
        method = "enumerate" if t.order <= ENUMERATE_ORDER_LIMIT else "formula"
    if method == "enumerate":
        census = enumerate_words(sub, 10 ** 6, element_cap=max(DEFAULT_ELEMENT_CAP, t.order + 1))
        # the census of ``sub`` uses its own classes; remap to ``local_classes``
        mapping = [local_classes[sub.index[c[0]]] for c in sub.classes]
        return premap(census.growth_polynomial(), mapping, ncl)
    if ncl == 1:
        return {(k,): c for (k,), c in product_formula(t).items()}
    if t.kind == "I":
        s, r = local_classes[0], local_classes[1]
        return premap(_i2_poly(t.m), [s, r], ncl)
    if t.kind == "B":
        ends = [i for i in range(n) if sum(1 for j in range(n) if j != i and matrix[i][j] >= 3) <= 1]
        special = next(i for i in ends if any(matrix[i][j] == 4 for j in range(n)))
        other = next(i for i in range(n) if i != special)
        return premap(_b_poly(n), [local_classes[other], local_classes[special]], ncl)
    return _component_growth(matrix, local_classes, "enumerate")


class GrowthData:
    """Cached growth polynomials of the spherical subsets of one system."""

    def __init__(self, sys: CoxeterSystem, method="auto"):
        self.sys = sys
        self.method = method
        self._poly = {}
        self._factors = {}

    def factors(self, J) -> list:
        """Growth polynomials of the irreducible components of ``W_J`` (global class variables)."""
        J = frozenset(J)
        if J not in self._factors:
            sys = self.sys
            out = []
            for comp in sys.diagram_components(J):
                matrix = tuple(tuple(sys.matrix[a][b] for b in comp) for a in comp)
                glob = [sys.class_of[a] for a in comp]
                order = {}
                local = tuple(order.setdefault(g, len(order)) for g in glob)
                if _component_type(sys, comp) is None:
                    raise InvalidInput(f"{sort_labels(J)!r} is not spherical")
                p = _component_growth(matrix, local, self.method)
                inv = [0] * len(order)
                for g, l in order.items():
                    inv[l] = g
                out.append(premap(p, inv, sys.nclasses))
            self._factors[J] = out
        return self._factors[J]

    def poly(self, J) -> dict:
        J = frozenset(J)
        if J not in self._poly:
            self._poly[J] = pprod(self.factors(J), self.sys.nclasses)
        return self._poly[J]

    def top(self, J):
        """Exponent vector of ``t_{w_J}`` for the longest element of ``W_J``."""
        return ptop(self.poly(J))[0]

    def value(self, J, point) -> Fraction:
        return peval(self.poly(J), point)


@lru_cache(maxsize=256)
def growth_data(sys: CoxeterSystem) -> GrowthData:
    return GrowthData(sys)


def growth_series(sys: CoxeterSystem, method="auto") -> MultivarRationalFn:
    """Multiparameter growth series ``W(t)`` in the class variables.

    Finite systems give the growth polynomial; otherwise
    ``1/W(t) = sum_J (-1)^|J| t_{w_J} / W_J(t)`` over spherical ``J``.
    """
    return _growth_series_cached(sys, method)


@lru_cache(maxsize=256)
def _growth_series_cached(sys, method):
    G = growth_data(sys) if method == "auto" else GrowthData(sys, method)
    nv = sys.nclasses
    if sys.is_finite():
        return MultivarRationalFn(G.poly(sys.generators), None, nv)
    inv = reciprocal_growth(sys, G)
    return inv.reciprocal()


def _common_denominator_sum(terms, nv):
    """``sum sign * mono / prod(factors)`` over a shared denominator.

    ``terms`` holds ``(sign, exponent, factor polynomials)``; the
    denominator is the least product containing every factor list.
    """
    keyed = {}
    mult = []
    for sign, top, factors in terms:
        c = Counter()
        for f in factors:
            k = tuple(sorted(f.items()))
            keyed[k] = f
            c[k] += 1
        mult.append((sign, top, c))
    big = Counter()
    for _, _, c in mult:
        for k, e in c.items():
            big[k] = max(big[k], e)
    den = pprod([keyed[k] for k, e in big.items() for _ in range(e)], nv)
    num = {}
    for sign, top, c in mult:
        cof = pprod([keyed[k] for k, e in big.items() for _ in range(e - c.get(k, 0))], nv)
        num = padd(num, pmul(cof, {top: sign}))
    return num, den


def reciprocal_growth(sys: CoxeterSystem, G: GrowthData = None) -> MultivarRationalFn:
    """``1/W(t)`` as a rational function."""
    G = G or growth_data(sys)
    terms = [((-1) ** len(J), G.top(J), G.factors(J)) for J in sys.spherical_subsets]
    num, den = _common_denominator_sum(terms, sys.nclasses)
    return MultivarRationalFn(num, den, sys.nclasses)


def reciprocal_growth_uniform(sys: CoxeterSystem) -> MultivarRationalFn:
    """``1/W(t, ..., t)``, built directly in one variable."""
    G = growth_data(sys)
    terms = []
    for J in sys.spherical_subsets:
        factors = [{(k,): c for k, c in psubs_uniform(f).items()} for f in G.factors(J)]
        terms.append(((-1) ** len(J), (sum(G.top(J)),), factors))
    num, den = _common_denominator_sum(terms, 1)
    return MultivarRationalFn(num, den, 1)


def inverse_growth_value(sys: CoxeterSystem, point) -> Fraction:
    """Exact ``1/W(q)`` from the alternating sum over spherical subsets."""
    G = growth_data(sys)
    total = Fraction(0)
    for J in sys.spherical_subsets:
        top = G.top(J)
        mono = Fraction(1)
        for x, k in zip(point, top):
            mono *= Fraction(x) ** k
        total += (-1) ** len(J) * mono / G.value(J, point)
    return total


# ---------------------------------------------------------------------------
# multiparameters and regimes


class MultiParameter:
    """Positive rationals indexed by generator classes."""

    def __init__(self, sys: CoxeterSystem, values):
        self.system = sys
        if isinstance(values, Mapping):
            vals = [None] * sys.nclasses
            for key, v in values.items():
                if key in sys.index:
                    k = sys.class_of[sys.index[key]]
                elif isinstance(key, int) and 0 <= key < sys.nclasses:
                    k = key
                else:
                    raise InvalidInput(f"weight on unknown generator or class {key!r}")
                v = to_fraction(v)
                if vals[k] is not None and vals[k] != v:
                    raise InvalidInput(f"weights disagree on the class of {key!r}")
                vals[k] = v
            if any(v is None for v in vals):
                missing = [sys.classes[k][0] for k, v in enumerate(vals) if v is None]
                raise InvalidInput(f"missing weights for classes of {missing!r}")
        else:
            vals = [to_fraction(v) for v in values]
            if len(vals) != sys.nclasses:
                raise InvalidInput("one weight per generator class is required")
        if any(v <= 0 for v in vals):
            raise InvalidInput("weights must be positive")
        self.values = tuple(vals)

    @classmethod
    def uniform(cls, sys, q):
        return cls(sys, [to_fraction(q)] * sys.nclasses)

    def q(self, s) -> Fraction:
        return self.values[self.system.class_of[self.system.index[s]]]

    def inverse(self) -> "MultiParameter":
        return MultiParameter(self.system, [1 / v for v in self.values])

    def is_uniform(self) -> bool:
        return len(set(self.values)) <= 1

    def __iter__(self):
        return iter(self.values)

    def __repr__(self):
        return "MultiParameter(" + ", ".join(str(v) for v in self.values) + ")"

    def by_generator(self) -> dict:
        return {s: self.q(s) for s in self.system.generators}


def to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise InvalidInput("boolean is not a weight")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        s = v.strip()
        if any(c in s for c in ".eE") or not s:
            raise InvalidInput(f"weight {v!r} must be an exact rational such as '1/3'")
        try:
            return Fraction(s)
        except ValueError:
            raise InvalidInput(f"weight {v!r} is not a rational number") from None
    raise InvalidInput(f"weight {v!r} must be an exact rational (int, Fraction or 'p/q')")


IN_CLOSURE = "InClosureR"
INVERSE_IN_CLOSURE = "InverseInClosureR"
BOTH = "Both"
UNKNOWN = "Unknown"


@dataclass
class RegimeCertificate:
    verdict: str
    method: str
    rho_interval: tuple | None = None
    evidence: dict = field(default_factory=dict)

    @property
    def small(self) -> bool:
        return self.verdict in (IN_CLOSURE, BOTH)

    @property
    def large(self) -> bool:
        return self.verdict in (INVERSE_IN_CLOSURE, BOTH)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "method": self.method}
        if self.rho_interval is not None:
            out["rho_interval"] = [str(self.rho_interval[0]), str(self.rho_interval[1])]
        out.update({k: v for k, v in self.evidence.items()})
        return out


@lru_cache(maxsize=256)
def _single_parameter_denominator(sys: CoxeterSystem):
    """Numerator of ``1/W(t)`` in one variable, gcd-free: its positive roots are the poles of ``W``."""
    inv = reciprocal_growth_uniform(sys)
    t = sympy.Symbol("t")
    N = sympy.Poly(sum(c * t ** k for (k,), c in inv.num.items()), t, domain="ZZ")
    D = sympy.Poly(sum(c * t ** k for (k,), c in inv.den.items()), t, domain="ZZ")
    N = N.exquo(sympy.gcd(N, D))
    return {k: int(c) for (k,), c in N.as_dict().items()}


def radius_of_convergence(sys: CoxeterSystem):
    """Isolating interval ``(lo, hi)`` of the single-parameter radius ``rho``,
    or ``None`` for finite systems."""
    if sys.is_finite():
        return None
    roots = univariate_positive_roots(_single_parameter_denominator(sys))
    if not roots:
        raise InvalidInput("infinite system without a positive pole")
    return roots[0]


def _le_rho(sys, q: Fraction) -> bool:
    """``q <= rho``: no pole in the open interval (0, q)."""
    return count_roots_open(_single_parameter_denominator(sys), Fraction(0), q) == 0


def regime_test(sys: CoxeterSystem, q: MultiParameter) -> RegimeCertificate:
    """Certify ``q`` or ``1/q`` in the closed region of convergence."""
    if sys.is_finite():
        return RegimeCertificate(BOTH, "finite group: growth series is a polynomial")
    rho = radius_of_convergence(sys)
    vals = list(q)
    hi, lo = max(vals), min(vals)
    small = _le_rho(sys, hi)
    large = _le_rho(sys, 1 / lo)
    method = "exact single-parameter root isolation" if q.is_uniform() else \
        "multiparameter monotonicity bound via the single-parameter radius"
    verdict = BOTH if small and large else IN_CLOSURE if small else INVERSE_IN_CLOSURE if large else UNKNOWN
    ev = {"q": [str(v) for v in vals]}
    return RegimeCertificate(verdict, method, rho, ev)


# ---------------------------------------------------------------------------
# catalogue


def finite_type(kind: str, n: int, m: int = 0) -> CoxeterSystem:
    """Standard diagram of an irreducible finite type on generators ``1..n``.

    ``kind`` is one of ``A B D E F H I``; ``I`` takes the dihedral label ``m``.
    """
    gens = list(range(1, n + 1))
    path = {(i, i + 1): 3 for i in range(1, n)}
    if kind == "A" and n >= 1:
        labels = path
    elif kind == "B" and n >= 2:
        labels = path | {(n - 1, n): 4}
    elif kind == "D" and n >= 4:
        labels = {(i, i + 1): 3 for i in range(1, n - 1)} | {(n - 2, n): 3}
    elif kind == "E" and n in (6, 7, 8):
        # path 1..n-1 with n attached to 3
        labels = {(i, i + 1): 3 for i in range(1, n - 1)} | {(3, n): 3}
        labels.pop((n - 1, n), None)
    elif kind == "F" and n == 4:
        labels = path | {(2, 3): 4}
    elif kind == "H" and n in (3, 4):
        labels = path | {(1, 2): 5}
    elif kind == "I" and n == 2 and m >= 2:
        labels = {(1, 2): m}
    else:
        raise InvalidInput(f"no finite type {kind}{n}")
    return CoxeterSystem(gens, labels, default=2)


FINITE_TYPES_RANK4 = (("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("B", 4),
                      ("D", 4), ("F", 4), ("H", 3), ("H", 4))
