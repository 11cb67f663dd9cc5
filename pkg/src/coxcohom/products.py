"""Closed-form cohomology of graph products, RAAGs, Salvetti complexes,
Bestvina–Brady groups and Coxeter groups.

Group-ring answers are :class:`GradedModuleExpr` objects: symbolic direct
sums whose coefficients are honest finitely generated abelian groups and
whose "base modules" (``Z[A/A_J]`` and friends) are tags.  They describe
associated graded groups only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .coxeter import CoxeterSystem, enumerate_words
from .errors import InsufficientData, InvalidInput, ProvisoViolation
from .homology import (ZERO, FgAbelianGroup, GradedGroups,
                       complement_pair_betti, complement_pair_cohomology, homology_groups,
                       link_pair_betti, link_pair_cohomology, with_coefficients)
from .simplicial import (PjoinContext, SimplicialComplex, chamber, fmt_label, full_subcomplex,
                         label_key, link, sort_labels)
from .weighted import VertexGroupDescriptor, _as_complex, kunneth


def fmt_set(J) -> str:
    return "{" + ",".join(fmt_label(s) for s in sort_labels(J)) + "}"


# ---------------------------------------------------------------------------
# symbolic graded modules


@dataclass(frozen=True)
class ModuleTerm:
    degree: int
    J: frozenset
    coefficient: FgAbelianGroup
    tag: str
    description: str = ""
    bidegree: tuple | None = None       # (i, j) when the term comes from a double complex

    def sort_key(self):
        return (self.degree, len(self.J), [label_key(s) for s in sort_labels(self.J)], self.tag)

    def to_json(self) -> dict:
        out = {"degree": self.degree, "J": [fmt_label(s) for s in sort_labels(self.J)],
               "coefficient": self.coefficient.to_json(),
               "baseModule": {"tag": self.tag, "description": self.description}}
        if self.bidegree is not None:
            out["bidegree"] = list(self.bidegree)
        return out


@dataclass
class GradedModuleExpr:
    """A sorted list of nonzero terms; ``graded_only`` is always true."""

    terms: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    graded_only: bool = True

    def __post_init__(self):
        self.terms = sorted((t for t in self.terms if not t.coefficient.is_zero()), key=ModuleTerm.sort_key)

    def degrees(self) -> list:
        return sorted({t.degree for t in self.terms})

    def at(self, degree) -> list:
        return [t for t in self.terms if t.degree == degree]

    def coefficient_sum(self, degree) -> FgAbelianGroup:
        total = ZERO
        for t in self.at(degree):
            total = total + t.coefficient
        return total

    def ranks(self) -> dict:
        return {d: self.coefficient_sum(d).rank for d in self.degrees()}

    def is_concentrated(self) -> bool:
        return len(self.degrees()) <= 1

    def is_torsion_free(self) -> bool:
        return all(t.coefficient.is_free() for t in self.terms)

    def signature(self, degree=None) -> list:
        """Comparable ``(J, coefficient)`` list, optionally at one degree."""
        ts = self.terms if degree is None else self.at(degree)
        return [(t.J, t.coefficient) for t in ts]

    def to_json(self) -> dict:
        out = {"gradedOnly": True, "terms": [t.to_json() for t in self.terms]}
        if self.notes:
            out["notes"] = self.notes
        return out

    def to_markdown(self, title="") -> str:
        lines = [f"**{title}** (associated graded)" if title else "(associated graded)", "",
                 "| degree | J | coefficient | base module |", "|---|---|---|---|"]
        for t in self.terms:
            lines.append(f"| {t.degree} | {fmt_set(t.J)} | {t.coefficient} | {t.tag} |")
        if not self.terms:
            lines.append("| - | - | 0 | - |")
        return "\n".join(lines)


def _terms_from(groups: GradedGroups, shift: int, J, tag, desc, bidegree_j=None):
    out = []
    for i, g in groups.items():
        n = i + shift
        bideg = (i, bidegree_j) if bidegree_j is not None else None
        out.append(ModuleTerm(n, frozenset(J), g, tag, desc, bideg))
    return out


# ---------------------------------------------------------------------------
# L² profiles


@dataclass
class L2Profile:
    betti: dict
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        self.betti = {d: Fraction(v) for d, v in sorted(self.betti.items()) if v}

    def __getitem__(self, degree) -> Fraction:
        return self.betti.get(degree, Fraction(0))

    def __eq__(self, other):
        if isinstance(other, L2Profile):
            return self.betti == other.betti
        if isinstance(other, Mapping):
            return self.betti == {d: Fraction(v) for d, v in other.items() if v}
        return NotImplemented

    def euler_characteristic(self) -> Fraction:
        return sum(((-1) ** d * v for d, v in self.betti.items()), Fraction(0))

    def to_json(self) -> dict:
        out = {"betti": {str(d): str(v) for d, v in self.betti.items()}}
        if self.notes:
            out["notes"] = self.notes
        return out


def is_acyclic(L: SimplicialComplex) -> bool:
    return homology_groups(L, variant="reduced").is_zero()


def l2_salvetti(sys: CoxeterSystem) -> L2Profile:
    """``b^n(K, dK) = reduced b^{n-1}(L)`` for the nerve ``L``."""
    return L2Profile(complement_pair_betti(sys.nerve, ()))


def l2_bb(L) -> L2Profile:
    L = _as_complex(L)
    if not L.is_flag():
        raise InvalidInput("Bestvina-Brady groups need a flag complex")
    total = {}
    for s in L.vertices:
        for d, b in link_pair_betti(L, [s]).items():
            total[d] = total.get(d, 0) + b
    return L2Profile(total, {"acyclic": is_acyclic(L)})


def _descriptors(L, descriptors):
    if set(descriptors) != set(L.vertices):
        raise InvalidInput("need one vertex group per vertex")
    return {s: d if isinstance(d, VertexGroupDescriptor) else VertexGroupDescriptor.from_json(d)
            for s, d in descriptors.items()}


def l2_graphproduct(L, descriptors: Mapping, force=None) -> L2Profile:
    """L²-Betti numbers of a graph product of infinite groups."""
    L = _as_complex(L)
    desc = _descriptors(L, descriptors)
    finite = [s for s in L.vertices if desc[s].is_finite]
    if finite:
        raise ProvisoViolation(
            f"vertex groups at {finite!r} are finite; use the graph-product-of-finite-groups formula "
            "(l2_graphproduct_finite)")
    l2 = {s: desc[s].l2_betti(force) for s in L.vertices}
    total = {}
    for J in L.simplices():
        kb = kunneth([l2[s] for s in sort_labels(J)])
        if not kb:
            continue
        for i, b in link_pair_betti(L, J).items():
            for j, x in kb.items():
                total[i + j] = total.get(i + j, Fraction(0)) + b * x
    return L2Profile(total)


# ---------------------------------------------------------------------------
# group-ring cohomology


def _duality_dim(d: VertexGroupDescriptor) -> int:
    if d.kind == "integer":
        return 1
    if d.kind == "generic":
        if d.duality_dim is None:
            raise InsufficientData("an infinite generic vertex group needs duality data for group-ring cohomology")
        return int(d.duality_dim)
    expr = groupring_coxeter(d.system)
    degs = expr.degrees()
    if len(degs) != 1 or not expr.is_torsion_free():
        raise InsufficientData("Coxeter vertex group is not a virtual duality group")
    return degs[0]


def groupring_graphproduct(L, descriptors: Mapping) -> GradedModuleExpr:
    """``Gr H^*(G; ZG)`` for a graph product whose vertex groups are all
    infinite (duality groups) or all finite."""
    L = _as_complex(L)
    desc = _descriptors(L, descriptors)
    fin = {s: desc[s].is_finite for s in L.vertices}
    if any(fin.values()) and not all(fin.values()):
        raise ProvisoViolation("vertex groups must be either all infinite or all finite")
    terms = []
    if L.vertices and all(fin.values()):
        for J in L.simplices():
            H = complement_pair_cohomology(L, J)
            terms += _terms_from(H, 0, J, "Â(J)", f"free abelian subgroup of Z[G/G_J], J = {fmt_set(J)}")
        return GradedModuleExpr(terms, {"branch": "finite"})
    dims = {s: _duality_dim(desc[s]) for s in L.vertices}
    integer = all(desc[s].kind == "integer" for s in L.vertices)
    for J in L.simplices():
        dJ = sum(dims[s] for s in J)
        H = link_pair_cohomology(L, J)
        if integer:
            tag, text = "Z[A/A_J]", f"cosets of A_{fmt_set(J)}"
        else:
            tag = "Z[G/G_J]"
            text = f"H^{dJ}(G_J; Z G_J) tensored up to Z[G], J = {fmt_set(J)}"
        terms += _terms_from(H, dJ, J, tag, text, bidegree_j=dJ)
    return GradedModuleExpr(terms, {"branch": "infinite"})


def groupring_salvetti(sys: CoxeterSystem) -> GradedModuleExpr:
    L = sys.nerve
    ra = sys.is_right_angled()
    terms = []
    for J in sys.spherical_subsets:
        H = link_pair_cohomology(L, J)
        desc = f"F_J = H^{len(J)}(A_J; Z A_J) for J = {fmt_set(J)}"
        if ra:
            desc += "; right-angled, so F_J = Z and the term is Z[A/A_J]"
        terms += _terms_from(H, len(J), J, "F_J ⊗_{A_J} Z[A]", desc)
    return GradedModuleExpr(terms, {"right_angled": ra})


def groupring_bb(L) -> GradedModuleExpr:
    L = _as_complex(L)
    if not L.is_flag():
        raise InvalidInput("Bestvina-Brady groups need a flag complex")
    acyclic = is_acyclic(L)
    terms = []
    for J in L.simplices():
        if not J:
            continue
        H = link_pair_cohomology(L, J)
        terms += _terms_from(H, len(J) - 1, J, "Z[BB/(BB∩A_J)]", f"cosets of BB ∩ A_{fmt_set(J)}")
    meaning = "H^*(BB_L; Z BB_L)" if acyclic else "compactly supported cohomology of the level set Z_L"
    return GradedModuleExpr(terms, {"acyclic": acyclic, "computes": meaning})


@dataclass
class DescentCensus:
    length_bound: int
    complete: bool
    equal: dict        # J -> [count at length 0, 1, ...], descent set equal to J
    contained: dict    # J -> counts with descent set contained in J

    def to_json(self) -> dict:
        def tab(d):
            return {fmt_set(J): v for J, v in sorted(d.items(), key=lambda kv: (len(kv[0]), sort_labels(kv[0])))}
        return {"length_bound": self.length_bound, "complete": self.complete,
                "descent_equal": tab(self.equal), "descent_contained": tab(self.contained)}


def descent_census(sys: CoxeterSystem, length_bound: int, element_cap=None) -> DescentCensus:
    kw = {} if element_cap is None else {"element_cap": element_cap}
    census = enumerate_words(sys, length_bound, **kw)
    equal, contained = {}, {}
    spherical = sys.spherical_subsets
    for J in spherical:
        equal[J] = [0] * (length_bound + 1)
        contained[J] = [0] * (length_bound + 1)
    for e in census.entries:
        D = frozenset(e.descents)
        if D in equal:
            equal[D][e.length] += 1
        for J in spherical:
            if D <= J:
                contained[J][e.length] += 1
    return DescentCensus(length_bound, census.complete, equal, contained)


def groupring_coxeter(sys: CoxeterSystem, census_length: int | None = None, element_cap=None):
    """``H^*(W; ZW)`` as the sum over spherical ``J`` of ``H^n(K, K^{S-J})``
    tensored with the symbolic ``Â(W)^J``.

    With ``census_length`` the descent census is attached under
    ``notes["census"]``.
    """
    L = sys.nerve
    terms = []
    for J in sys.spherical_subsets:
        H = complement_pair_cohomology(L, J)
        terms += _terms_from(H, 0, J, "Â(W)^J",
                             f"free abelian on w whose reduced expressions end in {fmt_set(J)}")
    expr = GradedModuleExpr(terms)
    if census_length is not None:
        expr.notes["census"] = descent_census(sys, census_length, element_cap).to_json()
    return expr


# ---------------------------------------------------------------------------
# polyhedral joins


CHAIN_LIMIT = 30_000


@dataclass
class PjoinReport:
    I: frozenset
    formula: GradedModuleExpr
    direct: GradedGroups
    direct_method: str
    rank_agreement: dict
    torsion_agreement: dict

    @property
    def ranks_agree(self) -> bool:
        return all(self.rank_agreement.values())

    def to_json(self) -> dict:
        return {
            "I": [fmt_label(v) for v in sort_labels(self.I)],
            "formula": self.formula.to_json(),
            "direct": self.direct.to_json(),
            "direct_method": self.direct_method,
            "rank_agreement": {str(d): v for d, v in sorted(self.rank_agreement.items())},
            "torsion_agreement": {str(d): v for d, v in sorted(self.torsion_agreement.items())},
        }


def pjoin_formula(ctx: PjoinContext, I) -> GradedModuleExpr:
    I = ctx.check_simplex(I)
    base = ctx.restricted_base(I)
    F = ctx.F
    terms = []
    for J in base.simplices():
        J = frozenset(J)
        if J & F:
            continue
        coeff = homology_groups(ctx.punctured_join(I, J), variant="reduced")
        pair = link_pair_cohomology(base, J)
        for j, M in coeff.items():
            for i, g in with_coefficients(pair, M).items():
                terms.append(ModuleTerm(i + j + 1, J, g, "H^i(K_J, dK_J; H^j(L^I(J)))",
                                        f"i = {i}, j = {j}", (i, j)))
    return GradedModuleExpr(terms, {"G(I)": [fmt_label(s) for s in sort_labels(ctx.G(I))]})


def pjoin_direct(ctx: PjoinContext, I, method="auto") -> tuple:
    """``H^*(𝒦, 𝒦^{T-I})`` from the order complex of the simplex poset of the
    polyhedral join (or from the full-subcomplex shortcut when it is too big)."""
    I = ctx.check_simplex(I)
    Lj = ctx.complex
    if method == "auto":
        from .simplicial import face_poset
        method = "order-complex" if face_poset(Lj).count_chains() <= CHAIN_LIMIT else "nerve"
    if method == "order-complex":
        ch = chamber(Lj)
        others = [v for v in Lj.vertices if v not in I]
        return homology_groups(ch.K, ch.union_of_mirrors(others)), method
    if method == "nerve":
        return complement_pair_cohomology(Lj, I), method
    raise InvalidInput(f"unknown method {method!r}")


def pjoin_cohomology(ctx: PjoinContext, I, method="auto") -> PjoinReport:
    formula = pjoin_formula(ctx, I)
    direct, used = pjoin_direct(ctx, I, method)
    degs = set(formula.degrees()) | set(direct.degrees())
    ranks, tors = {}, {}
    for d in sorted(degs):
        f = formula.coefficient_sum(d)
        ranks[d] = f.rank == direct[d].rank
        tors[d] = f.torsion == direct[d].torsion
    return PjoinReport(frozenset(I), formula, direct, used, ranks, tors)


# ---------------------------------------------------------------------------
# duality predicates


@dataclass
class DualityVerdict:
    context: str
    condition: str
    holds: bool
    dimension: int | None = None
    witness: dict | None = None
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"context": self.context, "condition": self.condition, "holds": self.holds}
        if self.dimension is not None:
            out["duality_dimension"] = self.dimension
        if self.witness is not None:
            out["witness"] = self.witness
        if self.notes:
            out["notes"] = self.notes
        return out


def _concentration_failure(H: GradedGroups, target: int):
    for d, g in H.items():
        if d != target:
            return {"degree": d, "group": str(g), "reason": f"nonzero outside degree {target}"}
        if not g.is_free():
            return {"degree": d, "group": str(g), "reason": "torsion"}
    return None


def cohen_macaulay(L: SimplicialComplex):
    """``(holds, witness)``: every link, the empty one included, has torsion-free
    reduced cohomology concentrated in degree ``dim L - |J|``."""
    m = L.dimension
    for J in L.simplices():
        bad = _concentration_failure(homology_groups(link(L, J), variant="reduced"), m - len(J))
        if bad:
            return False, {"J": [fmt_label(s) for s in sort_labels(J)], **bad}
    return True, None


def punctured_homology(L: SimplicialComplex, m: int | None = None):
    """``(holds, witness)`` for the PH^m condition, punctures taken as full
    subcomplexes on the complement of a closed simplex."""
    m = L.dimension if m is None else m
    for sigma in L.simplices():
        rest = full_subcomplex(L, [v for v in L.vertices if v not in sigma])
        bad = _concentration_failure(homology_groups(rest, variant="reduced", theory="homology"), m)
        if bad:
            return False, {"sigma": [fmt_label(s) for s in sort_labels(sigma)], **bad}
    return True, None


CONTEXTS = ("raag", "octahedral", "salvetti", "bestvina-brady", "graphproduct-finite")


def duality_report(obj, context: str) -> DualityVerdict:
    if context not in CONTEXTS:
        raise InvalidInput(f"unknown duality context {context!r}")
    if context == "salvetti":
        L = obj.nerve if isinstance(obj, CoxeterSystem) else _as_complex(obj)
    else:
        L = obj.nerve if isinstance(obj, CoxeterSystem) else _as_complex(obj)
        if not L.is_flag():
            raise InvalidInput(f"the {context} context needs a flag complex")
    m = L.dimension
    if context == "graphproduct-finite":
        ok, wit = punctured_homology(L, m)
        return DualityVerdict(context, f"PH^{m}", ok, m + 1 if ok else None, wit)
    ok, wit = cohen_macaulay(L)
    if context == "bestvina-brady":
        acyc = is_acyclic(L)
        holds = ok and acyc
        notes = {"acyclic": acyc}
        if ok and not acyc:
            wit = {"reason": "L is not acyclic, so BB_L is not of type FP"}
        return DualityVerdict(context, "Cohen-Macaulay", holds, m if holds else None, wit, notes)
    return DualityVerdict(context, "Cohen-Macaulay", ok, m + 1 if ok else None, wit)
