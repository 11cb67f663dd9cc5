"""Weighted L²-Betti numbers of Coxeter groups and graph products.

All values are exact :class:`fractions.Fraction` objects.  A weight is a
:class:`~coxcohom.coxeter.MultiParameter`; which closed formula applies
depends on a regime certificate from :func:`~coxcohom.coxeter.regime_test`:

* ``q`` in the closed region of convergence: only degree 0 survives and
  equals ``1/W(q)``;
* ``1/q`` in the closed region: degree ``j`` is
  ``sum_J b^j(K, K^{S-J}) * dim D^J``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import sympy

from .coxeter import (INF, CoxeterSystem, MultiParameter, RegimeCertificate,
                      growth_data, inverse_growth_value, regime_test, to_fraction)
from .errors import InvalidInput, PoleError, ProvisoViolation, RegimeUncertifiable
from .homology import betti_numbers, complement_pair_betti, link_pair_betti
from .simplicial import (MirroredChamber, SimplicialComplex, octahedralization,
                         sort_labels)


def dim_D(sys: CoxeterSystem, q: MultiParameter, J) -> Fraction:
    """``sum over spherical I containing J of (-1)^|I-J| / W_I(q)``."""
    J = frozenset(J)
    if not sys.is_spherical(J):
        raise InvalidInput(f"{sort_labels(J)!r} is not spherical")
    G = growth_data(sys)
    total = Fraction(0)
    for I in sys.spherical_subsets:
        if J <= I:
            total += Fraction((-1) ** (len(I) - len(J))) / G.value(I, q.values)
    return total


def dims_D(sys: CoxeterSystem, q: MultiParameter) -> dict:
    G = growth_data(sys)
    inv = {I: 1 / G.value(I, q.values) for I in sys.spherical_subsets}
    out = {}
    for J in sys.spherical_subsets:
        out[J] = sum((Fraction((-1) ** (len(I) - len(J))) * v for I, v in inv.items() if J <= I),
                     Fraction(0))
    return out


@dataclass
class WeightedProfile:
    system: CoxeterSystem
    q: MultiParameter
    certificate: RegimeCertificate
    branch: str                      # "small" or "large"
    betti: dict                      # degree -> Fraction (nonzero only)
    dims: dict = field(default_factory=dict)
    unverified: bool = False

    def __getitem__(self, degree) -> Fraction:
        return self.betti.get(degree, Fraction(0))

    def euler_characteristic(self) -> Fraction:
        return sum(((-1) ** d * b for d, b in self.betti.items()), Fraction(0))

    def to_json(self) -> dict:
        out = {
            "branch": self.branch,
            "betti": {str(d): str(b) for d, b in sorted(self.betti.items())},
            "certificate": self.certificate.to_json(),
        }
        if self.unverified:
            out["unverified-hypothesis"] = True
        return out


def _choose_branch(cert: RegimeCertificate, force):
    if force is not None:
        if force not in ("small", "large"):
            raise InvalidInput(f"unknown forced regime {force!r}")
        ok = cert.small if force == "small" else cert.large
        return force, not ok
    if cert.small:
        return "small", False
    if cert.large:
        return "large", False
    raise RegimeUncertifiable(
        "neither q nor 1/q is certified to lie in the closed region of convergence",
        certificate=cert)


def weighted_betti(sys: CoxeterSystem, q, chamber: MirroredChamber = None, force=None) -> WeightedProfile:
    """Weighted L²-Betti numbers of ``U(W, M)``.

    ``chamber`` defaults to the Davis chamber, handled through its nerve;
    any explicit :class:`MirroredChamber` is handled by direct pair homology.
    """
    if not isinstance(q, MultiParameter):
        q = MultiParameter.uniform(sys, q) if not isinstance(q, Mapping) else MultiParameter(sys, q)
    cert = regime_test(sys, q)
    branch, unverified = _choose_branch(cert, force)
    dims = dims_D(sys, q)
    if branch == "small":
        val = inverse_growth_value(sys, q.values)
        betti = {0: val} if val else {}
        return WeightedProfile(sys, q, cert, branch, betti, dims, unverified)
    betti = {}
    for J, d in dims.items():
        if not d:
            continue
        if chamber is None:
            b = complement_pair_betti(sys.nerve, J)
        else:
            b = betti_numbers(chamber.K, chamber.complement_union(J))
        for deg, x in b.items():
            betti[deg] = betti.get(deg, Fraction(0)) + x * d
    betti = {k: v for k, v in sorted(betti.items()) if v}
    return WeightedProfile(sys, q, cert, branch, betti, dims, unverified)


def kunneth(profiles) -> dict:
    """Sum over compositions of products: the Betti numbers of a product."""
    out = {0: Fraction(1)}
    for prof in profiles:
        new = {}
        for a, x in out.items():
            for b, y in prof.items():
                if x and y:
                    new[a + b] = new.get(a + b, Fraction(0)) + x * y
        out = new
    return {k: v for k, v in sorted(out.items()) if v}


# ---------------------------------------------------------------------------
# graph products


def _as_complex(graph) -> SimplicialComplex:
    if isinstance(graph, SimplicialComplex):
        return graph
    vertices, edges = graph
    from .simplicial import flag_complex
    return flag_complex(vertices, edges)


def l2_graphproduct_finite(graph, orders: Mapping, force=None) -> WeightedProfile:
    """L²-Betti numbers of a graph product of finite groups of the given orders,
    via the right-angled system at ``p_s = |G_s| - 1``."""
    L = _as_complex(graph)
    for s in L.vertices:
        n = orders.get(s)
        if n is None or int(n) < 2:
            raise InvalidInput(f"vertex {s!r} needs a finite order at least 2")
    W = CoxeterSystem.right_angled(L)
    p = MultiParameter(W, {s: Fraction(int(orders[s]) - 1) for s in L.vertices})
    return weighted_betti(W, p, force=force)


def graph_product_system(L: SimplicialComplex, factors: Mapping) -> CoxeterSystem:
    """The Coxeter system ``(V, T)`` of a graph product of Coxeter systems.

    Generators are pairs ``(s, t)``; labels inside a factor are kept, across
    an edge of ``L`` they are 2 and otherwise infinite.
    """
    if set(factors) != set(L.vertices):
        raise InvalidInput("need one vertex system per vertex")
    gens = [(s, t) for s in L.vertices for t in factors[s].generators]
    adj = {frozenset(e) for e in L.edges()}
    labels = {}
    for a in gens:
        for b in gens:
            if label_lt(a, b):
                if a[0] == b[0]:
                    labels[(a, b)] = factors[a[0]].m(a[1], b[1])
                elif frozenset((a[0], b[0])) in adj:
                    labels[(a, b)] = 2
    return CoxeterSystem(gens, labels, default=INF)


def label_lt(a, b):
    from .simplicial import label_key
    return label_key(a) < label_key(b)


def _factor_weights(L, factors, q):
    """Split weights on ``T`` into multiparameters on each factor and on (V, T)."""
    V = graph_product_system(L, factors)
    if isinstance(q, MultiParameter):
        qv = q
    elif isinstance(q, Mapping):
        qv = MultiParameter(V, {k: to_fraction(v) for k, v in q.items()})
    else:
        qv = MultiParameter.uniform(V, q)
    per = {}
    for s in L.vertices:
        per[s] = MultiParameter(factors[s], {t: qv.q((s, t)) for t in factors[s].generators})
    return V, qv, per


def growth_value(sys: CoxeterSystem, q) -> Fraction:
    """``W(q)`` as an exact rational (the analytic continuation for infinite ``W``).

    ``q`` is a :class:`MultiParameter` or a mapping from generators to
    rationals of any sign; the latter is needed for changes of variables
    whose image leaves the positive orthant.
    """
    point = q.values if isinstance(q, MultiParameter) else _point(sys, q)
    if sys.is_finite():
        return growth_data(sys).value(sys.generators, point)
    inv = inverse_growth_value(sys, point)
    if inv == 0:
        raise PoleError("q is a pole of the growth series")
    return 1 / inv


def _point(sys, values: Mapping) -> tuple:
    vals = [None] * sys.nclasses
    for s, v in values.items():
        vals[sys.class_of[sys.index[s]]] = to_fraction(v)
    if any(v is None for v in vals):
        raise InvalidInput("missing weights")
    return tuple(vals)


@dataclass
class GraphProductResult:
    branch: str
    betti: dict
    p: dict = field(default_factory=dict)
    growth_check: dict = field(default_factory=dict)
    factor_profiles: dict = field(default_factory=dict)
    unverified: bool = False

    def __getitem__(self, degree):
        return self.betti.get(degree, Fraction(0))

    def to_json(self) -> dict:
        out = {"branch": self.branch,
               "betti": {str(d): str(b) for d, b in sorted(self.betti.items())}}
        if self.p:
            out["p"] = {str(s): str(v) for s, v in self.p.items()}
        if self.growth_check:
            out["growth_check"] = {k: str(v) for k, v in self.growth_check.items()}
        if self.unverified:
            out["unverified-hypothesis"] = True
        return out


def weighted_graphproduct(L, factors: Mapping, q, branch="auto", force=None) -> GraphProductResult:
    """Weighted L²-Betti numbers of a graph product ``V`` of Coxeter groups.

    ``branch="small"`` changes variables to ``p_s = V_s(q) - 1`` on the
    right-angled system of ``L``; ``branch="large"`` assembles the factor
    numbers over the simplices of ``L``.  ``"auto"`` picks the branch from
    the factor certificates and rejects mixed regimes.
    """
    L = _as_complex(L)
    V, qv, per = _factor_weights(L, factors, q)
    certs = {s: regime_test(factors[s], per[s]) for s in L.vertices}
    finite = {s: factors[s].is_finite() for s in L.vertices}

    def small_ok(s):
        if finite[s]:
            return True
        return certs[s].small and inverse_growth_value(factors[s], per[s].values) != 0

    def large_ok(s):
        return not finite[s] and certs[s].large

    if branch == "auto":
        if all(small_ok(s) for s in L.vertices):
            branch = "small"
        elif all(large_ok(s) for s in L.vertices):
            branch = "large"
        else:
            raise ProvisoViolation(
                "vertex regimes are mixed or uncertified: q must lie in every R(V_s) or outside all of them")
    if branch == "large":
        bad = [s for s in L.vertices if finite[s]]
        if bad:
            raise ProvisoViolation(f"large-weight formula needs infinite vertex groups; {bad!r} are finite")
        if not all(large_ok(s) for s in L.vertices) and force is None:
            raise RegimeUncertifiable("some vertex weight is not certified large")
        return _large_branch(L, factors, per, force)
    if branch != "small":
        raise InvalidInput(f"unknown branch {branch!r}")
    if not all(small_ok(s) for s in L.vertices):
        raise ProvisoViolation("small branch needs q inside the region of convergence of every V_s")
    p = {s: growth_value(factors[s], per[s]) - 1 for s in L.vertices}
    W = CoxeterSystem.right_angled(L)
    pw = MultiParameter(W, p)
    prof = weighted_betti(W, pw, force=force)
    check = {}
    try:
        check = {"V(q)": growth_value(V, qv), "W(p)": growth_value(W, pw)}
    except PoleError:
        pass
    return GraphProductResult("small", dict(prof.betti), p, check, {}, prof.unverified)


def _large_branch(L, factors, per, force):
    profiles = {}
    unverified = False
    for s in L.vertices:
        prof = weighted_betti(factors[s], per[s], force="large" if force else None)
        if prof.branch != "large" and not force:
            prof = weighted_betti(factors[s], per[s], force="large")
        profiles[s] = prof.betti
        unverified |= prof.unverified
    betti = {}
    for J in L.simplices():
        kb = kunneth([profiles[s] for s in sort_labels(J)])
        for i, b in link_pair_betti(L, J).items():
            for j, x in kb.items():
                betti[i + j] = betti.get(i + j, Fraction(0)) + b * x
    betti = {k: v for k, v in sorted(betti.items()) if v}
    return GraphProductResult("large", betti, {}, {}, {str(s): p for s, p in profiles.items()}, unverified)


# ---------------------------------------------------------------------------
# octahedralization


def dihedral_system(plus="+", minus="-") -> CoxeterSystem:
    return CoxeterSystem([plus, minus], {}, default=INF)


def _pairs(L, q):
    out = {}
    for s in L.vertices:
        v = q[s] if isinstance(q, Mapping) else q
        if isinstance(v, (tuple, list)):
            a, b = map(to_fraction, v)
        else:
            a = b = to_fraction(v)
        if a <= 0 or b <= 0:
            raise InvalidInput("weights must be positive")
        out[s] = (a, b)
    return out


def oct_p(qp: Fraction, qm: Fraction) -> Fraction:
    if qp * qm == 1:
        raise PoleError("q+ q- = 1 is a pole of the dihedral growth series")
    return (qp + qm + 2 * qp * qm) / (1 - qp * qm)


@dataclass
class OctReport:
    p: dict
    clause: str
    betti: dict
    growth_check: dict = field(default_factory=dict)
    note: str = ""
    unverified: bool = False

    def to_json(self):
        out = {"clause": self.clause, "p": {str(s): str(v) for s, v in self.p.items()},
               "betti": {str(d): str(b) for d, b in sorted(self.betti.items())}}
        if self.growth_check:
            out["growth_check"] = {k: str(v) for k, v in self.growth_check.items()}
        if self.note:
            out["note"] = self.note
        if self.unverified:
            out["unverified-hypothesis"] = True
        return out


def oct_weighted(L: SimplicialComplex, q, force=None) -> OctReport:
    """Weighted L²-Betti numbers of the octahedralization ``W_OL``.

    ``q`` is a rational, or a map from vertices to a rational or a pair
    ``(q_plus, q_minus)``.
    """
    qq = _pairs(L, q)
    vals = [x for pair in qq.values() for x in pair]
    W = CoxeterSystem.right_angled(L)
    if all(x == 1 for x in vals):
        # every p_s sits on its pole, but the closed form survives
        betti = {k: Fraction(v) for k, v in complement_pair_betti(L, ()).items()}
        return OctReport({}, "q = 1", betti, note="p is undefined at q = 1")
    p = {s: oct_p(a, b) for s, (a, b) in qq.items()}
    check = {}
    try:
        OL = octahedralization(L)
        WOL = CoxeterSystem.right_angled(OL)
        qo = MultiParameter(WOL, {(s, "+"): a for s, (a, _) in qq.items()} |
                            {(s, "-"): b for s, (_, b) in qq.items()})
        check = {"W_OL(q)": growth_value(WOL, qo), "W(p)": growth_value(W, p)}
    except PoleError:
        pass
    if all(x > 1 for x in vals):
        betti = {}
        for J in L.simplices():
            f = Fraction(1)
            for s in J:
                a, b = qq[s]
                f *= (a * b - 1) / ((1 + b) * (1 + a))
            for i, bb in link_pair_betti(L, J).items():
                betti[i + len(J)] = betti.get(i + len(J), Fraction(0)) + bb * f
        betti = {k: v for k, v in sorted(betti.items()) if v}
        return OctReport(p, "q > 1", betti, check)
    if all(x < 1 for x in vals):
        prof = weighted_betti(W, MultiParameter(W, p), force=force)
        return OctReport(p, "q < 1", dict(prof.betti), check, unverified=prof.unverified)
    return OctReport(p, "mixed", {}, check, note="no closed formula for mixed weights")


def oct_limits(L: SimplicialComplex) -> dict:
    """Exact ``q -> 1`` limits of the two one-variable rational functions

    ``(q+1)/(1-q) * L2_q b^n(W_OL)``  (from ``q < 1``) and
    ``(q+1)/(q-1) * L2_q b^{n+1}(W_OL)``  (from ``q > 1``)

    compared with ``sum_s b^n(K_s, dK_s)``.  A divergent limit is ``None``;
    agreement is only expected when ``L`` is acyclic.
    """
    t = sympy.Symbol("q", positive=True)
    simplices = [frozenset(J) for J in L.simplices()]
    rel = {J: complement_pair_betti(L, J) for J in simplices}
    # q < 1 branch at p = 2q/(1-q): W_I(p) = ((1+q)/(1-q))^|I|
    x = (t - 1) / (1 + t)
    dims = {J: (-1) ** len(J) * sum(x ** len(I) for I in simplices if J <= I) for J in simplices}
    top = L.dimension + 2
    small, large, expected = {}, {}, {}
    for n in range(-1, top + 1):
        f1 = sum(rel[J].get(n, 0) * dims[J] for J in simplices)
        g1 = sympy.cancel((t + 1) / (1 - t) * f1)
        f2 = sum(link_pair_betti(L, J).get(n + 1 - len(J), 0) * x ** len(J) for J in simplices)
        g2 = sympy.cancel((t + 1) / (t - 1) * f2)
        small[n] = _limit_at_one(g1, t)
        large[n] = _limit_at_one(g2, t)
        expected[n] = sum(link_pair_betti(L, [s]).get(n, 0) for s in L.vertices)
    keep = [n for n in small if small[n] or large[n] or expected[n]]
    acyclic = not any(rel[frozenset()].values())
    return {
        "acyclic": acyclic,
        "from_below": {n: small[n] for n in keep},
        "from_above": {n: large[n] for n in keep},
        "link_sum": {n: Fraction(expected[n]) for n in keep},
    }


def _limit_at_one(expr, t) -> Fraction | None:
    num, den = sympy.fraction(sympy.together(expr))
    d = den.subs(t, 1)
    if d == 0:
        return None
    v = sympy.Rational(num.subs(t, 1) / d)
    return Fraction(int(v.p), int(v.q))


# ---------------------------------------------------------------------------
# vertex groups of a graph product


@dataclass(frozen=True)
class VertexGroupDescriptor:
    """What is known about one vertex group of a graph product.

    ``kind`` is ``"finite"`` (``order``), ``"coxeter"`` (``system``),
    ``"generic"`` (an infinite group given by its L²-Betti numbers and,
    optionally, the degree in which it is a duality group) or
    ``"integer"`` (the infinite cyclic group).
    """

    kind: str
    order: int | None = None
    system: CoxeterSystem | None = None
    l2: tuple = ()                     # sorted (degree, Fraction) pairs
    duality_dim: int | None = None

    def __post_init__(self):
        if self.kind == "finite" and (self.order is None or self.order < 2):
            raise InvalidInput("a finite vertex group needs order at least 2")
        if self.kind == "coxeter" and self.system is None:
            raise InvalidInput("a Coxeter vertex group needs its system")
        if self.kind == "generic" and any(v < 0 for _, v in self.l2):
            raise InvalidInput("L2-Betti numbers are nonnegative")
        if self.kind not in ("finite", "coxeter", "generic", "integer"):
            raise InvalidInput(f"unknown vertex group kind {self.kind!r}")

    @property
    def is_finite(self) -> bool:
        if self.kind == "finite":
            return True
        return self.kind == "coxeter" and self.system.is_finite()

    def l2_betti(self, force=None) -> dict:
        if self.kind == "finite":
            return {0: Fraction(1, self.order)}
        if self.kind == "integer":
            return {}
        if self.kind == "generic":
            return {d: v for d, v in self.l2 if v}
        if self.system.is_finite():
            return {0: Fraction(1, growth_data(self.system).value(self.system.generators,
                                                                   (1,) * self.system.nclasses))}
        return dict(weighted_betti(self.system, 1, force=force).betti)

    def describe(self) -> str:
        if self.kind == "finite":
            return f"finite of order {self.order}"
        if self.kind == "integer":
            return "Z"
        if self.kind == "coxeter":
            return f"Coxeter group on {list(map(str, self.system.generators))}"
        return "infinite group with L2-Betti numbers " + \
            ", ".join(f"{d}: {v}" for d, v in self.l2)

    def to_json(self) -> dict:
        if self.kind == "finite":
            return {"kind": "finite", "order": self.order}
        if self.kind == "integer":
            return {"kind": "integer"}
        if self.kind == "coxeter":
            return {"kind": "coxeter", "system": self.system.to_json()}
        out = {"kind": "generic", "l2": {str(d): str(v) for d, v in self.l2}}
        if self.duality_dim is not None:
            out["duality_dim"] = self.duality_dim
        return out

    @classmethod
    def from_json(cls, data) -> "VertexGroupDescriptor":
        if isinstance(data, str):
            s = data.strip()
            if s == "Z":
                return IntegerGroup()
            if s.startswith("Z/"):
                return FiniteOfOrder(int(s[2:]))
            if s in ("D_inf", "Dinf"):
                return CoxeterVertex(CoxeterSystem(["+", "-"], {}, default=INF))
            raise InvalidInput(f"unknown vertex group shorthand {data!r}")
        kind = data.get("kind")
        if kind == "finite":
            return FiniteOfOrder(int(data["order"]))
        if kind == "integer":
            return IntegerGroup()
        if kind == "coxeter":
            return CoxeterVertex(CoxeterSystem.from_json(data["system"]))
        if kind == "generic":
            l2 = {int(k): to_fraction(v) for k, v in data.get("l2", {}).items()}
            return InfiniteGeneric(l2, data.get("duality_dim"))
        raise InvalidInput(f"unknown vertex group kind {kind!r}")


def FiniteOfOrder(n: int) -> VertexGroupDescriptor:
    return VertexGroupDescriptor("finite", order=int(n))


def CoxeterVertex(sys: CoxeterSystem) -> VertexGroupDescriptor:
    return VertexGroupDescriptor("coxeter", system=sys)


def InfiniteGeneric(l2: Mapping, duality_dim: int | None = None) -> VertexGroupDescriptor:
    return VertexGroupDescriptor("generic", l2=tuple(sorted((int(d), to_fraction(v)) for d, v in l2.items())),
                                 duality_dim=duality_dim)


def IntegerGroup() -> VertexGroupDescriptor:
    return VertexGroupDescriptor("integer")
