"""Sparse multivariate integer polynomials and rational functions.

Polynomials are plain ``dict`` objects mapping exponent tuples to integer
coefficients; the helpers here do the bookkeeping.  Canonical forms of
rational functions (gcd cancellation) are delegated to sympy.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd

import sympy

from .errors import PoleError


# -- dict polynomials ------------------------------------------------------

def pconst(c, nvars):
    return {(0,) * nvars: c} if c else {}


def pmono(exp, c=1):
    return {tuple(exp): c} if c else {}


def padd(p, q, sign=1):
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def pmul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def pprod(polys, nvars):
    return reduce(pmul, polys, pconst(1, nvars))


def peval(p, point) -> Fraction:
    total = Fraction(0)
    for e, c in p.items():
        term = Fraction(c)
        for x, k in zip(point, e):
            if k:
                term *= Fraction(x) ** k
        total += term
    return total


def pdegree(p) -> int:
    return max((sum(e) for e in p), default=-1)


def ptop(p):
    """The unique term of maximal total degree (growth polynomials have one)."""
    d = pdegree(p)
    tops = [(e, c) for e, c in p.items() if sum(e) == d]
    if len(tops) != 1:
        raise ValueError("polynomial has no unique top term")
    return tops[0]


def psubs_uniform(p):
    """Specialise every variable to a single variable; returns ``{k: coeff}``."""
    out = {}
    for e, c in p.items():
        k = sum(e)
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def premap(p, mapping, nvars):
    """Send local variable ``i`` to global variable ``mapping[i]``."""
    out = {}
    for e, c in p.items():
        ne = [0] * nvars
        for i, k in enumerate(e):
            ne[mapping[i]] += k
        ne = tuple(ne)
        out[ne] = out.get(ne, 0) + c
    return {e: c for e, c in out.items() if c}


def q_integer(n: int):
    """``[n]_t = 1 + t + ... + t^(n-1)`` in one variable."""
    return {(k,): 1 for k in range(n)}


# -- sympy bridges ---------------------------------------------------------

def symbols(nvars, name="t"):
    return sympy.symbols(f"{name}0:{max(nvars, 1)}")[:nvars] if nvars else ()


def to_sympy(p, gens):
    if not gens:
        return sympy.Poly(sum(p.values()) if p else 0, sympy.Symbol("t_"), domain="ZZ")
    return sympy.Poly.from_dict(p if p else {(0,) * len(gens): 0}, *gens, domain="ZZ")


def from_sympy(P, nvars):
    if nvars == 0:
        return pconst(int(P.as_expr()), 0)
    return {tuple(e): int(c) for e, c in P.as_dict().items() if c}


class MultivarRationalFn:
    """``num / den`` with integer coefficients in ``nvars`` variables.

    The stored form is canonical: ``gcd(num, den) = 1``, the combined
    integer content is 1 and the leading coefficient of ``den`` (in the
    lexicographic term order) is positive.  Equal functions therefore have
    equal representations.
    """

    __slots__ = ("num", "den", "nvars")

    def __init__(self, num, den=None, nvars=None):
        if nvars is None:
            some = next(iter(num), None) or (next(iter(den), None) if den else None)
            nvars = len(some) if some is not None else 0
        self.nvars = nvars
        if den is None:
            den = pconst(1, nvars)
        if not den:
            raise PoleError("zero denominator")
        self.num, self.den = self._canonical(num, den, nvars)

    @staticmethod
    def _canonical(num, den, nvars):
        if not num:
            return {}, pconst(1, nvars)
        if nvars == 0:
            f = Fraction(sum(num.values()), sum(den.values()))
            return pconst(f.numerator, 0), pconst(f.denominator, 0)
        gens = symbols(nvars)
        N, D = to_sympy(num, gens), to_sympy(den, gens)
        g = sympy.gcd(N, D)
        if g.total_degree() > 0:
            N, D = N.exquo(g), D.exquo(g)
        n, d = from_sympy(N, nvars), from_sympy(D, nvars)
        c = reduce(gcd, list(n.values()) + list(d.values()))
        lead = d[max(d)]
        if lead < 0:
            c = -c
        return {e: v // c for e, v in n.items()}, {e: v // c for e, v in d.items()}

    def to_sympy_expr(self, gens=None):
        gens = gens or symbols(self.nvars)
        return to_sympy(self.num, gens).as_expr() / to_sympy(self.den, gens).as_expr()

    def __eq__(self, other):
        if not isinstance(other, MultivarRationalFn):
            return NotImplemented
        return self.nvars == other.nvars and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.num.items())), tuple(sorted(self.den.items()))))

    def __repr__(self):
        return f"MultivarRationalFn({self.to_sympy_expr()})"

    def __mul__(self, other):
        return MultivarRationalFn(pmul(self.num, other.num), pmul(self.den, other.den), self.nvars)

    def __add__(self, other):
        return MultivarRationalFn(
            padd(pmul(self.num, other.den), pmul(other.num, self.den)),
            pmul(self.den, other.den), self.nvars)

    def __sub__(self, other):
        return MultivarRationalFn(
            padd(pmul(self.num, other.den), pmul(other.num, self.den), -1),
            pmul(self.den, other.den), self.nvars)

    def reciprocal(self):
        if not self.num:
            raise PoleError("reciprocal of zero")
        return MultivarRationalFn(self.den, self.num, self.nvars)

    def is_polynomial(self) -> bool:
        return len(self.den) == 1 and set(self.den.values()) == {1} and pdegree(self.den) == 0

    def evaluate(self, point) -> Fraction:
        d = peval(self.den, point)
        if d == 0:
            raise PoleError(f"pole at {tuple(map(str, point))}")
        return peval(self.num, point) / d

    __call__ = evaluate

    def uniform(self):
        """Specialisation with all variables equal: a one-variable function."""
        return MultivarRationalFn(
            {(k,): c for k, c in psubs_uniform(self.num).items()},
            {(k,): c for k, c in psubs_uniform(self.den).items()}, 1)

    def series(self, max_degree: int) -> dict:
        """Taylor coefficients at 0 through total degree ``max_degree``."""
        zero = (0,) * self.nvars
        c0 = self.den.get(zero, 0)
        if c0 == 0:
            raise PoleError("no power series expansion at the origin")
        num_by = _homogeneous_parts(self.num)
        den_by = _homogeneous_parts(self.den)
        out_by = {}
        for d in range(max_degree + 1):
            acc = dict(num_by.get(d, {}))
            for k in range(1, d + 1):
                if k in den_by and d - k in out_by:
                    acc = padd(acc, pmul(den_by[k], out_by[d - k]), -1)
            part = {}
            for e, c in acc.items():
                v = Fraction(c, c0)
                if v.denominator != 1:
                    part[e] = v
                elif v:
                    part[e] = int(v)
            out_by[d] = part
        out = {}
        for part in out_by.values():
            out.update(part)
        return out

    def to_json(self) -> dict:
        def terms(p):
            return [{"coef": c, "exp": {str(i): k for i, k in enumerate(e) if k}}
                    for e, c in sorted(p.items())]
        return {"nvars": self.nvars, "num": terms(self.num), "den": terms(self.den)}

    @classmethod
    def from_json(cls, data):
        nv = int(data["nvars"])

        def poly(ts):
            out = {}
            for t in ts:
                e = [0] * nv
                for i, k in t["exp"].items():
                    e[int(i)] = int(k)
                out[tuple(e)] = int(t["coef"])
            return out
        return cls(poly(data["num"]), poly(data["den"]), nv)


def _homogeneous_parts(p):
    out = {}
    for e, c in p.items():
        out.setdefault(sum(e), {})[e] = c
    return out


# -- univariate root isolation --------------------------------------------

def univariate_positive_roots(coeffs: dict, eps=Fraction(1, 10 ** 12)):
    """Isolating intervals (exact rational endpoints) for positive real roots,
    sorted increasingly, of ``sum c_k t^k``."""
    t = sympy.Symbol("t")
    P = sympy.Poly(sum(c * t ** k for k, c in coeffs.items()), t, domain="ZZ")
    if P.degree() <= 0:
        return []
    out = []
    for (lo, hi), _mult in P.intervals(eps=sympy.Rational(eps.numerator, eps.denominator), inf=0):
        lo, hi = Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q))
        if hi <= 0:
            continue
        if lo <= 0 < hi and P.eval(0) == 0:
            continue
        out.append((lo, hi))
    return sorted(out)


def count_roots_open(coeffs: dict, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots strictly inside ``(lo, hi)``."""
    t = sympy.Symbol("t")
    P = sympy.Poly(sum(c * t ** k for k, c in coeffs.items()), t, domain="ZZ")
    if P.degree() <= 0:
        return 0
    slo = sympy.Rational(lo.numerator, lo.denominator)
    shi = sympy.Rational(hi.numerator, hi.denominator)
    n = P.sqf_part().count_roots(slo, shi)
    n -= int(P.eval(slo) == 0) + int(P.eval(shi) == 0 and shi != slo)
    return n
