"""Cohomology of a polyhedral join by formula and by direct computation."""
from coxcohom import PjoinContext, SimplicialComplex, pjoin_cohomology, sphere0

ctx = PjoinContext(SimplicialComplex.simplex("st"),
                   {"s": sphere0(), "t": SimplicialComplex.simplex("xyz")})
for I in [(), (("s", "+"),), (("t", "x"), ("t", "y"), ("t", "z"))]:
    rep = pjoin_cohomology(ctx, I)
    print(f"I = {sorted(I)}: formula {rep.formula.ranks()}, direct {rep.direct.ranks()} "
          f"({rep.direct_method}), agree: {rep.ranks_agree}")
