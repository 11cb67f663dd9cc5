"""Mayer-Vietoris spectral sequence for a cover of a polyhedral join chamber."""
from coxcohom import PjoinContext, build_pages, check_conditions, pjoin_cover, sphere0, verify_decomposition

ctx = PjoinContext(sphere0("s", "t"), {"s": sphere0(), "t": sphere0()})
ps = pjoin_cover(ctx)
cond = check_conditions(ps)
print("(Z):", cond.Z, " (Z'):", cond.Z_prime)
pages = build_pages(ps)
print("E2:", {k: v for k, v in pages.E2.items() if v})
print("direct:", pages.direct, " degenerates:", pages.degenerates)
print("decomposition:", verify_decomposition(ps, cond).to_json())
