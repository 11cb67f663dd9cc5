"""Weighted L2-Betti numbers on both sides of the region of convergence."""
from fractions import Fraction

from coxcohom import CoxeterSystem, cycle_graph, dims_D, weighted_betti
from coxcohom.weighted import dihedral_system

D = dihedral_system()
for q in (Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(7, 2)):
    prof = weighted_betti(D, q)
    print(f"D_inf, q = {q}: {prof.branch} branch, betti {prof.betti}")

P = CoxeterSystem.right_angled(cycle_graph(5))
prof = weighted_betti(P, 3)
print("pentagon, q = 3:", prof.betti, "sum of dim D^J =", sum(dims_D(P, prof.q).values()))
forced = weighted_betti(P, 1, force="large")
print("pentagon, q = 1 (forced, unverified):", forced.betti, forced.unverified)
