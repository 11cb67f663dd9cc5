"""Graph products: finite vertex groups, Coxeter vertex groups and RAAGs."""
from fractions import Fraction

from coxcohom import (IntegerGroup, cycle_graph, finite_type, groupring_graphproduct,
                      l2_graphproduct, l2_graphproduct_finite, sphere0, weighted_graphproduct)

print("Z/3 * Z/3:", l2_graphproduct_finite(sphere0("a", "b"), {"a": 3, "b": 3}).betti)
C4 = cycle_graph(4)
print("F2 x F2:", l2_graphproduct(C4, {v: IntegerGroup() for v in C4.vertices}).betti)
print(groupring_graphproduct(C4, {v: IntegerGroup() for v in C4.vertices}).to_markdown("H^*(A; ZA)"))

res = weighted_graphproduct(sphere0("a", "b"), {"a": finite_type("A", 2), "b": finite_type("B", 2)},
                            Fraction(1, 10))
print("A2 * B2 at q = 1/10:", res.branch, res.betti)
print("  V(q) = W(p):", res.growth_check)
