"""Growth series of a few Coxeter groups and where their weights are certified."""
from fractions import Fraction

from coxcohom import (CoxeterSystem, MultiParameter, classify_finite, cycle_graph, enumerate_words,
                      finite_type, growth_series, radius_of_convergence, regime_test)

for name, W in [("A3", finite_type("A", 3)), ("H3", finite_type("H", 3)),
                ("pentagon", CoxeterSystem.right_angled(cycle_graph(5))),
                ("(3,3,3) triangle", CoxeterSystem.from_edges("stu", {("s", "t"): 3, ("t", "u"): 3,
                                                                      ("s", "u"): 3}))]:
    c = classify_finite(W)
    print(f"{name}: {c.describe()}, order {c.order}")
    print("  W(t) =", growth_series(W).uniform().to_sympy_expr())
    print("  lengths 0..6:", enumerate_words(W, 6).length_profile()[:7])
    if not W.is_finite():
        lo, hi = radius_of_convergence(W)
        print(f"  radius of convergence in [{float(lo):.6f}, {float(hi):.6f}]")
        for q in (Fraction(1, 3), Fraction(1), Fraction(3)):
            print(f"  q = {q}: {regime_test(W, MultiParameter.uniform(W, q)).verdict}")
