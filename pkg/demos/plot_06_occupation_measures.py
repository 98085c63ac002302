"""
Discounted occupation measures
==============================

Following minimizing predecessors backwards from a point and weighting the
k-th edge by ``(1-lam) lam**k`` gives a probability measure on edges.  It is
almost closed: its balance defect is at most ``2(1-lam)``.
"""

from fractions import Fraction

from weakkam import GeneratorSpec, critical_value_karp, discounted_occupation, gen_random, solve_discounted

space = gen_random(GeneratorSpec(n=6, seed=8))
alpha = critical_value_karp(space)
for k in (1, 3, 6, 10):
    lam = 1 - Fraction(1, 2 ** k)
    sol = solve_discounted(space, lam, alpha)
    occ = discounted_occupation(space, lam, sol, 0)
    print(f"lam = {str(lam):>10}  defect {float(occ.defect):.3e} <= {float(2 * (1 - lam)):.3e}"
          f"  cost integral equals (1-lam) u(0): {occ.cost_integral == occ.target}")
