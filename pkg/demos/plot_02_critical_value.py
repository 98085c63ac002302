"""
Three routes to the critical value
==================================

The critical value is minus the minimum cycle mean of the cost graph.  It
is computed here by Karp's algorithm, by an exact linear program over
closed probability measures, and from discounted solutions.
"""

from fractions import Fraction

from weakkam import (
    GeneratorSpec,
    brute_min_mean_cycle,
    critical_value_discounted_estimate,
    critical_value_karp,
    gen_random,
    minimize_cost_lp,
)

space = gen_random(GeneratorSpec(n=5, seed=3))

alpha = critical_value_karp(space)
lp_value, mu = minimize_cost_lp(space)
mean, cycle = brute_min_mean_cycle(space)
print("Karp:          ", alpha)
print("LP:            ", -lp_value)
print("brute force:   ", -mean, "on cycle", cycle)

# -(1-lam) u_lam(x) approaches alpha, with error at most (1-lam)|u^alpha|
for k in (2, 5, 10, 15):
    lam = 1 - Fraction(1, 2 ** k)
    hat, bound = critical_value_discounted_estimate(space, lam)
    print(f"lam = 1 - 2^-{k:<2d}  estimate {float(hat):+.8f}  bound {float(bound):.2e}")
