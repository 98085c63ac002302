"""
Peierls barrier and the Aubry set
=================================

The Mane potential is a shortest-walk matrix of the shifted costs
``c + alpha``.  Its zero diagonal entries form the Aubry set, and the Peierls
barrier routes every connection through that set.  The barrier is checked
against long minimal path costs.
"""

from weakkam import barrier_data, gen_torus, GeneratorSpec, peierls_liminf_oracle, weak_kam_solution
from weakkam.lax_oleinik import discounted_residual

# a circle of 8 points with one potential well at 0
spec = GeneratorSpec(kind="torus_lagrangian", grid_size=8, potential=(0,) + (1,) * 7)
space = gen_torus(spec)
b = barrier_data(space)
print("alpha =", b.alpha, " Aubry set =", sorted(b.aubry))

# barrier rows at Aubry points are exact weak KAM solutions
u = weak_kam_solution(space, b, 0)
print("h(0, .) =", [str(v) for v in u])
print("residual of u = T(u) + alpha:", discounted_residual(space, u, None, b.alpha))

# the liminf of long path costs agrees entrywise with the barrier
oracle = peierls_liminf_oracle(space, b.alpha, horizon=60, window=8)
print("barrier matches long-path oracle:", oracle == [list(r) for r in b.h])
