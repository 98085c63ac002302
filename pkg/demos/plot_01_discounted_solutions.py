"""
Discounted Lax-Oleinik fixed points
===================================

Solve ``u = T_lam(u) + beta`` exactly on a two-point space and compare the
answer with the truncated discounted series along minimizing chains.
"""

from fractions import Fraction

from weakkam import discounted_series_value, solve_discounted, validate_space

# cost[y][x] is the price of stepping from y to x
space = validate_space(["a", "b"], [[0, 2], [3, 1]])

# at lam = 1/4 the point b prefers its own loop: u(b) = u(b)/4 + 1
sol = solve_discounted(space, Fraction(1, 4))
print("u at lam=1/4:", sol.u, "residual", sol.residual)

# at lam = 3/4 the loop is too expensive and b is reached from a instead
sol = solve_discounted(space, Fraction(3, 4))
print("u at lam=3/4:", sol.u, "predecessors", sol.argmin_map)

# the series truncated after 40 steps brackets the fixed point
for x in range(space.n):
    value, tail = discounted_series_value(space, Fraction(3, 4), 0, x, 40)
    print(f"point {space.labels[x]}: series {float(value):.6f} +/- {float(tail):.2e}")

# the same instance in floating point
fsol = solve_discounted(space.with_mode("float64"), 0.75)
print("float64:", fsol.u)
