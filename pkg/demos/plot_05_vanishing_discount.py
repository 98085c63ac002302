"""
The vanishing discount limit
============================

As ``lam -> 1`` the critically shifted discounted solutions converge to one
particular weak KAM solution ``u0``.  It is the minimum over Mather
measures of the averaged barrier.  The sweep below shows the error decaying
like a constant times ``1 - lam``.
"""

from weakkam import GeneratorSpec, convergence_sweep, gen_random
from weakkam.serialize import sweep_to_csv

space = gen_random(GeneratorSpec(n=5, seed=3))
report = convergence_sweep(space)
print("u0 =", [str(v) for v in report.u0])

for row in report.rows[::3]:
    ratio = float(row.sup_error / (1 - row.lam))
    print(f"1-lam = {float(1 - row.lam):.2e}  error {float(row.sup_error):.3e}  error/(1-lam) {ratio:.4f}")

# CSV is the plotting interface
print(sweep_to_csv(report).splitlines()[0])
