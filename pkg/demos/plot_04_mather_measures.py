"""
Mather measures
===============

Closed probability measures minimizing the expected cost are Mather
measures.  The extreme ones are uniform measures on circuits of the
critical graph.  Their support lies in the Aubry set.
"""

from weakkam import barrier_data, extreme_mather_measures, project, support_in_aubry, validate_space
from weakkam.mather import integrate_edges

# two zero-cost loops at points 0 and 1, and a costly point 2
space = validate_space(None, [[0, 1, 4], [1, 0, 4], [2, 2, 3]])
b = barrier_data(space)
print("alpha =", b.alpha, " critical edges:", sorted(b.critical_edges))

for cm in extreme_mather_measures(space, b):
    print("cycle", cm.cycle,
          "cost", integrate_edges(space, cm.measure),
          "projection", [str(v) for v in project(cm.measure, 1)],
          "supported on Aubry set:", support_in_aubry(space, cm.measure, b))
