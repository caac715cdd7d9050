"""
A two-species model with immigration and higher-order terms
============================================================

The graph has eight vertices (exponents with negative and fractional
entries) and fifteen weighted edges. It generates the system below, and
x = (1, 1) is complex balanced.
"""

import numpy as np

from glvbalance import (
    RealizationProblem,
    check_balance_at,
    find_balanced_state,
    glv_from_graph,
    integrate,
    realize,
    realized_balance,
    structural_report,
)
from glvbalance.catalog import IMMIGRATION_VERTICES, immigration_graph, immigration_system
from glvbalance.simulate import ensemble_initial_states

g = immigration_graph()
rep = structural_report(g)
print("vertices:", rep.num_vertices, " linkage classes:", rep.num_linkage_classes, " deficiency:", rep.deficiency)

# the graph generates the target system term by term
generated = glv_from_graph(g)
for y, c in generated.terms():
    print(f"x^{y}: {c}")
print("gap to the hand-written system:", generated.max_coefficient_gap(immigration_system()))
print("balance residual at (1, 1):", check_balance_at(g, [1, 1]).max_residual)

# going backwards: recover some weights from the system with an LP
res = realize(RealizationProblem(immigration_system(), IMMIGRATION_VERTICES, x_star=[1, 1]))
print("realized edges:", res.graph.num_edges, " match residual:", res.match_residual)
print("balanced at (1, 1):", realized_balance(res).balanced)

# dim S = 2, so (1, 1) attracts the whole positive quadrant
cert = find_balanced_state(g)
for x0 in ensemble_initial_states(2, 5, seed=1):
    tr = integrate(g, x0, 1e3, cert=cert)
    print(np.array2string(x0, precision=3), "->", np.array2string(tr.final, precision=9), f"({len(tr)} steps)")
