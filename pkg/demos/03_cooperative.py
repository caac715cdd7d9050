"""
Cooperative Lotka-Volterra systems and the scaling LP
======================================================

dx/dt = diag(x) (r + A x) with A_ii < 0 <= A_ij. A scaling d >= 1 with
d^T A <= 0 makes the scaled system a weakly reversible, deficiency-zero
graph on the vertices 0, e_1, ..., e_n.
"""

import numpy as np

from glvbalance import (
    Infeasible,
    RealizationProblem,
    find_balanced_state,
    find_scaling,
    integrate,
    realize,
    structural_report,
)
from glvbalance.catalog import cooperative_lv_system, cooperative_vertices

r = np.array([1.0, 1.0])
A = np.array([[-2.0, 1.0], [1.0, -2.0]])
d = find_scaling(r, A)
print("d =", d, " column sums of diag(d) A:", d @ A)

system = cooperative_lv_system(r, A)
res = realize(RealizationProblem(system, cooperative_vertices(2), d="search"))
print(structural_report(res.graph).to_dict())
for e in res.graph.edges:
    print(f"  {res.graph.vertices[e.src]} -> {res.graph.vertices[e.dst]}  weight {e.weight:g}")

x_star = np.linalg.solve(A, -r)
cert = find_balanced_state(res.graph)
print("steady state:", x_star, " balanced state of the graph:", cert.x_star)
tr = integrate(system, [0.2, 5.0], 200.0)
print("trajectory from (0.2, 5) ends at", tr.final)

# strong mutualism: no scaling exists, and the LP says why
try:
    find_scaling(r, np.array([[-1.0, 2.0], [2.0, -1.0]]))
except Infeasible as exc:
    print(exc)
    print("Farkas multipliers:", exc.certificate[0])
