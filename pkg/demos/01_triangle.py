"""
Triangle graph: deficiency, complex balance and a trajectory
=============================================================

Three species, each vertex a unit vector, every pair linked both ways.
"""

import numpy as np

from glvbalance import find_balanced_state, integrate, stoichiometric_basis, structural_report
from glvbalance.catalog import triangle_graph

g = triangle_graph()
print(structural_report(g).to_dict())

# deficiency zero and weakly reversible, so a balanced state must exist
cert = find_balanced_state(g)
print("x* =", cert.x_star, " residual =", cert.max_residual)

# balanced states form a line through x*; log x1 + log x2 + log x3 is conserved
print("S-perp basis:", stoichiometric_basis(g).basis_sperp)

tr = integrate(g, [2.0, 1.0, 0.5], 50.0, cert=cert)
print("steps:", len(tr) - 1, " stopped at t =", tr.times[-1])
print("final state:", tr.final)
print("conservation residual:", tr.max_conservation_residual())
print("Lyapunov values (first, last):", tr.lyapunov[0], tr.lyapunov[-1])

# a coarse uniform grid (cubic Hermite between accepted steps) for plotting
grid = tr.sample(np.linspace(0.0, tr.times[-1], 6))
for t, x in zip(grid.times, grid.states):
    print(f"{t:8.3f}  {np.array2string(x, precision=6)}")
