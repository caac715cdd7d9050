"""
Higher-order interactions on the unit square
=============================================

dx1/dt = x1 (r1 - a11 x1 + a12 x2 - b1 x1 x2)
dx2/dt = x2 (r2 + a21 x1 - a22 x2 - b2 x1 x2)

On the square graph every edge weight is fixed by one coefficient, so
complex balance at x* is a sign condition on a 2x2 system for d.
"""

import numpy as np

from glvbalance import HoiParameters, hoi_condition, integrate, realize, realized_balance, square_problem

rng = np.random.default_rng(3)
for _ in range(8):
    p = HoiParameters(*np.round(rng.uniform(0.2, 3.0, 8), 2))
    states = p.steady_states()
    if not states:
        print(p, "-> no positive steady state")
        continue
    x_star = states[0]
    w = hoi_condition(p, x_star)
    line = f"x* = {np.array2string(x_star, precision=4)}  condition holds: {w.holds}"
    if w.holds:
        res = realize(square_problem(p, x_star, w.d))
        line += f"  d = {np.array2string(w.d, precision=3)}  balanced: {realized_balance(res).balanced}"
        tr = integrate(p.system(), [3.0, 0.3], 1e3)
        line += f"  trajectory ends {np.array2string(tr.final, precision=6)}"
    print(line)
