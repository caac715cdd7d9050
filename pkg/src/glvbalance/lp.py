"""Dense two-phase simplex for the small feasibility problems in this package.

Problems are stated as::

    minimize    c @ x
    subject to  A_ub @ x <= b_ub
                A_eq @ x == b_eq
                x[j] >= 0   unless j is listed in ``free``

Pivoting follows Bland's rule, so the sequence of bases (and hence the
returned vertex) is deterministic and cycling cannot occur.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-11
FEAS_TOL = 1e-9


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`solve`.

    Attributes:
        status: ``"optimal"``, ``"infeasible"`` or ``"unbounded"``.
        x: a solution in the caller's variables (``None`` unless optimal).
        objective: ``c @ x`` at the solution.
        infeasibility: optimal phase-one value (sum of artificial variables).
        farkas: when infeasible, ``(y_ub, y_eq)`` with ``y_ub >= 0``,
            ``A_ub.T y_ub + A_eq.T y_eq`` >= 0 on sign-constrained and == 0 on
            free variables, and ``b_ub @ y_ub + b_eq @ y_eq < 0``.
    """

    status: str
    x: np.ndarray | None
    objective: float
    infeasibility: float
    farkas: tuple[np.ndarray, np.ndarray] | None = None
    iterations: int = 0

    @property
    def feasible(self) -> bool:
        return self.status in ("optimal", "unbounded")


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    col_vals = T[:, col].copy()
    col_vals[row] = 0.0
    T -= np.outer(col_vals, T[row])
    T[:, col] = 0.0
    T[row, col] = 1.0


def _run(T: np.ndarray, basis: list[int], allowed: np.ndarray, max_iter: int) -> tuple[str, int]:
    """Minimize the objective held in the last row of ``T`` (reduced costs)."""
    it = 0
    while it < max_iter:
        z = T[-1, :-1]
        candidates = np.flatnonzero((z < -PIVOT_TOL) & allowed)
        if candidates.size == 0:
            return "optimal", it
        col = int(candidates[0])
        column = T[:-1, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return "unbounded", it
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        # Bland: among tied rows leave the basic variable with the smallest index
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(T, row, col)
        basis[row] = col
        it += 1
    raise RuntimeError("simplex iteration limit reached")


def solve(c=None, A_ub=None, b_ub=None, A_eq=None, b_eq=None, free=(), max_iter: int = 50_000) -> LPResult:
    """Solve a small dense LP by the two-phase simplex method."""
    A_ub = np.zeros((0, 0)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=float))
    A_eq = np.zeros((0, 0)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    nvar = max(A_ub.shape[1] if A_ub.size else 0, A_eq.shape[1] if A_eq.size else 0)
    if c is not None:
        nvar = max(nvar, len(c))
    A_ub = A_ub.reshape(-1, nvar) if A_ub.size else np.zeros((0, nvar))
    A_eq = A_eq.reshape(-1, nvar) if A_eq.size else np.zeros((0, nvar))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    c = np.zeros(nvar) if c is None else np.asarray(c, dtype=float).ravel()
    if b_ub.size != A_ub.shape[0] or b_eq.size != A_eq.shape[0]:
        raise ValueError("constraint matrix and right-hand side sizes differ")

    free = sorted(set(int(j) for j in free))
    # x = x_plus - x_minus for free variables; minus parts appended at the end
    n_split = nvar + len(free)
    p_ub, p_eq = A_ub.shape[0], A_eq.shape[0]
    rows = p_ub + p_eq
    n_slack = p_ub
    n_cols = n_split + n_slack + rows  # structural, slacks, artificials

    M = np.zeros((rows, n_split + n_slack))
    M[:p_ub, :nvar] = A_ub
    M[p_ub:, :nvar] = A_eq
    for k, j in enumerate(free):
        M[:, nvar + k] = -M[:, j]
    M[np.arange(p_ub), n_split + np.arange(p_ub)] = 1.0
    b = np.concatenate([b_ub, b_eq])
    sign = np.where(b < 0, -1.0, 1.0)
    M *= sign[:, None]
    b = b * sign

    T = np.zeros((rows + 1, n_cols + 1))
    T[:rows, : n_split + n_slack] = M
    T[:rows, n_split + n_slack : n_cols] = np.eye(rows)
    T[:rows, -1] = b
    # a <= row with nonnegative right-hand side starts on its own slack;
    # every other row starts on its artificial
    basis = [n_split + r if (r < p_ub and sign[r] > 0) else n_split + n_slack + r for r in range(rows)]
    art_rows = [r for r in range(rows) if basis[r] >= n_split + n_slack]
    # phase-one objective: sum of artificials, expressed in reduced-cost form
    T[-1, :] = 0.0
    T[-1, n_split + n_slack : n_cols] = 1.0
    T[-1] -= T[art_rows].sum(axis=0)

    allowed = np.ones(n_cols, dtype=bool)
    allowed[n_split + n_slack :] = False
    status, it1 = _run(T, basis, allowed, max_iter)
    phase1 = -T[-1, -1]
    scale = 1.0 + (np.max(np.abs(b)) if b.size else 0.0)
    if phase1 > FEAS_TOL * scale:
        # duals of the phase-one optimum: reduced cost of artificial k is 1 - y_k
        y = 1.0 - T[-1, n_split + n_slack : n_cols]
        y = y * sign  # undo the row sign flips
        # phase one says A^T y <= 0 (componentwise on x >= 0) and b @ y > 0;
        # negate to the conventional Farkas orientation
        return LPResult("infeasible", None, np.nan, float(phase1), (-y[:p_ub], -y[p_ub:]), it1)

    # drive remaining artificials out of the basis, or drop redundant rows
    art0 = n_split + n_slack
    for r in range(rows):
        if basis[r] >= art0:
            nz = np.flatnonzero(np.abs(T[r, :art0]) > PIVOT_TOL)
            if nz.size:
                _pivot(T, r, int(nz[0]))
                basis[r] = int(nz[0])
    keep = [r for r in range(rows) if basis[r] < art0]
    T = np.vstack([T[keep], T[-1:]])
    basis = [basis[r] for r in keep]

    cost = np.zeros(n_cols)
    cost[:nvar] = c
    for k, j in enumerate(free):
        cost[nvar + k] = -c[j]
    T[-1, :] = 0.0
    T[-1, :n_cols] = cost
    for r, bc in enumerate(basis):
        T[-1] -= cost[bc] * T[r]
    allowed = np.zeros(n_cols, dtype=bool)
    allowed[:art0] = True
    status, it2 = _run(T, basis, allowed, max_iter)

    z = np.zeros(n_cols)
    for r, bc in enumerate(basis):
        z[bc] = T[r, -1]
    x = z[:nvar].copy()
    for k, j in enumerate(free):
        x[j] -= z[nvar + k]
    return LPResult(status, x, float(c @ x), float(phase1), None, it1 + it2)


def find_feasible(A_ub=None, b_ub=None, A_eq=None, b_eq=None, free=()) -> LPResult:
    """Any feasible point (zero objective)."""
    return solve(None, A_ub, b_ub, A_eq, b_eq, free)
