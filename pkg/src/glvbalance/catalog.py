"""Ready-made graphs and systems used in the demos and tests."""

from __future__ import annotations

import numpy as np

from .dynamics import GlvSystem
from .egraph import EGraph


def triangle_graph(weights=None) -> EGraph:
    """Reversible triangle on ``e1, e2, e3`` in R^3.

    ``weights`` maps ``(i, j)`` (0-based) to a weight; missing edges get 1.
    """
    weights = weights or {}
    pairs = [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)]
    return EGraph(np.eye(3), [(i, j, weights.get((i, j), 1.0)) for i, j in pairs])


def directed_cycle(weights=(1.0, 1.0, 1.0)) -> EGraph:
    """``e1 -> e2 -> e3 -> e1``."""
    k12, k23, k31 = weights
    return EGraph(np.eye(3), [(0, 1, k12), (1, 2, k23), (2, 0, k31)])


def single_edge(weight: float = 1.0) -> EGraph:
    """``0 -> e1`` in R^1."""
    return EGraph([[0.0], [1.0]], [(0, 1, weight)])


def cooperative_vertices(n: int) -> np.ndarray:
    """``0, e_1, ..., e_n`` stacked as rows."""
    return np.vstack([np.zeros(n), np.eye(n)])


def cooperative_graph(n: int, weight: float = 1.0) -> EGraph:
    """Complete reversible graph on ``{0, e_1, ..., e_n}``."""
    V = cooperative_vertices(n)
    edges = [(i, j, weight) for i in range(n + 1) for j in range(n + 1) if i != j]
    return EGraph(V, edges)


SQUARE_VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
# 1<->2, 2<->3, 3<->4, 4<->1 in 0-based labels
SQUARE_EDGES = [(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2), (3, 0), (0, 3)]


def square_graph(weight: float = 1.0) -> EGraph:
    return EGraph(SQUARE_VERTICES, [(i, j, weight) for i, j in SQUARE_EDGES])


# vertex k (0-based) is the vertex the weights below call k + 1
IMMIGRATION_VERTICES = np.array(
    [
        [0.0, 0.0],
        [1.0, 0.0],
        [1.0, 1.0],
        [0.0, 1.0],
        [-2.0, 0.0],
        [0.0, -1.0],
        [2.0, 0.0],
        [0.0, 1.5],
    ]
)

IMMIGRATION_WEIGHTS = {
    (1, 2): 3.0,
    (2, 1): 7.0,
    (1, 4): 11.0,
    (4, 1): 7.0,
    (2, 3): 2.0,
    (3, 2): 6.0,
    (4, 3): 4.0,
    (3, 4): 0.0,
    (1, 5): 5.0,
    (5, 1): 5.0,
    (1, 6): 6.0,
    (6, 1): 6.0,
    (2, 7): 1.0,
    (7, 2): 1.0,
    (4, 8): 6.0,
    (8, 4): 6.0,
}


def immigration_graph() -> EGraph:
    """Eight-vertex graph generating :func:`immigration_system`; zero-weight edges dropped."""
    edges = [(i - 1, j - 1, w) for (i, j), w in IMMIGRATION_WEIGHTS.items() if w > 0]
    return EGraph(IMMIGRATION_VERTICES, edges)


def intro_system(I1, r1, a11, a12, b11, I2, r2, a21, a22, b21, b22) -> GlvSystem:
    """Two-species cooperative system with immigration and higher-order terms.

    dx1/dt = x1 (I1 x1^-2 + r1 - a11 x1 + a12 x2 - b11 x1^2)
    dx2/dt = x2 (I2 x2^-1 + r2 + a21 x1 - a22 x2 - b21 x1 x2 - b22 x2^(3/2))
    """
    return GlvSystem.from_terms(
        [
            ((-2, 0), (I1, 0)),
            ((0, -1), (0, I2)),
            ((0, 0), (r1, r2)),
            ((1, 0), (-a11, a21)),
            ((0, 1), (a12, -a22)),
            ((1, 1), (0, -b21)),
            ((2, 0), (-b11, 0)),
            ((0, 1.5), (0, -b22)),
        ]
    )


def immigration_system() -> GlvSystem:
    """The instance with steady state (1, 1).

    The x2 coefficient of the second equation is -4: that is what the graph
    weights generate (-k41 + k48/2) and what makes (1, 1) a steady state.
    """
    return intro_system(I1=10, r1=-7, a11=6, a12=4, b11=1, I2=6, r2=5, a21=2, a22=4, b21=6, b22=3)


def cooperative_lv_system(r, A) -> GlvSystem:
    """``dx/dt = diag(x) (r + A x)`` as a term list."""
    r = np.asarray(r, dtype=float)
    A = np.asarray(A, dtype=float)
    n = r.size
    terms = []
    if np.any(r != 0):
        terms.append((np.zeros(n), r))
    for j in range(n):
        if np.any(A[:, j] != 0):
            terms.append((np.eye(n)[j], A[:, j]))
    return GlvSystem.from_terms(terms)
