"""Complex balance: detection, steady-state construction and non-existence certificates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import _guarded_exp, _positive_state
from .egraph import (
    RANK_RTOL,
    EGraph,
    SubspaceBasis,
    kirchhoff_matrix,
    linkage_classes,
    is_weakly_reversible,
)
from .errors import DegenerateIntersection, DimensionMismatch
from . import lp

BALANCE_TOL = 1e-8
KERNEL_POS_TOL = 1e-12
INTERSECT_COND_MAX = 1e12


@dataclass(frozen=True)
class BalanceResidual:
    """Per-vertex outflow, inflow and relative imbalance at a state."""

    outflow: np.ndarray
    inflow: np.ndarray
    residuals: np.ndarray
    tol: float = BALANCE_TOL

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max()) if self.residuals.size else 0.0

    @property
    def balanced(self) -> bool:
        return self.max_residual <= self.tol

    def to_dict(self) -> dict:
        return {
            "outflow": self.outflow.tolist(),
            "inflow": self.inflow.tolist(),
            "residuals": self.residuals.tolist(),
            "max_residual": self.max_residual,
            "balanced": self.balanced,
        }


def _vertex_flows(g: EGraph, log_x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rates = g.weights * _guarded_exp(g.vertices[g.sources] @ log_x)
    outflow = np.bincount(g.sources, weights=rates, minlength=g.num_vertices)
    inflow = np.bincount(g.targets, weights=rates, minlength=g.num_vertices)
    return outflow, inflow


def check_balance_at(g: EGraph, x, tol: float = BALANCE_TOL) -> BalanceResidual:
    """Relative inflow/outflow mismatch at every vertex for the state ``x > 0``."""
    x = _positive_state(x, g.dimension)
    outflow, inflow = _vertex_flows(g, np.log(x))
    denom = np.maximum(np.maximum(outflow, inflow), np.finfo(float).tiny)
    return BalanceResidual(outflow, inflow, np.abs(outflow - inflow) / denom, tol)


def _null_vector(block: np.ndarray) -> np.ndarray | None:
    if block.shape[0] == 1:
        return np.ones(1)
    _, s, vt = np.linalg.svd(block)
    rank = int(np.sum(s > RANK_RTOL * s[0])) if s[0] > 0 else 0
    if block.shape[1] - rank != 1:
        return None
    v = vt[-1]
    return v * np.sign(v[np.argmax(np.abs(v))])


def positive_kernel(g: EGraph) -> np.ndarray | None:
    """Strictly positive ``c`` with ``A_k c = 0``, or ``None`` if ``g`` is not weakly reversible.

    Each linkage class contributes one positive null vector of its Kirchhoff
    block, normalized so that the class's first vertex gets 1.
    """
    if not is_weakly_reversible(g):
        return None
    A = kirchhoff_matrix(g)
    labels = np.array(linkage_classes(g))
    c = np.zeros(g.num_vertices)
    for cls in range(labels.max() + 1):
        idx = np.flatnonzero(labels == cls)
        v = _null_vector(A[np.ix_(idx, idx)])
        if v is None:
            return None
        v = v / v[0]
        if np.any(v <= KERNEL_POS_TOL):
            return None
        c[idx] = v
    return c


@dataclass(frozen=True)
class BalanceCertificate:
    """A complex balanced steady state and the data proving it."""

    xi_star: np.ndarray
    x_star: np.ndarray
    kernel_vector: np.ndarray
    per_class_scalars: np.ndarray
    max_residual: float
    fit_residual: float

    def to_dict(self) -> dict:
        return {
            "type": "complex_balanced",
            "xi_star": self.xi_star.tolist(),
            "x_star": self.x_star.tolist(),
            "kernel_vector": self.kernel_vector.tolist(),
            "per_class_scalars": self.per_class_scalars.tolist(),
            "max_residual": self.max_residual,
            "fit_residual": self.fit_residual,
        }


def _class_indicator(g: EGraph) -> np.ndarray:
    labels = np.array(linkage_classes(g))
    return (labels[:, None] == np.arange(labels.max() + 1)[None, :]).astype(float)


def balance_fit(g: EGraph) -> tuple[np.ndarray, np.ndarray, float, np.ndarray] | None:
    """Least-squares fit of ``Y^T xi + L mu = log c``.

    Returns ``(xi, mu, residual, c)`` where ``residual`` is the max-norm of the
    fit in log space, or ``None`` when no positive kernel vector exists.
    """
    c = positive_kernel(g)
    if c is None:
        return None
    L = _class_indicator(g)
    M = np.hstack([g.vertices, L])
    rhs = np.log(c)
    sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    n = g.dimension
    residual = float(np.max(np.abs(M @ sol - rhs)))
    return sol[:n], sol[n:], residual, c


def find_balanced_state(g: EGraph, tol: float = BALANCE_TOL) -> BalanceCertificate | None:
    """A complex balanced steady state of ``g`` in log coordinates, if one exists."""
    fit = balance_fit(g)
    if fit is None:
        return None
    xi, mu, residual, c = fit
    if residual > tol:
        return None
    x = np.exp(xi)
    check = check_balance_at(g, x, tol)
    if not check.balanced:
        return None
    return BalanceCertificate(xi, x, c, mu, check.max_residual, residual)


@dataclass(frozen=True)
class SteadyStateSet:
    """The affine set ``xi* + S^perp`` of positive steady states, in log coordinates."""

    xi_star: np.ndarray
    basis_sperp: np.ndarray

    @property
    def dimension(self) -> int:
        return self.basis_sperp.shape[0]

    def point(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (self.dimension,):
            raise DimensionMismatch(f"expected {self.dimension} coordinates, got shape {coords.shape}")
        return self.xi_star + coords @ self.basis_sperp

    def distance(self, zeta) -> float:
        """Euclidean distance from ``zeta`` to the affine set."""
        v = np.asarray(zeta, dtype=float) - self.xi_star
        return float(np.linalg.norm(v - self.basis_sperp.T @ (self.basis_sperp @ v)))


def steady_state_set(cert: BalanceCertificate, basis: SubspaceBasis) -> SteadyStateSet:
    return SteadyStateSet(cert.xi_star.copy(), basis.basis_sperp.copy())


def state_in_class(cert: BalanceCertificate, basis: SubspaceBasis, d, xi0) -> np.ndarray:
    """The unique point of ``(xi* + S^perp) ∩ (xi0 + D S)``.

    Raises:
        DegenerateIntersection: the combined direction matrix is numerically singular.
    """
    n = basis.dimension
    d = np.ones(n) if d is None else np.asarray(d, dtype=float)
    xi0 = np.asarray(xi0, dtype=float)
    P = basis.basis_sperp.T
    Q = (basis.basis_s * d[None, :]).T
    K = np.hstack([P, -Q])
    if K.shape != (n, n):
        raise DegenerateIntersection(f"direction matrix has shape {K.shape}")
    if np.linalg.cond(K) > INTERSECT_COND_MAX:
        raise DegenerateIntersection("steady-state set and compatibility class are not transversal")
    coef = np.linalg.solve(K, xi0 - cert.xi_star)
    return cert.xi_star + P @ coef[: P.shape[1]]


@dataclass(frozen=True)
class StiemkeCertificate:
    """``p`` with ``<p, y_j - y_i> >= 0`` on every edge and ``> 0`` on ``strict_edge``.

    ``V(xi) = -<p, xi>`` then strictly decreases along polyexponential flows,
    ruling out steady states and periodic orbits.
    """

    p: np.ndarray
    slack: np.ndarray
    strict_edge: int

    def to_dict(self) -> dict:
        return {
            "type": "stiemke",
            "p": self.p.tolist(),
            "slack": self.slack.tolist(),
            "strict_edge": self.strict_edge,
        }


def stiemke_vector(g: EGraph) -> StiemkeCertificate | None:
    """Solve ``<p, y_j - y_i> >= 0`` for all edges with ``sum of slacks >= 1``.

    The returned certificate is checked by direct slack evaluation.
    """
    if g.num_edges == 0:
        return None
    dirs = g.edge_vectors()
    n = g.dimension
    A_ub = np.vstack([-dirs, -dirs.sum(axis=0, keepdims=True)])
    b_ub = np.concatenate([np.zeros(g.num_edges), [-1.0]])
    res = lp.find_feasible(A_ub, b_ub, free=range(n))
    if not res.feasible:
        return None
    p = res.x
    slack = dirs @ p
    k = int(np.argmax(slack))
    if slack.min() < -1e-10 or slack[k] < 1e-8:
        return None
    return StiemkeCertificate(p, slack, k)


def stiemke_infeasibility(g: EGraph) -> float:
    """Phase-one value of the Stiemke LP; zero iff a certificate exists."""
    if g.num_edges == 0:
        return float("inf")
    dirs = g.edge_vectors()
    A_ub = np.vstack([-dirs, -dirs.sum(axis=0, keepdims=True)])
    b_ub = np.concatenate([np.zeros(g.num_edges), [-1.0]])
    return lp.find_feasible(A_ub, b_ub, free=range(g.dimension)).infeasibility
