"""Vector fields generated by weighted E-graphs.

Three equivalent views of the same dynamics are provided:

* ``f(x) = sum_{i->j} k_ij x^{y_i} (y_j - y_i)``, the per-capita growth rates;
* the GLV field ``dx/dt = D diag(x) f(x)``;
* the polyexponential field ``dxi/dt = D phi(xi)`` with ``phi(xi) = f(exp(xi))``,
  obtained from the GLV field by ``xi = log x``.

Monomials with arbitrary real exponents are evaluated as ``exp(<y, log x>)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .egraph import EGraph, kirchhoff_matrix
from .errors import DimensionMismatch, NonPositiveState, Overflow, ValidationError

EXP_LIMIT = 700.0
MERGE_ATOL = 1e-14
EXPONENT_ATOL = 1e-12


def _positive_state(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionMismatch(f"state has shape {x.shape}, expected ({n},)")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise NonPositiveState(x.tolist())
    return x


def _guarded_exp(arg: np.ndarray) -> np.ndarray:
    if arg.size and np.max(arg) > EXP_LIMIT:
        raise Overflow(float(np.max(arg)), EXP_LIMIT)
    return np.exp(arg)


def monomials(vertices: np.ndarray, log_x: np.ndarray) -> np.ndarray:
    """``exp(<y_k, log_x>)`` for every row ``y_k`` of ``vertices``."""
    return _guarded_exp(vertices @ log_x)


def _edge_sum(g: EGraph, log_x: np.ndarray) -> np.ndarray:
    Y = g.vertices
    src = g.sources
    rates = g.weights * _guarded_exp(Y[src] @ log_x)
    return rates @ g.edge_vectors()


def mass_action_rhs(g: EGraph, x) -> np.ndarray:
    """Per-capita rates ``f(x) = sum k_ij x^{y_i} (y_j - y_i)``, summed edge by edge."""
    x = _positive_state(x, g.dimension)
    if g.num_edges == 0:
        return np.zeros(g.dimension)
    return _edge_sum(g, np.log(x))


def matrix_form_rhs(g: EGraph, x) -> np.ndarray:
    """Same quantity as :func:`mass_action_rhs` computed as ``Y A x^Y``."""
    x = _positive_state(x, g.dimension)
    Y = g.vertices
    # only source vertices have nonzero Kirchhoff columns; skip the others so
    # huge monomials at pure targets cannot produce inf * 0
    A = kirchhoff_matrix(g)
    used = np.unique(g.sources)
    xY = monomials(Y[used], np.log(x))
    return Y.T @ (A[:, used] @ xY)


@dataclass(frozen=True, eq=False)
class ScaledSystem:
    """A weighted E-graph with a positive diagonal time scaling ``D = diag(d)``."""

    graph: EGraph
    d: np.ndarray = field(default=None)

    def __post_init__(self):
        n = self.graph.dimension
        d = np.ones(n) if self.d is None else np.asarray(self.d, dtype=float).copy()
        if d.shape != (n,):
            raise DimensionMismatch(f"scaling has shape {d.shape}, expected ({n},)")
        if not np.all(np.isfinite(d)) or np.any(d <= 0):
            raise ValidationError(f"scaling entries must be positive, got {d.tolist()}")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def dimension(self) -> int:
        return self.graph.dimension


def _as_scaled(sys) -> ScaledSystem:
    return sys if isinstance(sys, ScaledSystem) else ScaledSystem(sys)


def glv_rhs(sys: ScaledSystem, x) -> np.ndarray:
    """``D diag(x) f(x)``."""
    sys = _as_scaled(sys)
    x = _positive_state(x, sys.dimension)
    return sys.d * x * mass_action_rhs(sys.graph, x)


def polyexp_rhs(sys: ScaledSystem, xi) -> np.ndarray:
    """``D phi(xi)`` with ``phi(xi) = sum k_ij e^{<xi, y_i>} (y_j - y_i)``.

    Raises:
        Overflow: some ``<xi, y_i>`` at a source vertex exceeds 700.
    """
    sys = _as_scaled(sys)
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (sys.dimension,):
        raise DimensionMismatch(f"log-state has shape {xi.shape}, expected ({sys.dimension},)")
    if sys.graph.num_edges == 0:
        return np.zeros(sys.dimension)
    return sys.d * _edge_sum(sys.graph, xi)


@dataclass(frozen=True, eq=False)
class GlvSystem:
    """``dx_i/dt = x_i * sum_t coeffs[t, i] * x^exponents[t]``.

    Attributes:
        exponents: ``(T, n)`` array, pairwise distinct rows.
        coeffs: ``(T, n)`` array, no all-zero row.
    """

    exponents: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        E = np.atleast_2d(np.asarray(self.exponents, dtype=float))
        C = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if E.size == 0 or E.shape[0] == 0:
            raise ValidationError("a GLV system needs at least one term")
        if E.shape != C.shape:
            raise DimensionMismatch(f"exponents {E.shape} and coefficients {C.shape} differ in shape")
        if not (np.all(np.isfinite(E)) and np.all(np.isfinite(C))):
            raise ValidationError("exponents and coefficients must be finite")
        for a in range(E.shape[0]):
            if not np.any(C[a] != 0):
                raise ValidationError(f"term {a} has an all-zero coefficient vector")
            for b in range(a + 1, E.shape[0]):
                if np.max(np.abs(E[a] - E[b])) <= EXPONENT_ATOL:
                    raise ValidationError(f"terms {a} and {b} share the exponent {E[a].tolist()}")
        E.setflags(write=False)
        C.setflags(write=False)
        object.__setattr__(self, "exponents", E)
        object.__setattr__(self, "coeffs", C)

    @classmethod
    def from_terms(cls, terms) -> "GlvSystem":
        """Build from an iterable of ``(exponent, coeffs)`` pairs."""
        terms = list(terms)
        if not terms:
            raise ValidationError("a GLV system needs at least one term")
        return cls(np.array([t[0] for t in terms], dtype=float), np.array([t[1] for t in terms], dtype=float))

    @property
    def dimension(self) -> int:
        return self.exponents.shape[1]

    @property
    def num_terms(self) -> int:
        return self.exponents.shape[0]

    def terms(self):
        return list(zip(self.exponents, self.coeffs))

    def index_of(self, exponent, atol: float = EXPONENT_ATOL) -> int | None:
        exponent = np.asarray(exponent, dtype=float)
        hits = np.flatnonzero(np.max(np.abs(self.exponents - exponent), axis=1) <= atol)
        return int(hits[0]) if hits.size else None

    def coefficient(self, exponent) -> np.ndarray:
        """Coefficient vector of ``x^exponent`` (zeros when the term is absent)."""
        k = self.index_of(exponent)
        return np.zeros(self.dimension) if k is None else self.coeffs[k].copy()

    def scaled(self, d) -> "GlvSystem":
        """The system ``diag(d) * (this system)``."""
        return GlvSystem(self.exponents, self.coeffs * np.asarray(d, dtype=float)[None, :])

    def max_coefficient_gap(self, other: "GlvSystem") -> float:
        """Largest absolute coefficient difference over the union of both exponent sets."""
        gap = 0.0
        for E in (self.exponents, other.exponents):
            for y in E:
                gap = max(gap, float(np.max(np.abs(self.coefficient(y) - other.coefficient(y)))))
        return gap

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "terms": [{"exponent": e.tolist(), "coeffs": c.tolist()} for e, c in zip(self.exponents, self.coeffs)],
        }


def glv_from_graph(g: EGraph, atol: float = MERGE_ATOL) -> GlvSystem:
    """Expand the field generated by ``g`` into one term per source vertex.

    Terms whose merged coefficient vector is entirely below ``atol`` in
    magnitude are dropped.
    """
    n = g.dimension
    C = np.zeros((g.num_vertices, n))
    np.add.at(C, g.sources, g.weights[:, None] * g.edge_vectors())
    keep = [int(i) for i in np.unique(g.sources) if np.max(np.abs(C[i])) >= atol]
    if not keep:
        raise ValidationError("every term of the generated system cancels; the vector field is zero")
    return GlvSystem(g.vertices[keep], C[keep])


def eval_glv(sys: GlvSystem, x) -> np.ndarray:
    """``x_i * sum_t coeffs[t, i] * x^exponent_t``."""
    x = _positive_state(x, sys.dimension)
    return x * (monomials(sys.exponents, np.log(x)) @ sys.coeffs)


def eval_glv_log(sys: GlvSystem, xi) -> np.ndarray:
    """The system in log coordinates: ``dxi/dt = sum_t coeffs_t e^{<exponent_t, xi>}``."""
    xi = np.asarray(xi, dtype=float)
    return monomials(sys.exponents, xi) @ sys.coeffs
