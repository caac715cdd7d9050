"""Finding weighted E-graphs that generate a given GLV system.

For a fixed scaling ``d`` the edge weights enter every constraint linearly:
for each candidate source vertex ``y`` the outgoing edges must reproduce
``d * c_y`` (the system's coefficient vector of ``x^y``, scaled species-wise),
and complex balance at a known ``x*`` is one more linear equation per vertex.
The resulting feasibility problem is solved by :mod:`glvbalance.lp`.

The realized graph generates ``diag(d)`` times the input system, so the input
system itself is the graph's field slowed down by ``diag(1/d)``; see
:meth:`RealizationResult.scaled_system`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lp
from .balance import check_balance_at
from .dynamics import EXPONENT_ATOL, GlvSystem, ScaledSystem, eval_glv, glv_from_graph, _positive_state
from .egraph import EGraph
from .errors import DimensionMismatch, Infeasible, MissingVertex, NotASteadyState, ValidationError

EDGE_DROP_TOL = 1e-10
SIGN_ZERO_TOL = 1e-10
STEADY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class RealizationProblem:
    """Inputs of :func:`realize`.

    Attributes:
        system: target GLV system.
        candidate_vertices: ``(m, n)``; must contain every term exponent.
        x_star: positive state at which complex balance is enforced, or ``None``.
        d: fixed positive scaling, ``None`` for all ones, or ``"search"`` to
            compute one for a cooperative quadratic system via :func:`find_scaling`.
        candidate_edges: ordered pairs allowed to carry weight; every ordered
            pair of distinct candidates when ``None``.
    """

    system: GlvSystem
    candidate_vertices: np.ndarray
    x_star: np.ndarray | None = None
    d: object = None
    candidate_edges: tuple | None = None

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.candidate_vertices, dtype=float))
        if V.shape[1] != self.system.dimension:
            raise DimensionMismatch(f"candidate vertices live in R^{V.shape[1]}, system in R^{self.system.dimension}")
        object.__setattr__(self, "candidate_vertices", V)
        for y in self.system.exponents:
            if _vertex_index(V, y) is None:
                raise MissingVertex(y.tolist())
        if self.x_star is not None:
            object.__setattr__(self, "x_star", _positive_state(self.x_star, self.system.dimension))
        if self.d is not None and not (isinstance(self.d, str) and self.d == "search"):
            d = np.asarray(self.d, dtype=float)
            if d.shape != (self.system.dimension,) or np.any(d <= 0):
                raise ValidationError(f"scaling must be a positive {self.system.dimension}-vector or 'search'")
            object.__setattr__(self, "d", d)
        if self.candidate_edges is not None:
            m = V.shape[0]
            pairs = tuple((int(i), int(j)) for i, j in self.candidate_edges)
            for i, j in pairs:
                if i == j or not (0 <= i < m and 0 <= j < m):
                    raise ValidationError(f"candidate edge ({i}, {j}) is invalid")
            object.__setattr__(self, "candidate_edges", pairs)


def _vertex_index(V: np.ndarray, y) -> int | None:
    hits = np.flatnonzero(np.max(np.abs(V - np.asarray(y, dtype=float)), axis=1) <= EXPONENT_ATOL)
    return int(hits[0]) if hits.size else None


@dataclass(frozen=True, eq=False)
class RealizationResult:
    """A graph generating ``diag(d)`` times the target system.

    Attributes:
        graph: realized graph; zero-weight edges and isolated candidates removed.
        d: scaling used.
        balanced_at: ``x*`` when complex balance was enforced.
        match_residual: largest coefficient mismatch between ``glv_from_graph(graph)``
            and ``diag(d)`` times the target.
        raw_weights: LP solution before thresholding, indexed like ``pairs``.
        pairs: candidate ordered pairs (indices into the candidate vertices).
        vertex_map: candidate index of each vertex of ``graph``.
    """

    graph: EGraph
    d: np.ndarray
    balanced_at: np.ndarray | None
    match_residual: float
    raw_weights: np.ndarray = field(repr=False)
    pairs: tuple = field(repr=False)
    vertex_map: tuple = field(repr=False)

    def scaled_system(self) -> ScaledSystem:
        """The target system as a scaled graph field: ``diag(1/d) diag(x) f(x)``."""
        return ScaledSystem(self.graph, 1.0 / self.d)

    def report(self) -> dict:
        return {
            "d": self.d.tolist(),
            "balanced_at": None if self.balanced_at is None else self.balanced_at.tolist(),
            "match_residual": self.match_residual,
            "num_edges": self.graph.num_edges,
            "vertex_map": list(self.vertex_map),
        }


def cooperative_parameters(system: GlvSystem) -> tuple[np.ndarray, np.ndarray]:
    """Split a quadratic LV system into ``(r, A)``; only exponents ``0`` and ``e_i`` allowed."""
    n = system.dimension
    r = np.zeros(n)
    A = np.zeros((n, n))
    eye = np.eye(n)
    for y, c in system.terms():
        if np.all(np.abs(y) <= EXPONENT_ATOL):
            r = c.copy()
            continue
        hit = [j for j in range(n) if np.max(np.abs(y - eye[j])) <= EXPONENT_ATOL]
        if not hit:
            raise ValidationError(f"exponent {y.tolist()} is not 0 or a unit vector; scaling search needs a quadratic LV system")
        A[:, hit[0]] = c
    return r, A


def find_scaling(r, A) -> np.ndarray:
    """Positive ``d >= 1`` with ``sum_i d_i a_ij <= 0`` for every column ``j``.

    Raises:
        ValidationError: ``A`` lacks the cooperative sign pattern.
        Infeasible: no such ``d`` exists.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionMismatch(f"A must be square, got {A.shape}")
    r = np.asarray(r, dtype=float)
    if r.shape != (n,):
        raise DimensionMismatch(f"r must have {n} entries")
    off = A[~np.eye(n, dtype=bool)]
    if np.any(off < 0) or np.any(np.diag(A) >= 0):
        raise ValidationError("need a_ij >= 0 off the diagonal and a_ii < 0")
    # d = 1 + e with e >= 0: sum_i e_i a_ij <= -sum_i a_ij
    res = lp.find_feasible(A.T, -A.sum(axis=0))
    if not res.feasible:
        raise Infeasible("no positive d makes every weighted column sum nonpositive", res.farkas)
    return 1.0 + res.x


def _resolve_scaling(p: RealizationProblem) -> np.ndarray:
    n = p.system.dimension
    if p.d is None:
        return np.ones(n)
    if isinstance(p.d, str):
        r, A = cooperative_parameters(p.system)
        return find_scaling(r, A)
    return p.d


def realize(p: RealizationProblem) -> RealizationResult:
    """Nonnegative edge weights on the candidate graph generating ``diag(d)`` times the system.

    Raises:
        Infeasible: no weights satisfy the constraints (Farkas vector attached).
    """
    V = p.candidate_vertices
    m, n = V.shape
    d = _resolve_scaling(p)
    pairs = p.candidate_edges if p.candidate_edges is not None else tuple(
        (i, j) for i in range(m) for j in range(m) if i != j
    )
    npairs = len(pairs)

    rows, rhs = [], []
    target = np.zeros((m, n))
    for y, c in p.system.terms():
        target[_vertex_index(V, y)] = d * c
    for k in range(m):
        for i in range(n):
            row = np.zeros(npairs)
            for e, (a, b) in enumerate(pairs):
                if a == k:
                    row[e] = V[b, i] - V[k, i]
            rows.append(row)
            rhs.append(target[k, i])
    if p.x_star is not None:
        mono = np.exp(V @ np.log(p.x_star))
        for k in range(m):
            row = np.zeros(npairs)
            for e, (a, b) in enumerate(pairs):
                if a == k:
                    row[e] += mono[a]
                if b == k:
                    row[e] -= mono[a]
            rows.append(row)
            rhs.append(0.0)

    res = lp.find_feasible(A_eq=np.array(rows).reshape(-1, npairs), b_eq=np.array(rhs))
    if not res.feasible:
        raise Infeasible("no nonnegative edge weights generate the system on these candidates", res.farkas)
    kappa = res.x
    if kappa.min() < -EDGE_DROP_TOL:
        raise ArithmeticError(f"LP returned a negative weight {kappa.min():.3e}")

    keep = [e for e in range(npairs) if kappa[e] > EDGE_DROP_TOL]
    used = sorted({pairs[e][0] for e in keep} | {pairs[e][1] for e in keep})
    relabel = {v: k for k, v in enumerate(used)}
    graph = EGraph(V[used], [(relabel[pairs[e][0]], relabel[pairs[e][1]], kappa[e]) for e in keep], n)

    target_sys = p.system.scaled(d)
    match = target_sys.max_coefficient_gap(glv_from_graph(graph))
    return RealizationResult(graph, d, p.x_star, match, kappa, pairs, tuple(used))


# ----- two-species higher-order-interaction model -----


@dataclass(frozen=True)
class HoiParameters:
    """``dx1/dt = x1 (r1 - a11 x1 + a12 x2 - b1 x1 x2)``,
    ``dx2/dt = x2 (r2 + a21 x1 - a22 x2 - b2 x1 x2)``."""

    r1: float
    r2: float
    a11: float
    a12: float
    a21: float
    a22: float
    b1: float
    b2: float

    @classmethod
    def from_system(cls, system: GlvSystem) -> "HoiParameters":
        """Read the parameters off a two-species system supported on the unit square."""
        if system.dimension != 2:
            raise DimensionMismatch("the higher-order model has two species")
        for y in system.exponents:
            if not any(np.max(np.abs(y - v)) <= EXPONENT_ATOL for v in ((0, 0), (1, 0), (0, 1), (1, 1))):
                raise ValidationError(f"exponent {y.tolist()} is not a corner of the unit square")
        c0, c1 = system.coefficient((0, 0)), system.coefficient((1, 0))
        c2, c3 = system.coefficient((0, 1)), system.coefficient((1, 1))
        return cls(c0[0], c0[1], -c1[0], c2[0], c1[1], -c2[1], -c3[0], -c3[1])

    def system(self) -> GlvSystem:
        terms = [
            ((0, 0), (self.r1, self.r2)),
            ((1, 0), (-self.a11, self.a21)),
            ((0, 1), (self.a12, -self.a22)),
            ((1, 1), (-self.b1, -self.b2)),
        ]
        return GlvSystem.from_terms([t for t in terms if any(v != 0 for v in t[1])])

    def steady_states(self) -> list[np.ndarray]:
        """All positive steady states (at most two, for generic parameters).

        Eliminating ``x2`` leaves a quadratic in ``x1``; ``x2`` is recovered from
        the second equation and both equations are re-checked.
        """
        r1, r2, a11, a12, a21, a22, b1, b2 = (
            self.r1, self.r2, self.a11, self.a12, self.a21, self.a22, self.b1, self.b2,
        )
        # (r2 + a21 x)(a12 - b1 x) - (a22 + b2 x)(a11 x - r1) = 0
        quad = -a21 * b1 - b2 * a11
        lin = a21 * a12 - r2 * b1 - a22 * a11 + b2 * r1
        const = r2 * a12 + a22 * r1
        roots = np.roots([quad, lin, const]) if abs(quad) > 0 else np.roots([lin, const])
        out = []
        for x1 in roots:
            if abs(x1.imag) > 1e-12 or x1.real <= 0:
                continue
            x1 = x1.real
            den = self.a22 + self.b2 * x1
            if den <= 0:
                continue
            x = np.array([x1, (self.r2 + self.a21 * x1) / den])
            if x[1] <= 0:
                continue
            if np.max(np.abs(eval_glv(self.system(), x))) <= STEADY_TOL * (1.0 + np.max(x)):
                out.append(x)
        return out


@dataclass(frozen=True)
class HoiWitness:
    holds: bool
    signs: tuple[int, int]
    d: np.ndarray | None


def _sign(z: float) -> int:
    return 0 if abs(z) <= SIGN_ZERO_TOL else (1 if z > 0 else -1)


def hoi_condition(params: HoiParameters, x_star) -> HoiWitness:
    """Sign test ``sign(r1 - a11 x1*) == sign(a22 x2* - r2)`` with a witnessing scaling.

    When the condition holds, ``d`` solves ``d1 (r1 - a11 x1*) = d2 (a22 x2* - r2)``
    (``d = (1, 1)`` when both sides vanish).

    Raises:
        NotASteadyState: ``x_star`` does not zero the vector field to 1e-8.
    """
    x_star = _positive_state(x_star, 2)
    residual = float(np.max(np.abs(eval_glv(params.system(), x_star))))
    if residual > STEADY_TOL:
        raise NotASteadyState(residual)
    s1 = params.r1 - params.a11 * x_star[0]
    s2 = params.a22 * x_star[1] - params.r2
    signs = (_sign(s1), _sign(s2))
    if signs[0] != signs[1]:
        return HoiWitness(False, signs, None)
    if signs[0] == 0:
        return HoiWitness(True, signs, np.ones(2))
    return HoiWitness(True, signs, np.array([s2 / s1, 1.0]))


def square_problem(params: HoiParameters, x_star, d) -> RealizationProblem:
    """Realization on the unit square with its four reversible sides as candidate edges."""
    from .catalog import SQUARE_EDGES, SQUARE_VERTICES

    return RealizationProblem(params.system(), SQUARE_VERTICES, x_star, d, tuple(SQUARE_EDGES))


def default_candidate_vertices(system: GlvSystem) -> np.ndarray:
    """Term exponents, the origin, and ``y + sign(c_i) e_i`` for every nonzero coefficient.

    A heuristic starting set: each nonzero coefficient needs an outgoing edge
    from its exponent with a component of the right sign.
    """
    n = system.dimension
    out = [y for y in system.exponents]
    out.append(np.zeros(n))
    for y, c in system.terms():
        for i in range(n):
            if c[i] != 0:
                out.append(y + np.sign(c[i]) * np.eye(n)[i])
    uniq: list[np.ndarray] = []
    for v in out:
        if _vertex_index(np.array(uniq).reshape(-1, n), v) is None:
            uniq.append(v)
    return np.array(uniq)


def check_realization(result: RealizationResult, system: GlvSystem, points) -> float:
    """Worst relative mismatch between the realized scaled field and ``system`` at ``points``."""
    from .dynamics import glv_rhs

    sys = result.scaled_system()
    worst = 0.0
    for x in np.atleast_2d(points):
        a = glv_rhs(sys, x)
        b = eval_glv(system, x)
        worst = max(worst, float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b)))))
    return worst


def realized_balance(result: RealizationResult):
    """Balance residual of the realized graph at ``balanced_at`` (``None`` if not enforced)."""
    if result.balanced_at is None:
        return None
    return check_balance_at(result.graph, result.balanced_at)
