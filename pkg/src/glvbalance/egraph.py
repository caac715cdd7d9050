"""Euclidean embedded graphs and their structural invariants.

An E-graph is a directed graph whose vertices are points of R^n. Each edge
``i -> j`` carries a positive weight and contributes the direction
``y_j - y_i`` to the generated vector fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DimensionMismatch,
    DuplicateEdge,
    DuplicateVertex,
    NonPositiveWeight,
    SelfLoop,
    ValidationError,
)

RANK_RTOL = 1e-10
VERTEX_ATOL = 1e-12


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    weight: float


class EGraph:
    """Directed graph with vertices embedded in R^n and positive edge weights.

    Construction validates every invariant and raises a
    :class:`~glvbalance.errors.ValidationError` subclass on failure. Instances
    are immutable; the vertex array is read-only.

    Args:
        vertices: ``(m, n)`` array-like of vertex coordinates.
        edges: iterable of ``(src, dst, weight)`` triples or :class:`Edge`.
        dimension: expected ambient dimension; inferred when omitted.
    """

    __slots__ = ("_vertices", "_edges", "_src", "_dst", "_w")

    def __init__(self, vertices, edges: Iterable, dimension: int | None = None):
        rows = [np.asarray(v, dtype=float).ravel() for v in vertices]
        if not rows:
            raise ValidationError("graph needs at least one vertex")
        n = dimension if dimension is not None else rows[0].size
        if n < 1:
            raise DimensionMismatch("dimension must be a positive integer")
        for k, row in enumerate(rows):
            if row.size != n:
                raise DimensionMismatch(f"vertex {k} has {row.size} coordinates, expected {n}")
        Y = np.array(rows, dtype=float).reshape(len(rows), n)
        if not np.all(np.isfinite(Y)):
            raise ValidationError("vertex coordinates must be finite")

        parsed = []
        for e in edges:
            if isinstance(e, Edge):
                parsed.append(e)
            else:
                i, j, w = e
                parsed.append(Edge(int(i), int(j), float(w)))

        _validate(Y, parsed)

        Y.setflags(write=False)
        self._vertices = Y
        self._edges = tuple(parsed)
        self._src = np.array([e.src for e in parsed], dtype=np.intp)
        self._dst = np.array([e.dst for e in parsed], dtype=np.intp)
        self._w = np.array([e.weight for e in parsed], dtype=float)
        for a in (self._src, self._dst, self._w):
            a.setflags(write=False)

    @property
    def vertices(self) -> np.ndarray:
        """``(m, n)`` read-only array; row ``i`` is ``y_i``."""
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def dimension(self) -> int:
        return self._vertices.shape[1]

    @property
    def num_vertices(self) -> int:
        return self._vertices.shape[0]

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def sources(self) -> np.ndarray:
        return self._src

    @property
    def targets(self) -> np.ndarray:
        return self._dst

    @property
    def weights(self) -> np.ndarray:
        return self._w

    def edge_vectors(self) -> np.ndarray:
        """``(|E|, n)`` array of reaction vectors ``y_dst - y_src``."""
        return self._vertices[self._dst] - self._vertices[self._src]

    def with_weights(self, weights: Sequence[float]) -> "EGraph":
        """Same vertices and edges, new weights (in edge order)."""
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (self.num_edges,):
            raise DimensionMismatch(f"expected {self.num_edges} weights, got shape {weights.shape}")
        return EGraph(
            self._vertices,
            [(e.src, e.dst, w) for e, w in zip(self._edges, weights)],
            self.dimension,
        )

    def scaled(self, factor: float) -> "EGraph":
        return self.with_weights(self._w * factor)

    def permuted(self, perm: Sequence[int]) -> "EGraph":
        """Relabel vertices so that new vertex ``k`` is old vertex ``perm[k]``."""
        perm = np.asarray(perm, dtype=np.intp)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(perm.size)
        return EGraph(
            self._vertices[perm],
            [(inv[e.src], inv[e.dst], e.weight) for e in self._edges],
            self.dimension,
        )

    def weight_of(self, i: int, j: int) -> float:
        """Weight of edge ``i -> j``, or 0.0 when absent."""
        for e in self._edges:
            if e.src == i and e.dst == j:
                return e.weight
        return 0.0

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "vertices": self._vertices.tolist(),
            "edges": [{"src": e.src, "dst": e.dst, "weight": e.weight} for e in self._edges],
        }

    def __eq__(self, other):
        if not isinstance(other, EGraph):
            return NotImplemented
        return np.array_equal(self._vertices, other._vertices) and self._edges == other._edges

    def __hash__(self):
        return hash((self._vertices.tobytes(), self._edges))

    def __repr__(self):
        return f"EGraph(n={self.dimension}, m={self.num_vertices}, |E|={self.num_edges})"


def _validate(Y: np.ndarray, edges: list[Edge]) -> None:
    m = Y.shape[0]
    for a in range(m):
        for b in range(a + 1, m):
            if np.max(np.abs(Y[a] - Y[b])) <= VERTEX_ATOL:
                raise DuplicateVertex(a, b)
    seen = set()
    for e in edges:
        if not (0 <= e.src < m and 0 <= e.dst < m):
            raise DimensionMismatch(f"edge ({e.src}, {e.dst}) references a vertex outside 0..{m - 1}")
        if e.src == e.dst:
            raise SelfLoop(e.src)
        if not (np.isfinite(e.weight) and e.weight > 0):
            raise NonPositiveWeight((e.src, e.dst), e.weight)
        if (e.src, e.dst) in seen:
            raise DuplicateEdge(e.src, e.dst)
        seen.add((e.src, e.dst))


def validate_graph(raw) -> EGraph:
    """Return a validated :class:`EGraph`.

    ``raw`` may be an existing graph (re-checked) or a mapping in the JSON
    file layout: ``{"dimension", "vertices", "edges": [{"src", "dst", "weight"}]}``.
    """
    if isinstance(raw, EGraph):
        _validate(np.asarray(raw.vertices), list(raw.edges))
        return raw
    if isinstance(raw, Mapping):
        edges = []
        for e in raw.get("edges", []):
            if isinstance(e, Mapping):
                edges.append((e["src"], e["dst"], e["weight"]))
            else:
                edges.append(tuple(e))
        return EGraph(raw["vertices"], edges, raw.get("dimension"))
    vertices, edges = raw
    return EGraph(vertices, edges)


def kirchhoff_matrix(g: EGraph) -> np.ndarray:
    """Negative transpose of the weighted Laplacian.

    Entry ``(j, i)`` is the weight of ``i -> j``; the diagonal holds minus the
    total out-weight, so every column sums to zero.
    """
    m = g.num_vertices
    A = np.zeros((m, m))
    np.add.at(A, (g.targets, g.sources), g.weights)
    np.add.at(A, (g.sources, g.sources), -g.weights)
    return A


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal bases (as rows) of a subspace S of R^n and of its complement."""

    dimension: int
    basis_s: np.ndarray
    basis_sperp: np.ndarray

    @property
    def rank(self) -> int:
        return self.basis_s.shape[0]

    def project_s(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return self.basis_s.T @ (self.basis_s @ v)

    def project_sperp(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return self.basis_sperp.T @ (self.basis_sperp @ v)

    def scaled(self, d) -> "SubspaceBasis":
        """Bases for ``diag(d) S`` and its orthogonal complement ``diag(1/d) S^perp``."""
        d = np.asarray(d, dtype=float)
        return _orthonormal_split(self.basis_s * d[None, :], self.dimension, RANK_RTOL)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "rank": self.rank,
            "basis_S": self.basis_s.tolist(),
            "basis_Sperp": self.basis_sperp.tolist(),
        }


def _orthonormal_split(rows: np.ndarray, n: int, rtol: float) -> SubspaceBasis:
    rows = np.asarray(rows, dtype=float).reshape(-1, n)
    if rows.shape[0] == 0:
        return SubspaceBasis(n, np.zeros((0, n)), np.eye(n))
    _, s, vt = np.linalg.svd(rows, full_matrices=True)
    rank = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    return SubspaceBasis(n, vt[:rank].copy(), vt[rank:].copy())


def span_basis(vectors, dimension: int, rtol: float = RANK_RTOL) -> SubspaceBasis:
    """Orthonormal split of R^n into ``span(vectors)`` and its complement."""
    return _orthonormal_split(vectors, dimension, rtol)


def stoichiometric_basis(g: EGraph, rtol: float = RANK_RTOL) -> SubspaceBasis:
    """Orthonormal basis of the span of all edge vectors, and of its complement.

    Singular values below ``rtol`` times the largest are treated as zero.
    """
    return _orthonormal_split(g.edge_vectors(), g.dimension, rtol)


@dataclass(frozen=True)
class StructuralReport:
    num_vertices: int
    num_linkage_classes: int
    dim_s: int
    deficiency: int
    weakly_reversible: bool
    linkage_assignment: tuple[int, ...]
    scc_assignment: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "num_vertices": self.num_vertices,
            "num_linkage_classes": self.num_linkage_classes,
            "dim_S": self.dim_s,
            "deficiency": self.deficiency,
            "weakly_reversible": self.weakly_reversible,
            "linkage_assignment": list(self.linkage_assignment),
            "scc_assignment": list(self.scc_assignment),
        }


def _first_seen_labels(labels) -> tuple[int, ...]:
    # relabel components in order of first appearance so output is deterministic
    mapping: dict[int, int] = {}
    return tuple(mapping.setdefault(int(c), len(mapping)) for c in labels)


def _adjacency(g: EGraph) -> csr_matrix:
    m = g.num_vertices
    return csr_matrix((np.ones(g.num_edges), (g.sources, g.targets)), shape=(m, m))


def linkage_classes(g: EGraph) -> tuple[int, ...]:
    """Connected component label of every vertex in the underlying undirected graph."""
    _, labels = connected_components(_adjacency(g), directed=True, connection="weak")
    return _first_seen_labels(labels)


def strong_components(g: EGraph) -> tuple[int, ...]:
    _, labels = connected_components(_adjacency(g), directed=True, connection="strong")
    return _first_seen_labels(labels)


def is_weakly_reversible(g: EGraph) -> bool:
    scc = strong_components(g)
    return all(scc[e.src] == scc[e.dst] for e in g.edges)


def structural_report(g: EGraph, rtol: float = RANK_RTOL) -> StructuralReport:
    """Deficiency, linkage classes and weak reversibility of ``g``."""
    linkage = linkage_classes(g)
    scc = strong_components(g)
    ell = len(set(linkage))
    dim_s = stoichiometric_basis(g, rtol).rank
    m = g.num_vertices
    delta = m - ell - dim_s
    if delta < 0:
        raise ArithmeticError(f"negative deficiency {delta}; rank tolerance is inconsistent")
    return StructuralReport(
        num_vertices=m,
        num_linkage_classes=ell,
        dim_s=dim_s,
        deficiency=delta,
        weakly_reversible=all(scc[e.src] == scc[e.dst] for e in g.edges),
        linkage_assignment=linkage,
        scc_assignment=scc,
    )
