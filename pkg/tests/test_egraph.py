import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import brute_force_components, egraphs
from glvbalance import (
    DimensionMismatch,
    DuplicateEdge,
    DuplicateVertex,
    EGraph,
    NonPositiveWeight,
    SelfLoop,
    is_weakly_reversible,
    kirchhoff_matrix,
    linkage_classes,
    stoichiometric_basis,
    strong_components,
    structural_report,
    validate_graph,
)
from glvbalance.catalog import (
    cooperative_graph,
    directed_cycle,
    immigration_graph,
    single_edge,
    square_graph,
    triangle_graph,
)


def test_triangle_accepted():
    g = triangle_graph()
    assert g.num_vertices == 3 and g.num_edges == 6
    assert validate_graph(g) is g


@pytest.mark.parametrize(
    "vertices, edges, exc",
    [
        ([[0.0], [1.0]], [(1, 1, 1.0)], SelfLoop),
        ([[0.0], [1.0]], [(0, 1, 0.0)], NonPositiveWeight),
        ([[0.0], [1.0]], [(0, 1, -2.0)], NonPositiveWeight),
        ([[0.0], [1.0]], [(0, 1, 1.0), (0, 1, 2.0)], DuplicateEdge),
        ([[0.0], [0.0]], [(0, 1, 1.0)], DuplicateVertex),
        ([[0.0], [1.0]], [(0, 2, 1.0)], DimensionMismatch),
    ],
)
def test_invalid_graphs_rejected(vertices, edges, exc):
    with pytest.raises(exc):
        EGraph(vertices, edges)


def test_self_loop_names_vertex():
    with pytest.raises(SelfLoop, match="SelfLoop"):
        validate_graph({"vertices": [[0.0], [1.0]], "edges": [{"src": 1, "dst": 1, "weight": 1.0}]})


def test_dimension_field_must_match():
    with pytest.raises(DimensionMismatch):
        EGraph([[0.0, 1.0]], [], dimension=3)


def test_near_duplicate_vertices_are_distinct_above_tolerance():
    EGraph([[0.0], [1e-9]], [(0, 1, 1.0)])
    with pytest.raises(DuplicateVertex):
        EGraph([[0.0], [1e-13]], [(0, 1, 1.0)])


def test_kirchhoff_triangle():
    np.testing.assert_array_equal(kirchhoff_matrix(triangle_graph()), [[-2, 1, 1], [1, -2, 1], [1, 1, -2]])


def test_kirchhoff_single_edge():
    g = EGraph([[0.0], [1.0]], [(0, 1, 3.0)])
    np.testing.assert_array_equal(kirchhoff_matrix(g), [[-3, 0], [3, 0]])


def test_basis_triangle():
    b = stoichiometric_basis(triangle_graph())
    assert b.rank == 2
    assert b.basis_sperp.shape == (1, 3)
    v = b.basis_sperp[0] * np.sign(b.basis_sperp[0, 0])
    np.testing.assert_allclose(v, np.ones(3) / np.sqrt(3), atol=1e-12)


def test_basis_single_edge_and_immigration():
    assert stoichiometric_basis(single_edge()).rank == 1
    assert stoichiometric_basis(single_edge()).basis_sperp.shape[0] == 0
    b = stoichiometric_basis(immigration_graph())
    assert b.rank == 2 and b.basis_sperp.shape[0] == 0


@pytest.mark.parametrize(
    "g, expected",
    [
        (triangle_graph(), (3, 1, 2, 0, True)),
        (square_graph(), (4, 1, 2, 1, True)),
        (directed_cycle(), (3, 1, 2, 0, True)),
        (single_edge(), (2, 1, 1, 0, False)),
        (immigration_graph(), (8, 1, 2, 5, True)),
    ],
)
def test_structural_reports(g, expected):
    r = structural_report(g)
    assert (r.num_vertices, r.num_linkage_classes, r.dim_s, r.deficiency, r.weakly_reversible) == expected


@pytest.mark.parametrize("n", [1, 2, 3, 5, 10])
def test_cooperative_graph_deficiency_zero(n):
    r = structural_report(cooperative_graph(n))
    assert (r.num_vertices, r.num_linkage_classes, r.dim_s, r.deficiency) == (n + 1, 1, n, 0)
    assert r.weakly_reversible


def test_two_linkage_classes():
    g = EGraph([[0.0, 0], [1, 0], [0, 1], [1, 1]], [(0, 1, 1.0), (2, 3, 1.0), (3, 2, 1.0)])
    r = structural_report(g)
    assert r.linkage_assignment == (0, 0, 1, 1)
    assert r.num_linkage_classes == 2
    assert not r.weakly_reversible
    assert r.deficiency == 4 - 2 - 1


def test_report_dict_keys():
    d = structural_report(triangle_graph()).to_dict()
    assert list(d) == [
        "num_vertices",
        "num_linkage_classes",
        "dim_S",
        "deficiency",
        "weakly_reversible",
        "linkage_assignment",
        "scc_assignment",
    ]


@given(egraphs())
def test_components_match_closure(g):
    pairs = [(e.src, e.dst) for e in g.edges]
    assert linkage_classes(g) == brute_force_components(g.num_vertices, pairs, directed=False)
    assert strong_components(g) == brute_force_components(g.num_vertices, pairs, directed=True)
    scc = strong_components(g)
    assert is_weakly_reversible(g) == all(scc[i] == scc[j] for i, j in pairs)


@given(egraphs())
def test_deficiency_nonnegative_and_consistent(g):
    r = structural_report(g)
    assert r.deficiency >= 0
    assert r.deficiency == r.num_vertices - r.num_linkage_classes - r.dim_s
    # rank oracle independent of the SVD basis
    assert r.dim_s == np.linalg.matrix_rank(g.edge_vectors())


@given(egraphs())
def test_basis_is_orthonormal_and_spans_edges(g):
    b = stoichiometric_basis(g)
    Q = np.vstack([b.basis_s, b.basis_sperp])
    assert Q.shape == (g.dimension, g.dimension)
    np.testing.assert_allclose(Q @ Q.T, np.eye(g.dimension), atol=1e-10)
    for v in g.edge_vectors():
        assert np.linalg.norm(b.project_sperp(v)) <= 1e-10 * np.linalg.norm(v)


@given(egraphs())
def test_reversed_copies_keep_invariants(g):
    have = {(e.src, e.dst) for e in g.edges}
    edges = [(e.src, e.dst, e.weight) for e in g.edges]
    edges += [(e.dst, e.src, 1.0) for e in g.edges if (e.dst, e.src) not in have]
    h = EGraph(g.vertices, edges)
    a, b = structural_report(g), structural_report(h)
    assert (a.num_linkage_classes, a.dim_s, a.deficiency) == (b.num_linkage_classes, b.dim_s, b.deficiency)
    assert b.weakly_reversible


@given(egraphs(), st.randoms(use_true_random=False))
def test_permutation_invariance(g, rnd):
    perm = list(range(g.num_vertices))
    rnd.shuffle(perm)
    h = g.permuted(perm)
    a, b = structural_report(g), structural_report(h)
    assert (a.num_linkage_classes, a.dim_s, a.deficiency, a.weakly_reversible) == (
        b.num_linkage_classes,
        b.dim_s,
        b.deficiency,
        b.weakly_reversible,
    )
    P = np.zeros((g.num_vertices, g.num_vertices))
    for new, old in enumerate(perm):
        P[new, old] = 1.0
    np.testing.assert_allclose(kirchhoff_matrix(h), P @ kirchhoff_matrix(g) @ P.T, atol=0)


@given(egraphs())
def test_kirchhoff_columns_sum_to_zero(g):
    A = kirchhoff_matrix(g)
    assert np.all(np.abs(A.sum(axis=0)) <= 1e-12 * np.abs(A).max())


def test_graphs_are_immutable():
    g = triangle_graph()
    with pytest.raises(ValueError):
        g.vertices[0, 0] = 5.0
