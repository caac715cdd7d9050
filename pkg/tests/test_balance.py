import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphgen import matrix_tree_kernel, random_deficiency_zero_graph
from glvbalance import (
    DegenerateIntersection,
    EGraph,
    SubspaceBasis,
    NonPositiveState,
    balance_fit,
    check_balance_at,
    find_balanced_state,
    kirchhoff_matrix,
    positive_kernel,
    state_in_class,
    steady_state_set,
    stiemke_infeasibility,
    stiemke_vector,
    stoichiometric_basis,
    structural_report,
)
from glvbalance.catalog import (
    cooperative_graph,
    directed_cycle,
    immigration_graph,
    single_edge,
    square_graph,
    triangle_graph,
)


def test_triangle_balanced_everywhere_on_diagonal():
    g = triangle_graph()
    r = check_balance_at(g, [1, 1, 1])
    np.testing.assert_array_equal(r.residuals, 0)
    np.testing.assert_array_equal(r.outflow, 2)
    assert check_balance_at(g, np.full(3, np.e)).balanced


def test_immigration_balanced_at_one():
    r = check_balance_at(immigration_graph(), [1, 1])
    assert r.max_residual <= 1e-12


def test_single_edge_unbalanced():
    r = check_balance_at(single_edge(), [0.7])
    assert not r.balanced
    assert r.residuals[0] == 1.0


def test_balance_rejects_nonpositive_state():
    with pytest.raises(NonPositiveState):
        check_balance_at(triangle_graph(), [1, 0, 1])


def test_kernel_examples():
    np.testing.assert_allclose(positive_kernel(triangle_graph()), [1, 1, 1], rtol=1e-14)
    assert positive_kernel(single_edge()) is None
    c = positive_kernel(directed_cycle((1.0, 2.0, 4.0)))
    np.testing.assert_allclose(c, np.array([8.0, 4.0, 2.0]) / 8.0, rtol=1e-13)
    np.testing.assert_allclose(kirchhoff_matrix(directed_cycle((1.0, 2.0, 4.0))) @ c, 0, atol=1e-14)


def test_triangle_asymmetric_weights_against_tree_oracle():
    g = triangle_graph({(0, 1): 2.0})
    cert = find_balanced_state(g)
    assert cert is not None
    c = matrix_tree_kernel(g)
    np.testing.assert_allclose(c, np.array([3.0, 5.0, 4.0]) / 3.0, rtol=1e-14)
    # vertices are unit vectors, so x* itself is proportional to c
    np.testing.assert_allclose(cert.x_star / cert.x_star[0], c, rtol=1e-12)


def test_find_balanced_state_examples():
    cert = find_balanced_state(triangle_graph())
    np.testing.assert_allclose(cert.xi_star, 0, atol=1e-14)
    cert = find_balanced_state(immigration_graph())
    np.testing.assert_allclose(cert.x_star, [1, 1], atol=1e-12)
    assert find_balanced_state(single_edge()) is None


def test_square_balance_depends_on_weights():
    # deficiency one: unit weights balance, a lopsided assignment does not
    assert find_balanced_state(square_graph()) is not None
    g = square_graph().with_weights([1, 1, 1, 1, 1, 1, 5, 1])
    assert structural_report(g).deficiency == 1
    fit = balance_fit(g)
    assert fit is not None and fit[2] > 1e-8
    assert find_balanced_state(g) is None


def test_certificate_fields():
    cert = find_balanced_state(immigration_graph())
    d = cert.to_dict()
    assert d["type"] == "complex_balanced"
    np.testing.assert_allclose(np.exp(cert.xi_star), cert.x_star, rtol=0)
    assert cert.max_residual <= 1e-8


def test_steady_state_set_examples():
    g = triangle_graph()
    cert = find_balanced_state(g)
    sss = steady_state_set(cert, stoichiometric_basis(g))
    assert sss.dimension == 1
    assert sss.distance([1.0, 1.0, 1.0]) <= 1e-14
    assert check_balance_at(g, np.exp(np.array([1.0, 1.0, 1.0]))).balanced
    g = immigration_graph()
    sss = steady_state_set(find_balanced_state(g), stoichiometric_basis(g))
    assert sss.dimension == 0


def test_state_in_class_examples():
    g = triangle_graph()
    cert = find_balanced_state(g)
    b = stoichiometric_basis(g)
    np.testing.assert_allclose(state_in_class(cert, b, None, [np.log(2), 0, -np.log(2)]), 0, atol=1e-14)
    np.testing.assert_allclose(state_in_class(cert, b, None, [1, 1, 1]), [1, 1, 1], atol=1e-14)
    g = immigration_graph()
    cert = find_balanced_state(g)
    np.testing.assert_allclose(state_in_class(cert, stoichiometric_basis(g), [3, 0.5], [4, -1]), cert.xi_star, atol=1e-14)


def test_state_in_class_degenerate():
    # a corrupted basis whose complement overlaps S
    cert = find_balanced_state(triangle_graph())
    bad = SubspaceBasis(3, np.array([[1.0, 0, 0], [0, 1.0, 0]]), np.array([[1.0, 0, 0]]))
    with pytest.raises(DegenerateIntersection):
        state_in_class(cert, bad, None, [0.5, 0.1, 0.2])


@pytest.mark.parametrize("d", [[1e-6, 1.0, 1.0], [1e6, 1.0, 1e-6]])
def test_state_in_class_extreme_scaling_still_transversal(d):
    g = triangle_graph()
    cert = find_balanced_state(g)
    b = stoichiometric_basis(g)
    xi0 = np.array([0.5, 0.1, 0.2])
    zeta = state_in_class(cert, b, d, xi0)
    assert np.linalg.norm(b.project_s(zeta)) <= 1e-10
    assert np.linalg.norm(b.scaled(d).project_sperp(zeta - xi0)) <= 1e-9


def test_stiemke_examples():
    sc = stiemke_vector(single_edge())
    assert sc.p[0] > 0 and sc.slack[0] >= 1e-8
    assert stiemke_vector(triangle_graph()) is None
    assert stiemke_infeasibility(triangle_graph()) > 0
    path = EGraph([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]], [(0, 1, 1.0), (1, 2, 1.0)])
    sc = stiemke_vector(path)
    assert np.all(sc.slack >= -1e-10) and sc.slack.max() >= 1e-8
    np.testing.assert_allclose(sc.slack, path.edge_vectors() @ sc.p, rtol=1e-15)
    assert sc.to_dict()["type"] == "stiemke"


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_kernel_matches_matrix_tree(seed):
    g = random_deficiency_zero_graph(np.random.default_rng(seed), weakly_reversible=True)
    np.testing.assert_allclose(positive_kernel(g), matrix_tree_kernel(g), rtol=1e-9)


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_deficiency_zero_dichotomy(seed):
    rng = np.random.default_rng(seed)
    wr = random_deficiency_zero_graph(rng, weakly_reversible=True)
    cert = find_balanced_state(wr)
    assert cert is not None and cert.max_residual <= 1e-8
    assert stiemke_vector(wr) is None
    nwr = random_deficiency_zero_graph(rng, weakly_reversible=False)
    assert find_balanced_state(nwr) is None
    sc = stiemke_vector(nwr)
    assert sc is not None
    assert np.all(sc.slack >= -1e-10) and sc.slack[sc.strict_edge] >= 1e-8


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_every_point_of_steady_state_set_is_balanced(seed):
    rng = np.random.default_rng(seed)
    g = random_deficiency_zero_graph(rng, weakly_reversible=True)
    cert = find_balanced_state(g)
    sss = steady_state_set(cert, stoichiometric_basis(g))
    for _ in range(20):
        zeta = sss.point(rng.uniform(-1, 1, sss.dimension))
        assert check_balance_at(g, np.exp(zeta)).max_residual <= 1e-8


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_state_in_class_membership(seed):
    rng = np.random.default_rng(seed)
    g = random_deficiency_zero_graph(rng, weakly_reversible=True)
    cert = find_balanced_state(g)
    b = stoichiometric_basis(g)
    d = rng.uniform(0.1, 10, g.dimension)
    xi0 = rng.uniform(-2, 2, g.dimension)
    zeta = state_in_class(cert, b, d, xi0)
    assert np.linalg.norm(b.project_s(zeta - cert.xi_star)) <= 1e-10 * (1 + np.linalg.norm(zeta))
    assert np.linalg.norm(b.scaled(d).project_sperp(zeta - xi0)) <= 1e-10 * (1 + np.linalg.norm(zeta))


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.floats(0.01, 100))
def test_weight_scaling_keeps_balanced_state(seed, lam):
    g = random_deficiency_zero_graph(np.random.default_rng(seed), weakly_reversible=True)
    cert = find_balanced_state(g)
    assert check_balance_at(g.scaled(lam), cert.x_star).max_residual <= 1e-8


@pytest.mark.parametrize("n", [2, 3, 5])
def test_cooperative_graph_balanced(n):
    assert find_balanced_state(cooperative_graph(n)) is not None
