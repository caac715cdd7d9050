import csv
import io

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy.integrate import solve_ivp

from graphgen import random_deficiency_zero_graph, relaxation_rates
from glvbalance import (
    EGraph,
    GlvSystem,
    NonPositiveState,
    ScaledSystem,
    StepUnderflow,
    ValidationError,
    find_balanced_state,
    glv_rhs,
    integrate,
    linear_lyapunov_check,
    lyapunov_value,
    state_in_class,
    stiemke_vector,
    stoichiometric_basis,
)
from glvbalance.catalog import immigration_graph, immigration_system, single_edge, triangle_graph
from glvbalance.simulate import LogField, ensemble_initial_states


def test_triangle_converges_to_ones():
    g = triangle_graph()
    cert = find_balanced_state(g)
    tr = integrate(g, [2, 1, 0.5], 50.0, cert=cert)
    assert tr.converged_to is not None
    np.testing.assert_allclose(tr.final, [1, 1, 1], atol=1e-6)
    assert tr.max_conservation_residual() <= 1e-12
    assert tr.lyapunov_nonincreasing()


def test_immigration_converges_from_far_state():
    tr = integrate(immigration_system(), [3, 0.2], 100.0)
    np.testing.assert_allclose(tr.final, [1, 1], atol=1e-6)
    tr = integrate(immigration_graph(), [3, 0.2], 100.0, cert=find_balanced_state(immigration_graph()))
    np.testing.assert_allclose(tr.final, [1, 1], atol=1e-6)
    assert tr.lyapunov_nonincreasing()


def test_start_at_steady_state_is_constant():
    g = immigration_graph()
    cert = find_balanced_state(g)
    tr = integrate(g, cert.x_star, 10.0, cert=cert)
    assert len(tr) == 1
    assert tr.lyapunov[0] == pytest.approx(0.0, abs=1e-28)


def test_matches_reference_integrator():
    g = triangle_graph({(0, 1): 2.0, (2, 0): 0.5})
    d = np.array([1.0, 3.0, 0.5])
    sys = ScaledSystem(g, d)
    x0 = np.array([0.5, 2.0, 1.5])
    tr = integrate(sys, x0, 2.0, rel_tol=1e-10, convergence_tol=0.0)
    ref = solve_ivp(lambda t, x: glv_rhs(sys, x), (0, 2.0), x0, rtol=1e-12, atol=1e-14, method="DOP853")
    np.testing.assert_allclose(tr.final, ref.y[:, -1], rtol=1e-7)
    assert tr.times[-1] == 2.0


def test_step_size_robustness():
    a = integrate(immigration_system(), [3, 0.2], 5.0, rel_tol=1e-8, convergence_tol=0.0)
    b = integrate(immigration_system(), [3, 0.2], 5.0, rel_tol=5e-9, convergence_tol=0.0)
    assert np.max(np.abs(a.final - b.final)) <= 10 * 1e-8


def test_lyapunov_value_examples():
    assert lyapunov_value([2, 3], [2, 3]) == 0.0
    assert lyapunov_value([np.e, 1], [1, 1], [1, 1]) == pytest.approx(1.0, rel=1e-15)
    assert lyapunov_value([np.e**2, np.e**-1], [1, 1], [2, 1]) == pytest.approx(3.0, rel=1e-15)
    with pytest.raises(NonPositiveState):
        lyapunov_value([0, 1], [1, 1])


def test_linear_lyapunov_on_single_edge():
    g = single_edge()
    sc = stiemke_vector(g)
    tr = integrate(g, [0.5], 3.0, convergence_tol=0.0)
    # d xi/dt = e^0 = 1, so xi grows linearly
    np.testing.assert_allclose(tr.final_log, np.log(0.5) + 3.0, rtol=1e-10)
    assert linear_lyapunov_check(g, sc, tr)
    assert linear_lyapunov_check(g, sc, tr.sample([0.0]))


def test_blow_up_reports_step_underflow():
    sys = GlvSystem.from_terms([((1,), (1.0,))])  # x' = x^2 blows up at t = 1
    with pytest.raises(StepUnderflow) as info:
        integrate(sys, [1.0], 5.0)
    assert info.value.last_state is not None and np.all(info.value.last_state > 0)


def test_input_validation():
    g = triangle_graph()
    with pytest.raises(NonPositiveState):
        integrate(g, [0, 1, 1], 1.0)
    with pytest.raises(ValidationError):
        integrate(g, [1, 1, 1], 1.0, rel_tol=1e-2)
    with pytest.raises(ValidationError):
        integrate(g, [1, 1, 1], 0.0)


def test_sampling_and_csv():
    g = triangle_graph()
    cert = find_balanced_state(g)
    tr = integrate(g, [2, 1, 0.5], 50.0, cert=cert)
    grid = tr.merged_with_grid(11)
    assert np.all(np.diff(grid.times) > 0)
    assert set(np.round(np.linspace(tr.times[0], tr.times[-1], 11), 12)) <= set(np.round(grid.times, 12))
    # interpolant passes through accepted steps
    on_steps = tr.sample(tr.times)
    np.testing.assert_allclose(on_steps.states_log, tr.states_log, atol=1e-14)
    text = tr.to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["t", "x1", "x2", "x3", "xi1", "xi2", "xi3", "lyapunov", "cons_1"]
    assert len(rows) == len(tr) + 1
    for r, row in enumerate(rows[1:]):
        vals = [float(v) for v in row]
        assert vals[0] == tr.times[r]
        assert vals[4:7] == list(tr.states_log[r])


def test_ensemble_states_are_reproducible():
    a = ensemble_initial_states(3, 5, seed=42)
    b = ensemble_initial_states(3, 5, seed=42)
    np.testing.assert_array_equal(a, b)
    assert np.all(np.abs(np.log(a)) <= 2)


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1))
def test_balanced_trajectory_properties(seed):
    rng = np.random.default_rng(seed)
    g = random_deficiency_zero_graph(rng, weakly_reversible=True)
    cert = find_balanced_state(g)
    basis = stoichiometric_basis(g)
    d = rng.uniform(0.1, 10, g.dimension)
    sys = ScaledSystem(g, d)
    xi0 = cert.xi_star + rng.uniform(-2, 2, g.dimension)
    zeta = state_in_class(cert, basis, d, xi0)
    # the field-norm detector only pins the state down to threshold / slowest rate
    field_ = LogField.from_scaled(sys, basis)
    slow, fast = relaxation_rates(field_, zeta)
    threshold = 1e-9 * (1 + np.max(np.abs(field_(xi0) / d)))
    assume(threshold / slow <= 5e-7 and fast / slow <= 1e5)
    tr = integrate(sys, np.exp(xi0), 1e4, rel_tol=1e-11, cert=cert, basis=basis)
    assert np.all(tr.states > 0)
    assert np.all(np.diff(tr.times) > 0)
    assert tr.max_conservation_residual() <= 1e-6
    assert tr.lyapunov_nonincreasing()
    assert tr.converged_to is not None
    assert np.max(np.abs(tr.converged_to - zeta)) <= 1e-6
