import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from oamris.power import (InfeasibleBudget, PowerSubproblem, optimize_power, project_capped_floor,
                          solve_p4, update_multipliers)


def _random_sub(seed, n=2, budget=1.0, floor=1e-3):
    rng = np.random.default_rng(seed)
    return PowerSubproblem(rng.uniform(0.5, 40, (n, n)), rng.uniform(0.2, 20, (n, n)),
                           rng.uniform(0, 2, n), budget, floor)


def _grid_points(sub, n):
    xs = np.linspace(sub.floor, sub.budget - sub.floor, n)
    X, Y = np.meshgrid(xs, xs)
    pts = np.stack([X.ravel(), Y.ravel()], 1)
    return np.vstack([pts[pts.sum(1) <= sub.budget + 1e-12], np.stack([xs, sub.budget - xs], 1)])


@pytest.mark.parametrize("seed", range(5))
def test_p4_matches_grid_search(seed):
    sub = _random_sub(seed)
    t = update_multipliers(sub, np.random.default_rng(seed).dirichlet([1, 1]) * 0.9)
    p = solve_p4(sub, t)
    best = max(sub.surrogate(q, t) for q in _grid_points(sub, 301))
    assert (best - sub.surrogate(p, t)) / abs(best) < 1e-3


def test_full_objective_reaches_grid_optimum_from_good_start():
    # the secrecy objective itself is nonconvex: MM finds a stationary point,
    # which is the global one when started in its basin
    sub = _random_sub(2)
    best = max(sub.secrecy_bits(q) for q in _grid_points(sub, 201))
    p, _ = optimize_power(sub, np.array([0.2, 0.2]))
    assert sub.secrecy_bits(p) >= best - 1e-6
    p_eq, _ = optimize_power(sub, np.full(2, 0.5))
    assert sub.secrecy_bits(p_eq) < best


def test_multipliers_make_surrogate_tight():
    sub = _random_sub(0, n=3)
    p = np.array([0.2, 0.3, 0.1])
    t = update_multipliers(sub, p)
    assert sub.surrogate(p, t) / np.log(2) == pytest.approx(sub.secrecy_bits(p), rel=1e-12)
    # any other multiplier gives a lower bound
    rng = np.random.default_rng(1)
    for _ in range(20):
        t2 = type(t)(t.t_B * rng.uniform(0.5, 2, 3), t.t_E * rng.uniform(0.5, 2, 3))
        assert sub.surrogate(p, t2) <= sub.surrogate(p, t) + 1e-12


def test_surrogate_gradient_matches_fd():
    sub = _random_sub(2, n=3)
    p = np.array([0.2, 0.3, 0.1])
    t = update_multipliers(sub, np.array([0.1, 0.1, 0.4]))
    h = 1e-6
    fd = [(sub.surrogate(p + h * e, t) - sub.surrogate(p - h * e, t)) / (2 * h) for e in np.eye(3)]
    np.testing.assert_allclose(sub.surrogate_grad(p, t), fd, rtol=1e-6)


@pytest.mark.parametrize("seed", range(10))
def test_trace_monotone(seed):
    sub = _random_sub(seed, n=3)
    _, trace = optimize_power(sub, np.full(3, 1 / 3))
    assert np.all(np.diff(trace) >= -1e-12)


def test_solve_p4_does_not_decrease_surrogate():
    sub = _random_sub(4, n=3)
    p0 = np.full(3, 0.3)
    t = update_multipliers(sub, p0)
    p = solve_p4(sub, t, p0)
    assert sub.surrogate(p, t) >= sub.surrogate(p0, t)


def test_floor_binds_when_mode_is_useless():
    # mode 2 leaks to Eve and gives Bob nothing
    A = np.array([[10.0, 0.0], [0.0, 1e-6]])
    B = np.array([[0.1, 0.0], [0.0, 50.0]])
    sub = PowerSubproblem(A, B, np.zeros(2), 1.0, 0.01)
    p, _ = optimize_power(sub, np.full(2, 0.5))
    assert p[1] == pytest.approx(0.01, abs=1e-9)
    assert p.sum() == pytest.approx(1.0, abs=1e-9)


def test_single_mode_uses_budget_when_bob_is_stronger():
    sub = PowerSubproblem(np.array([[5.0]]), np.array([[1.0]]), np.zeros(1), 2.0, 0.0)
    p, _ = optimize_power(sub, np.array([0.5]))
    assert p[0] == pytest.approx(2.0, abs=1e-9)


def test_infeasible_floor():
    with pytest.raises(InfeasibleBudget):
        PowerSubproblem(np.eye(3), np.eye(3), np.zeros(3), 1.0, 0.5)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=8), st.floats(0.1, 5), st.floats(0, 0.05))
def test_projection_feasible_and_optimal(v, budget, floor):
    assume(floor * len(v) <= budget)
    v = np.array(v)
    x = project_capped_floor(v, budget, floor)
    assert np.all(x >= floor - 1e-12) and x.sum() <= budget + 1e-9
    # variational inequality: (v - x) . (y - x) <= 0 for feasible y
    rng = np.random.default_rng(0)
    for _ in range(20):
        y = floor + rng.dirichlet(np.ones(len(v))) * (budget - floor * len(v)) * rng.uniform()
        assert (v - x) @ (y - x) <= 1e-8


def test_projection_identity_inside():
    v = np.array([0.2, 0.3])
    np.testing.assert_array_equal(project_capped_floor(v, 1.0, 0.1), v)
