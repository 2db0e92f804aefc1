import numpy as np
import pytest

from chebquad.bounds.kane import KaneSearchOptions, kane_sup
from chebquad.construct.quadrature import verify
from chebquad.construct.solver import ConvergenceError, MomentSystem, SolverOptions, damped_least_squares, solve_quadrature
from chebquad.errors import PreconditionError
from chebquad.weight.spec import WeightSpec
from test.shared import equispaced_circle_nodes


def test_residual_vanishes_on_equispaced_nodes(constant_circle: WeightSpec) -> None:
    system = MomentSystem(constant_circle, 7)
    residual = system.residual(np.asarray(equispaced_circle_nodes(8)))
    assert residual.shape == (14,)
    assert system.verify_scale(residual) < 1e-12


def test_jacobian_matches_finite_differences(sin_squared: WeightSpec, rng: np.random.Generator) -> None:
    system = MomentSystem(sin_squared, 3)
    nodes = rng.uniform(-np.pi, np.pi, 5)
    jac = system.jacobian(nodes)
    step = 1e-7
    for j in range(nodes.size):
        bump = np.zeros(nodes.size)
        bump[j] = step
        finite = (system.residual(nodes + bump) - system.residual(nodes - bump)) / (2 * step)
        assert np.allclose(jac[:, j], finite, atol=1e-7)


def test_damped_least_squares_reduces_residual(constant_circle: WeightSpec, rng: np.random.Generator) -> None:
    system = MomentSystem(constant_circle, 3)
    start = np.asarray(equispaced_circle_nodes(4)) + 0.2 * rng.standard_normal(4)
    initial = system.verify_scale(system.residual(start))
    nodes, final = damped_least_squares(system, start, max_iter=100, stop=1e-12)
    assert final < initial
    assert final < 1e-10
    assert np.all(np.diff(nodes) >= 0)


def test_constant_weight(constant_circle: WeightSpec) -> None:
    q = solve_quadrature(constant_circle, 7, 8)
    assert q.node_count == 8
    assert q.weight == pytest.approx(2 * np.pi / 8)
    assert verify(q, constant_circle).accepted


def test_sin_squared_at_node_bound(sin_squared: WeightSpec) -> None:
    node_count = kane_sup(sin_squared, 4, KaneSearchOptions(restarts=4, iters=100)).node_bound
    q = solve_quadrature(sin_squared, 4, node_count)
    assert verify(q, sin_squared).accepted


def test_custom_init_and_determinism(abs_sin: WeightSpec) -> None:
    options = SolverOptions(restarts=4, seed=3)
    first = solve_quadrature(abs_sin, 2, 6, options=options)
    second = solve_quadrature(abs_sin, 2, 6, options=options)
    assert first == second
    seeded = solve_quadrature(abs_sin, 2, 6, init=np.asarray(first.nodes), options=options)
    assert verify(seeded, abs_sin).accepted


def test_infeasible_node_count(constant_circle: WeightSpec) -> None:
    with pytest.raises(ConvergenceError) as excinfo:
        solve_quadrature(constant_circle, 2, 1, options=SolverOptions(restarts=2, max_iter=20))
    assert excinfo.value.best_residual > 1e-3


def test_preconditions(constant_circle: WeightSpec, constant_interval: WeightSpec) -> None:
    with pytest.raises(PreconditionError):
        solve_quadrature(constant_interval, 2, 4)
    with pytest.raises(PreconditionError):
        solve_quadrature(constant_circle, 2, 0)
    with pytest.raises(PreconditionError):
        solve_quadrature(constant_circle, 2, 4, init=np.zeros(3))


@pytest.mark.slow
@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_succeeds_at_node_bound(doubling_weight: tuple[WeightSpec, float], n: int) -> None:
    w, _ = doubling_weight
    node_count = kane_sup(w, n, KaneSearchOptions(restarts=8, iters=200)).node_bound
    q = solve_quadrature(w, n, node_count)
    assert verify(q, w, tol=1e-9).accepted
