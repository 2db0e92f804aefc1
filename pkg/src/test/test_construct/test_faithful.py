import numpy as np
import pytest

from chebquad.bounds.kane import kane_sup
from chebquad.construct.faithful import FaithfulOptions, SampledHull, build_hull, kane_construct, node_functions, origin_depth
from chebquad.construct.quadrature import verify
from chebquad.errors import PreconditionError
from chebquad.weight.spec import WeightSpec

SQUARE = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])


def test_node_functions_point_mass() -> None:
    assert node_functions(np.array([0.0]), np.array([1.0]), 2) == pytest.approx([0.0, 0.0])


def test_node_functions_split_mass() -> None:
    assert node_functions(np.array([1.0, -1.0]), np.array([0.5, 0.5]), 2) == pytest.approx([-1.0, 1.0])


def test_node_functions_sorted_in_range(rng: np.random.Generator) -> None:
    abscissae = rng.uniform(-np.pi, np.pi, 5)
    alphas = rng.dirichlet(np.ones(5))
    nodes = node_functions(abscissae, alphas, 7)
    assert np.all(np.diff(nodes) >= 0)
    assert np.all((nodes >= -np.pi) & (nodes < np.pi))


def test_origin_depth() -> None:
    triangle = np.array([[1.0, 0.0], [-0.5, np.sqrt(3) / 2], [-0.5, -np.sqrt(3) / 2]])
    assert origin_depth(triangle) == pytest.approx(1 / 3)
    assert origin_depth(triangle + 5.0) == 0.0


def test_sampled_hull_retract() -> None:
    hull = SampledHull(np.arange(4.0), SQUARE)
    assert hull.retract(np.array([2.0, 0.0])) == pytest.approx([1.0, 0.0])
    assert hull.retract(np.array([0.5, -0.25])) == pytest.approx([0.5, -0.25])


def test_sampled_hull_barycentric() -> None:
    hull = SampledHull(np.arange(4.0), SQUARE)
    v = np.array([0.2, -0.1])
    indices, alphas = hull.barycentric(v)
    assert alphas.sum() == pytest.approx(1.0)
    assert np.all(alphas >= 0)
    assert alphas @ SQUARE[indices] == pytest.approx(v)


def test_build_hull_contains_origin(constant_circle: WeightSpec) -> None:
    hull = build_hull(constant_circle, 1, 3, FaithfulOptions())
    assert hull.samples.size == 8 * 3
    assert origin_depth(hull.points) > 0


def test_constant_weight(constant_circle: WeightSpec) -> None:
    options = FaithfulOptions(starts=4, sup_estimate=2 / np.pi)
    q = kane_construct(constant_circle, 1, 3, options)
    assert q.node_count == 3
    assert verify(q, constant_circle, tol=options.target).accepted


@pytest.mark.parametrize("node_count", [4, 8])
def test_constant_weight_degree_two(constant_circle: WeightSpec, node_count: int) -> None:
    options = FaithfulOptions(starts=4, sup_estimate=1.1)
    q = kane_construct(constant_circle, 2, node_count, options)
    assert q.node_count == node_count
    assert verify(q, constant_circle, tol=options.target).accepted


def test_sin_squared_degree_two(sin_squared: WeightSpec) -> None:
    options = FaithfulOptions(starts=4, sup_estimate=1.5)
    q = kane_construct(sin_squared, 2, 8, options)
    assert verify(q, sin_squared, tol=options.target).accepted


def test_node_count_below_bound(constant_circle: WeightSpec) -> None:
    with pytest.raises(PreconditionError, match="existence is not guaranteed"):
        kane_construct(constant_circle, 1, 2, FaithfulOptions(sup_estimate=2 / np.pi))


def test_degree_cap(constant_circle: WeightSpec, constant_interval: WeightSpec) -> None:
    with pytest.raises(PreconditionError):
        kane_construct(constant_circle, 4, 50, FaithfulOptions(sup_estimate=1.0))
    with pytest.raises(PreconditionError):
        kane_construct(constant_interval, 1, 3, FaithfulOptions(sup_estimate=1.0))


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("name", ["constant_circle", "sin_squared"])
def test_succeeds_at_node_bound(request: pytest.FixtureRequest, name: str, n: int) -> None:
    w: WeightSpec = request.getfixturevalue(name)
    estimate = kane_sup(w, n)
    q = kane_construct(w, n, estimate.node_bound, FaithfulOptions(sup_estimate=estimate.sup_estimate))
    assert verify(q, w, tol=1e-8).accepted
