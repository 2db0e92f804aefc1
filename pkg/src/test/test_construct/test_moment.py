import numpy as np
import pytest

from chebquad.construct.moment import WeightVanishesError, basis_moments, equipartition_init, moment_map, moment_matrix
from chebquad.errors import PreconditionError
from chebquad.weight.spec import WeightSpec


def test_basis_moments(sin_squared: WeightSpec) -> None:
    assert basis_moments(sin_squared, 2) == pytest.approx([0.0, 0.0, -np.pi / 2, 0.0], abs=1e-10)


def test_moment_matrix_constant(constant_circle: WeightSpec) -> None:
    nodes = np.array([0.0, 0.5, 2.0])
    matrix = moment_matrix(constant_circle, 2, nodes)
    assert matrix.shape == (3, 4)
    expected = 2 * np.pi * np.column_stack([np.cos(nodes), np.sin(nodes), np.cos(2 * nodes), np.sin(2 * nodes)])
    assert np.allclose(matrix, expected, atol=1e-10)


def test_moment_map_integrates_to_zero(sin_squared: WeightSpec) -> None:
    # int E(x) W(x) dx = I mu - mu I = 0
    theta = np.linspace(-np.pi, np.pi, 4096, endpoint=False)
    rows = moment_matrix(sin_squared, 3, theta) * sin_squared.density(theta)[:, None]
    assert np.allclose(rows.mean(axis=0) * 2 * np.pi, 0.0, atol=1e-9)


def test_moment_map(constant_circle: WeightSpec) -> None:
    vector = moment_map(constant_circle, 2, 0.0)
    assert vector.n == 2
    assert vector.entries == pytest.approx((2 * np.pi, 0.0, 2 * np.pi, 0.0), abs=1e-10)
    with pytest.raises(PreconditionError):
        moment_map(constant_circle, 0, 0.0)


def test_moment_matrix_requires_circle(constant_interval: WeightSpec) -> None:
    with pytest.raises(PreconditionError):
        moment_matrix(constant_interval, 1, np.zeros(2))


def test_equipartition_constant(constant_circle: WeightSpec) -> None:
    expected = -np.pi + (np.arange(4) + 0.5) * np.pi / 2
    assert equipartition_init(constant_circle, 4) == pytest.approx(expected, abs=1e-10)


def test_equipartition_abs_sin(abs_sin: WeightSpec) -> None:
    assert equipartition_init(abs_sin, 2) == pytest.approx([-np.pi / 2, np.pi / 2], abs=1e-10)


def test_equipartition_balances_mass(stretched: WeightSpec) -> None:
    nodes = equipartition_init(stretched, 5)
    assert np.all(np.diff(nodes) > 0)
    masses = [stretched.integrate(-np.pi, x) for x in nodes]
    expected = (np.arange(5) + 0.5) * stretched.total_mass / 5
    assert masses == pytest.approx(expected, rel=1e-8)


def test_equipartition_vanishing_weight() -> None:
    half = WeightSpec.model_validate(
        {
            "domain": "circle",
            "family": "custom",
            "function": lambda x: (np.cos(x) > 0).astype(float),
            "singularity_hints": [-np.pi / 2, np.pi / 2],
        }
    )
    with pytest.raises(WeightVanishesError):
        equipartition_init(half, 3)


def test_equipartition_preconditions(constant_circle: WeightSpec, constant_interval: WeightSpec) -> None:
    with pytest.raises(PreconditionError):
        equipartition_init(constant_circle, 0)
    with pytest.raises(PreconditionError):
        equipartition_init(constant_interval, 3)
