import numpy as np
import pytest

from chebquad.errors import PreconditionError
from chebquad.weight.spec import WeightSpec
from chebquad.weight.window import averaged_weight, delta_n, window_mass
from test.shared import trapezoid_oracle


def test_window_mass_constant(constant_circle: WeightSpec) -> None:
    assert window_mass(constant_circle, 1.3, 0.25) == pytest.approx(0.5)


@pytest.mark.parametrize("delta", [np.pi, 4.0, 10.0])
def test_window_mass_full_period(sin_squared: WeightSpec, delta: float) -> None:
    assert window_mass(sin_squared, 0.7, delta) == sin_squared.total_mass


def test_window_mass_zero_width(sin_squared: WeightSpec) -> None:
    assert window_mass(sin_squared, 0.7, 0.0) == 0.0
    with pytest.raises(PreconditionError):
        window_mass(sin_squared, 0.7, -0.1)


@pytest.mark.parametrize("x", [-3.0, 0.0, 0.4, 2.9])
def test_window_mass_periodic(abs_sin: WeightSpec, x: float) -> None:
    tol = 1e-10
    expected = window_mass(abs_sin, x, 0.3, tol=tol)
    assert window_mass(abs_sin, x + 2 * np.pi, 0.3, tol=tol) == pytest.approx(expected, rel=10 * tol)


def test_window_mass_stretched_against_oracle(stretched: WeightSpec) -> None:
    oracle = 2.0 * trapezoid_oracle(lambda t: np.exp(-1.0 / t), 1e-12, 0.1)
    assert window_mass(stretched, 0.0, 0.1, tol=1e-12) == pytest.approx(oracle, rel=1e-7)


@pytest.mark.parametrize("n", [1, 3, 17])
def test_averaged_weight_constant(constant_circle: WeightSpec, n: int) -> None:
    assert averaged_weight(constant_circle, n, 0.2) == pytest.approx(2.0)


def test_averaged_weight_sin_squared(sin_squared: WeightSpec) -> None:
    # n * int_{-1/4}^{1/4} sin^2 = n * (1/4 - sin(1/2)/2) with n = 4
    assert averaged_weight(sin_squared, 4, 0.0) == pytest.approx(4 * (0.25 - np.sin(0.5) / 2.0), rel=1e-9)


def test_averaged_weight_stretched_at_pi(stretched: WeightSpec) -> None:
    oracle = 2.0 * 2.0 * trapezoid_oracle(lambda t: np.exp(-1.0 / t), np.pi - 0.5, np.pi)
    assert averaged_weight(stretched, 2, np.pi) == pytest.approx(oracle, rel=1e-8)


@pytest.mark.parametrize("x, n, expected", [(1.0, 10, 0.01), (-1.0, 10, 0.01), (0.0, 10, 0.11), (0.6, 5, 0.2)])
def test_delta_n(x: float, n: int, expected: float) -> None:
    assert float(delta_n(x, n)) == pytest.approx(expected)


def test_delta_n_requires_positive_n() -> None:
    with pytest.raises(PreconditionError):
        delta_n(0.0, 0)


@pytest.mark.parametrize("name, doubling_constant", [("constant_circle", 2.0), ("abs_sin", 4.0)])
def test_window_comparison_across_centres(request: pytest.FixtureRequest, name: str, doubling_constant: float) -> None:
    w: WeightSpec = request.getfixturevalue(name)
    exponent = np.log2(doubling_constant)
    for delta in (0.05, 0.2, 0.6):
        for x in np.linspace(-np.pi, np.pi, 9):
            for y in np.linspace(-np.pi, np.pi, 9):
                bound = doubling_constant * (1.0 + abs(x - y) / delta) ** exponent * window_mass(w, x, delta)
                assert window_mass(w, y, delta) <= bound * (1.0 + 1e-9)
