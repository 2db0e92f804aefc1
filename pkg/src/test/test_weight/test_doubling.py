import numpy as np
import pytest

from chebquad.errors import PreconditionError
from chebquad.weight.doubling import NotDoublingError, default_a_grid, default_delta_grid, estimate_doubling_constant
from chebquad.weight.spec import WeightSpec


def test_default_grids(constant_circle: WeightSpec, constant_interval: WeightSpec) -> None:
    assert default_delta_grid(constant_circle, levels=3) == pytest.approx([np.pi / 2, np.pi / 4, np.pi / 8])
    assert default_delta_grid(constant_interval, levels=2) == pytest.approx([0.5, 0.25])
    assert default_a_grid(constant_interval, points=3) == pytest.approx([-1.0, 0.0, 1.0])
    assert default_a_grid(constant_circle, points=4)[-1] < np.pi


def test_constant_circle(constant_circle: WeightSpec) -> None:
    estimate = estimate_doubling_constant(constant_circle, delta_grid=[0.1, 0.2, 0.4], a_grid=np.linspace(-np.pi, np.pi, 7))
    assert estimate.value == pytest.approx(2.0)
    assert not estimate.grows


def test_constant_interval_at_endpoint(constant_interval: WeightSpec) -> None:
    estimate = estimate_doubling_constant(constant_interval, delta_grid=[0.25], a_grid=[1.0])
    assert estimate.value == pytest.approx(2.0)
    assert estimate.a == 1.0
    assert estimate.delta == 0.25


@pytest.mark.parametrize("delta", [0.05, 0.01])
def test_abs_sin_at_zero(abs_sin: WeightSpec, delta: float) -> None:
    # (1 - cos 2d) / (1 - cos d) -> 4
    estimate = estimate_doubling_constant(abs_sin, delta_grid=[delta], a_grid=[0.0])
    assert estimate.value == pytest.approx((1.0 - np.cos(2 * delta)) / (1.0 - np.cos(delta)), rel=1e-8)
    assert estimate.value < 4.0


def test_known_weights_stay_below_constant(doubling_weight: tuple[WeightSpec, float]) -> None:
    w, doubling_constant = doubling_weight
    estimate = estimate_doubling_constant(w, delta_grid=default_delta_grid(w, levels=6), a_grid=np.linspace(-np.pi, np.pi, 17))
    assert 1.0 < estimate.value <= doubling_constant * (1.0 + 1e-8)


def test_stretched_exponential_grows(stretched: WeightSpec) -> None:
    # The innermost window mass underflows to zero at the finest half-width.
    estimate = estimate_doubling_constant(stretched, delta_grid=[1e-1, 1e-2, 1e-3], a_grid=[0.0])
    assert estimate.grows
    assert np.isfinite(estimate.value)
    assert estimate.value > 2.0
    assert estimate.delta in (1e-1, 1e-2)


def test_stretched_exponential_coarse_grid_grows(stretched: WeightSpec) -> None:
    estimate = estimate_doubling_constant(stretched, delta_grid=[0.4, 0.2, 0.1], a_grid=[0.0])
    assert estimate.grows
    assert estimate.delta == pytest.approx(0.1)


def test_vanishing_window_raises(constant_interval: WeightSpec) -> None:
    indicator = WeightSpec.model_validate(
        {"domain": "interval", "family": "custom", "function": lambda x: (x > 0).astype(float), "singularity_hints": [0.0]}
    )
    with pytest.raises(NotDoublingError) as excinfo:
        estimate_doubling_constant(indicator, delta_grid=[0.1], a_grid=[-0.5])
    assert excinfo.value.a == -0.5


@pytest.mark.parametrize("delta_grid, a_grid", [([], [0.0]), ([0.1], []), ([-0.1], [0.0])])
def test_invalid_grids(constant_circle: WeightSpec, delta_grid: list[float], a_grid: list[float]) -> None:
    with pytest.raises(PreconditionError):
        estimate_doubling_constant(constant_circle, delta_grid=delta_grid, a_grid=a_grid)


def test_refining_grids_never_decreases_estimate(abs_sin: WeightSpec) -> None:
    coarse = estimate_doubling_constant(abs_sin, delta_grid=[0.4, 0.1], a_grid=np.linspace(-np.pi, np.pi, 5, endpoint=False))
    fine = estimate_doubling_constant(abs_sin, delta_grid=[0.4, 0.1, 0.05], a_grid=np.linspace(-np.pi, np.pi, 10, endpoint=False))
    assert fine.value >= coarse.value


def test_lift_keeps_doubling(constant_interval: WeightSpec, abs_sin: WeightSpec) -> None:
    interval_estimate = estimate_doubling_constant(
        constant_interval, delta_grid=[0.4, 0.1, 0.02], a_grid=np.linspace(-1.0, 1.0, 21)
    )
    circle_estimate = estimate_doubling_constant(abs_sin, delta_grid=[0.4, 0.1, 0.02], a_grid=np.linspace(-np.pi, np.pi, 21))
    assert np.isfinite(circle_estimate.value)
    assert circle_estimate.value <= 4.0 * interval_estimate.value**7
