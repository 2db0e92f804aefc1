import numpy as np
import pytest

from chebquad.weight.spec import WeightSpec


@pytest.fixture
def constant_circle() -> WeightSpec:
    return WeightSpec.model_validate({"domain": "circle", "family": "constant"})


@pytest.fixture
def constant_interval() -> WeightSpec:
    return WeightSpec.model_validate({"domain": "interval", "family": "constant"})


@pytest.fixture
def abs_sin(constant_interval: WeightSpec) -> WeightSpec:
    """|sin t|, the lift of the constant interval weight."""
    return constant_interval.lift()


@pytest.fixture
def sin_squared() -> WeightSpec:
    """sin^2 t, the lift of the Jacobi weight with alpha = beta = 1/2."""
    return WeightSpec.model_validate({"domain": "interval", "family": "jacobi", "alpha": 0.5, "beta": 0.5}).lift()


@pytest.fixture
def chebyshev_interval() -> WeightSpec:
    return WeightSpec.model_validate({"domain": "interval", "family": "jacobi", "alpha": -0.5, "beta": -0.5})


@pytest.fixture
def stretched() -> WeightSpec:
    return WeightSpec.model_validate({"domain": "circle", "family": "stretched_exponential", "alpha": 1.0})


@pytest.fixture(params=["constant", "abs_sin", "sin_squared"])
def doubling_weight(request: pytest.FixtureRequest) -> tuple[WeightSpec, float]:
    """Doubling circle weights paired with their doubling constant."""
    constants = {"constant": 2.0, "abs_sin": 4.0, "sin_squared": 8.0}
    fixture_name = "constant_circle" if request.param == "constant" else request.param
    return request.getfixturevalue(fixture_name), constants[request.param]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
