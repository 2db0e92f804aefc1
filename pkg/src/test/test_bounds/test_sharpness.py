import numpy as np
import pytest

from chebquad.errors import PreconditionError
from chebquad.bounds.sharpness import locate_infimum, mt_ratio, r_interval, r_trig, sandwich_check
from chebquad.shared import fit_power_law
from chebquad.weight.spec import WeightSpec


@pytest.mark.parametrize("n", [1, 4, 16])
def test_r_trig_constant(constant_circle: WeightSpec, n: int) -> None:
    functional = r_trig(constant_circle, n)
    assert functional.value == pytest.approx(np.pi * n)
    assert functional.min_mass == pytest.approx(2.0 / n)


def test_r_trig_abs_sin(abs_sin: WeightSpec) -> None:
    functional = r_trig(abs_sin, 8)
    assert functional.value == pytest.approx(4.0 / (2.0 * (1.0 - np.cos(0.125))), rel=1e-8)
    assert abs(np.sin(functional.minimizer)) < 1e-6


def test_r_trig_stretched_minimizer_at_zero(stretched: WeightSpec) -> None:
    functional = r_trig(stretched, 4)
    assert abs(functional.minimizer) < 1e-6
    assert functional.value > r_trig(stretched, 2).value


def test_r_trig_requires_circle(constant_interval: WeightSpec) -> None:
    with pytest.raises(PreconditionError):
        r_trig(constant_interval, 4)
    with pytest.raises(PreconditionError):
        r_interval(constant_interval, 0)


@pytest.mark.parametrize("n", [2, 8, 20])
def test_r_interval_constant(constant_interval: WeightSpec, n: int) -> None:
    functional = r_interval(constant_interval, n)
    assert functional.value == pytest.approx(2.0 * n**2, rel=1e-8)
    assert functional.minimizer == pytest.approx(-1.0)


def test_locate_infimum_ties_to_smallest_abscissa() -> None:
    x, mass = locate_infimum(lambda x: float(np.cos(x) ** 2), -np.pi, np.pi, 64, periodic=True)
    assert x == pytest.approx(-np.pi / 2, abs=1e-6)
    assert mass == pytest.approx(0.0, abs=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize(
    "document, expected",
    [
        ({"domain": "interval", "family": "constant"}, 2.0),
        ({"domain": "interval", "family": "jacobi", "alpha": 1.0, "beta": 0.0}, 4.0),
        ({"domain": "interval", "family": "jacobi", "alpha": 0.5, "beta": 0.5}, 3.0),
        ({"domain": "interval", "family": "generalized_jacobi", "singular_points": [{"location": 0.0, "exponent": 1.0}]}, 2.0),
    ],
)
def test_r_interval_growth_exponent(document: dict, expected: float) -> None:
    w = WeightSpec.model_validate(document)
    ns = [32, 64, 128, 256]
    exponent = fit_power_law(ns, [r_interval(w, n).value for n in ns])
    assert exponent == pytest.approx(expected, abs=0.15)


def test_sandwich_constant(constant_interval: WeightSpec) -> None:
    report = sandwich_check(constant_interval, 8, doubling_constant=4.0)
    assert report.lower_holds
    assert report.upper_holds
    assert report.holds
    assert report.factor_needed == pytest.approx(report.r_trig / report.r_interval)


def test_sandwich_jacobi_half() -> None:
    w = WeightSpec.model_validate({"domain": "interval", "family": "jacobi", "alpha": 0.5, "beta": 0.5})
    assert sandwich_check(w, 16, doubling_constant=8.0).holds


def test_mt_ratio_constant(constant_circle: WeightSpec) -> None:
    assert mt_ratio(constant_circle, 4, samples=10) == pytest.approx(2.0)


def test_mt_ratio_bounded_in_n(doubling_weight: tuple[WeightSpec, float]) -> None:
    w, _ = doubling_weight
    small = mt_ratio(w, 4, samples=50)
    large = mt_ratio(w, 32, samples=50)
    assert small > 0
    assert large <= 2.0 * small


def test_mt_ratio_reproducible(abs_sin: WeightSpec) -> None:
    assert mt_ratio(abs_sin, 3, samples=20, seed=7) == mt_ratio(abs_sin, 3, samples=20, seed=7)


@pytest.mark.slow
@pytest.mark.parametrize(
    "document",
    [
        {"domain": "interval", "family": "constant"},
        {"domain": "interval", "family": "jacobi", "alpha": 0.5, "beta": 0.5},
    ],
)
def test_sandwich_ratio_stable_in_n(document: dict) -> None:
    w = WeightSpec.model_validate(document)
    reports = [sandwich_check(w, n, doubling_constant=8.0) for n in [4, 8, 16, 32, 64]]
    assert all(r.lower_holds for r in reports)
    factors = [r.factor_needed for r in reports]
    assert max(factors) / min(factors) <= 2.0
