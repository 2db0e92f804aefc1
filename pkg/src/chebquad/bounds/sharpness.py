"""Sharpness functionals: total mass over the smallest resolution-1/n window mass."""

import logging
from typing import Callable

import numpy as np
from pydantic import Field
from scipy.optimize import minimize_scalar

from chebquad.base import CqBaseModel
from chebquad.errors import PreconditionError
from chebquad.logging_chebquad import LOGGER, log_it
from chebquad.shared import spawn_rngs, wrap_angle
from chebquad.weight.spec import Domain, WeightSpec
from chebquad.weight.window import averaged_weight, delta_n, window_mass

_TIE_RTOL = 1e-12


class RFunctional(CqBaseModel):
    value: float = Field(description="Total mass over the minimal window mass. Infinite if some window has zero mass.")
    minimizer: float = Field(description="Window centre attaining the minimal mass.")
    min_mass: float


class SandwichReport(CqBaseModel):
    r_interval: float
    r_trig: float
    doubling_constant: float
    lower_holds: bool = Field(description="Interval functional does not exceed the functional of the lifted weight.")
    upper_holds: bool = Field(description="Lifted functional is within 2 L^4 of the interval functional.")
    factor_needed: float = Field(description="Ratio r_trig / r_interval, the smallest factor making the upper comparison hold.")

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds


def locate_infimum(mass_at: Callable[[float], float], lo: float, hi: float, points: int, periodic: bool) -> tuple[float, float]:
    """Grid scan plus bounded golden-section refinement.

    Ties on the grid go to the smallest abscissa. The refined point replaces the grid point only if it is
    strictly smaller.
    """
    grid = np.linspace(lo, hi, points, endpoint=not periodic)
    masses = np.array([mass_at(float(x)) for x in grid])
    best = float(np.min(masses))
    j = int(np.flatnonzero(masses <= best * (1.0 + _TIE_RTOL))[0])
    x_best, m_best = float(grid[j]), float(masses[j])
    if m_best <= 0:
        return x_best, 0.0
    step = float(grid[1] - grid[0])
    left, right = x_best - step, x_best + step
    if not periodic:
        left, right = max(left, lo), min(right, hi)
    refined = minimize_scalar(mass_at, bounds=(left, right), method="bounded", options={"xatol": 1e-12})
    if refined.success and refined.fun < m_best * (1.0 - _TIE_RTOL):
        x_refined = float(wrap_angle(refined.x)) if periodic else float(refined.x)
        return x_refined, float(refined.fun)
    return x_best, m_best


@log_it
def r_trig(w: WeightSpec, n: int, tol: float | None = None) -> RFunctional:
    """Total mass of a circle weight over the least mass of a window of half-width 1/n."""
    if n < 1:
        LOGGER(exc_info=PreconditionError(f"n must be positive: {n=}"))
    if w.domain != Domain.CIRCLE:
        LOGGER(exc_info=PreconditionError("r_trig requires a circle weight"))
    x, mass = locate_infimum(lambda x: window_mass(w, x, 1.0 / n, tol=tol), -np.pi, np.pi, max(256, 8 * n), periodic=True)
    value = w.total_mass / mass if mass > 0 else np.inf
    LOGGER(f"r_trig {n=}: {value=} at {x=}", level=logging.DEBUG)
    return RFunctional(value=value, minimizer=x, min_mass=mass)


@log_it
def r_interval(w: WeightSpec, n: int, tol: float | None = None) -> RFunctional:
    """Total mass of an interval weight over the least mass of the window [x - Delta_n(x), x + Delta_n(x)]."""
    if n < 1:
        LOGGER(exc_info=PreconditionError(f"n must be positive: {n=}"))
    if w.domain != Domain.INTERVAL:
        LOGGER(exc_info=PreconditionError("r_interval requires an interval weight"))

    def _mass(x: float) -> float:
        half = float(delta_n(x, n))
        return w.integrate(x - half, x + half, tol=tol)

    x, mass = locate_infimum(_mass, -1.0, 1.0, max(256, 8 * n) + 1, periodic=False)
    value = w.total_mass / mass if mass > 0 else np.inf
    LOGGER(f"r_interval {n=}: {value=} at {x=}", level=logging.DEBUG)
    return RFunctional(value=value, minimizer=x, min_mass=mass)


def sandwich_check(w: WeightSpec, n: int, doubling_constant: float, tol: float | None = None) -> SandwichReport:
    """Compare the interval functional with the functional of the lifted weight."""
    interval_value = r_interval(w, n, tol=tol).value
    trig_value = r_trig(w.lift(), n, tol=tol).value
    return SandwichReport(
        r_interval=interval_value,
        r_trig=trig_value,
        doubling_constant=doubling_constant,
        lower_holds=bool(interval_value <= trig_value * (1.0 + 1e-8)),
        upper_holds=bool(trig_value <= 2.0 * doubling_constant**4 * interval_value),
        factor_needed=trig_value / interval_value,
    )


@log_it
def mt_ratio(w: WeightSpec, n: int, samples: int = 200, seed: int = 0, grid: int | None = None) -> float:
    """Largest sampled ratio of the integral of |p| against the averaged weight to the integral against `w`.

    Random p of degree n have normal coefficients. Both integrals use the periodic trapezoid rule on a grid
    fine enough for the kinks of |p|.
    """
    if w.domain != Domain.CIRCLE:
        LOGGER(exc_info=PreconditionError("mt_ratio requires a circle weight"))
    grid = max(1024, 32 * n) if grid is None else grid
    theta = np.linspace(-np.pi, np.pi, grid, endpoint=False)
    density = w.density(theta)
    averaged = np.array([averaged_weight(w, n, float(x)) for x in theta])
    (rng,) = spawn_rngs(seed, 1)
    k = np.arange(n + 1)
    angles = np.multiply.outer(theta, k)
    cos_basis, sin_basis = np.cos(angles), np.sin(angles)
    worst = 0.0
    for _ in range(samples):
        a = rng.standard_normal(n + 1)
        b = rng.standard_normal(n + 1)
        magnitude = np.abs(cos_basis @ a + sin_basis @ b)
        worst = max(worst, float(np.sum(magnitude * averaged) / np.sum(magnitude * density)))
    return worst
