"""Window masses, averaged weights and the interval window width."""

import numpy as np

from chebquad.errors import PreconditionError
from chebquad.logging_chebquad import LOGGER
from chebquad.weight.spec import Domain, WeightSpec


def integrate(w: WeightSpec, a: float, b: float, tol: float | None = None) -> float:
    """Integral of `w` over [a, b]. Interval weights are zero outside [-1, 1]."""
    return w.integrate(a, b, tol=tol)


def window_mass(w: WeightSpec, x: float, delta: float, tol: float | None = None) -> float:
    """Mass of `w` on [x - delta, x + delta]. Circle windows of half-width at least pi return the total mass."""
    if delta < 0:
        LOGGER(exc_info=PreconditionError(f"window half-width must be nonnegative: {delta=}"))
    if delta == 0:
        return 0.0
    if w.domain == Domain.CIRCLE and delta >= np.pi:
        return w.total_mass
    return w.integrate(x - delta, x + delta, tol=tol)


def averaged_weight(w: WeightSpec, n: int, x: float, tol: float | None = None) -> float:
    """n times the mass of `w` on the window of half-width 1/n around `x`."""
    if n < 1:
        LOGGER(exc_info=PreconditionError(f"n must be positive: {n=}"))
    return n * window_mass(w, x, 1.0 / n, tol=tol)


def delta_n(x: np.ndarray | float, n: int) -> np.ndarray:
    """Interval window half-width (sqrt(1 - x^2) + 1/n) / n."""
    if n < 1:
        LOGGER(exc_info=PreconditionError(f"n must be positive: {n=}"))
    x = np.asarray(x, dtype=float)
    return (np.sqrt(np.clip(1.0 - x**2, 0.0, None)) + 1.0 / n) / n
