from typing import Callable

import numpy as np
from scipy.integrate import trapezoid


def trapezoid_oracle(func: Callable[[np.ndarray], np.ndarray], a: float, b: float, points: int = 1_000_001) -> float:
    """Brute-force composite trapezoid value used as an independent reference."""
    x = np.linspace(a, b, points)
    return float(trapezoid(func(x), x))


def equispaced_circle_nodes(count: int) -> tuple[float, ...]:
    return tuple(-np.pi + 2.0 * np.pi * np.arange(count) / count)


def chebyshev_points(count: int) -> tuple[float, ...]:
    j = np.arange(1, count + 1)
    return tuple(np.cos((2 * j - 1) * np.pi / (2 * count)))


CONSTANT_CIRCLE = {"domain": "circle", "family": "constant"}
CHEBYSHEV_INTERVAL = {"domain": "interval", "family": "jacobi", "alpha": -0.5, "beta": -0.5}
