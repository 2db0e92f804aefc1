"""Adaptive integration of scalar and vector valued integrands split at known singular abscissae."""

import logging
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad, quad_vec

from chebquad.errors import ChebQuadError
from chebquad.logging_chebquad import LOGGER


class IntegrationError(ChebQuadError):
    def __init__(self, msg: str, achieved_error: float) -> None:
        super().__init__(msg)
        self.achieved_error = achieved_error


ScalarIntegrand = Callable[[np.ndarray], np.ndarray]

_QUAD_LIMIT = 500


def split_points(a: float, b: float, breakpoints: Sequence[float]) -> list[float]:
    """Sorted edges of [a, b] with every breakpoint strictly inside inserted."""
    inner = sorted({float(p) for p in breakpoints if a < p < b})
    return [a, *inner, b]


def integrate_function(
    func: ScalarIntegrand,
    a: float,
    b: float,
    breakpoints: Sequence[float] = (),
    rel_tol: float = 1e-10,
    abs_tol: float = 0.0,
) -> tuple[float, float]:
    """Integrate a vectorised scalar function over [a, b].

    The range is split at `breakpoints` so that singular points only ever sit on panel ends, where the
    adaptive bisection of `quad` grades the mesh geometrically and its extrapolation absorbs algebraic
    endpoint behaviour.

    Parameters
    ----------
    func : ScalarIntegrand
        Vectorised integrand.
    a, b : float
        Integration limits. `b < a` returns the negated integral.
    breakpoints : Sequence[float]
        Abscissae where `func` is singular or non-smooth.
    rel_tol : float
        Relative error target.
    abs_tol : float
        Absolute error floor.

    Returns
    -------
    tuple[float, float]
        The integral and its absolute error estimate.

    Raises
    ------
    IntegrationError
        If any panel fails to reach the requested accuracy.
    """
    if a == b:
        return 0.0, 0.0
    if b < a:
        value, error = integrate_function(func, b, a, breakpoints=breakpoints, rel_tol=rel_tol, abs_tol=abs_tol)
        return -value, error

    def _scalar(x: float) -> float:
        return float(func(np.asarray([x], dtype=float))[0])

    edges = split_points(a, b, breakpoints)
    panel_abs_tol = abs_tol / (len(edges) - 1)
    total = 0.0
    total_error = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        out = quad(_scalar, left, right, epsabs=panel_abs_tol, epsrel=rel_tol, limit=_QUAD_LIMIT, full_output=1)
        value, error = float(out[0]), float(out[1])
        if not np.isfinite(value):
            LOGGER(exc_info=IntegrationError(f"non-finite integral on [{left}, {right}]", achieved_error=np.inf))
        if len(out) > 3 and error > max(rel_tol * abs(value), panel_abs_tol):
            achieved = error / abs(value) if value != 0 else np.inf
            LOGGER(
                exc_info=IntegrationError(
                    f"integration on [{left}, {right}] did not converge: {out[3]}",
                    achieved_error=achieved,
                )
            )
        total += value
        total_error += error
    LOGGER(f"integrated [{a}, {b}] over {len(edges) - 1} panels: {total=} {total_error=}", level=logging.DEBUG)
    return total, total_error


def integrate_vector(
    func: Callable[[float], np.ndarray],
    a: float,
    b: float,
    breakpoints: Sequence[float] = (),
    rel_tol: float = 1e-10,
    abs_tol: float = 0.0,
) -> np.ndarray:
    """Integrate a vector valued function with a shared adaptive mesh.

    The error target is relative to the max-norm of the result, so components that integrate to zero are
    accurate to `rel_tol` times the largest component. `abs_tol` is a floor below which roundoff-limited
    panels are accepted.
    """
    edges = split_points(a, b, breakpoints)
    total: np.ndarray | None = None
    panel_abs_tol = abs_tol / (len(edges) - 1)
    for left, right in zip(edges[:-1], edges[1:]):
        value, error, info = quad_vec(
            func, left, right, epsabs=panel_abs_tol, epsrel=rel_tol, norm="max", limit=10_000, full_output=True
        )
        value = np.asarray(value, dtype=float)
        if not info.success and error > max(rel_tol * float(np.max(np.abs(value))), panel_abs_tol, 1e-300):
            LOGGER(
                exc_info=IntegrationError(
                    f"vector integration on [{left}, {right}] did not converge: {info.message}",
                    achieved_error=float(error),
                )
            )
        total = value if total is None else total + value
    assert total is not None
    return total
