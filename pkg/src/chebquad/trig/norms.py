"""Norms of trigonometric polynomials and their integrals against weights."""

import logging
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from chebquad.errors import ChebQuadError, PreconditionError
from chebquad.logging_chebquad import LOGGER
from chebquad.settings import SETTINGS
from chebquad.shared import TWO_PI, wrap_angle
from chebquad.trig.poly import TrigPoly
from chebquad.weight.integrate import integrate_function, integrate_vector
from chebquad.weight.spec import Domain, WeightSpec


class NodeCountError(ChebQuadError): ...


# Companion roots this close to the unit circle are kept as split points. Extra split points are harmless.
_UNIT_CIRCLE_SLACK = 1e-3
_MOMENT_ABS_FLOOR = 1e-12


def _grid_size(degree: int) -> int:
    return max(64, 16 * (degree + 1))


def real_roots(p: TrigPoly) -> np.ndarray:
    """Sorted candidate real zeros of `p` in [-pi, pi).

    Unit-circle eigenvalues of the companion matrix of z^n p(z) are merged with sign changes found on a
    sampling grid and refined by bracketing.
    """
    if p.degree == 0:
        return np.empty(0)
    candidates: list[float] = []
    coeffs = p.exponential()
    try:
        roots = np.roots(coeffs[::-1])
        near = np.abs(np.abs(roots) - 1.0) < _UNIT_CIRCLE_SLACK
        candidates.extend(np.angle(roots[near]).tolist())
    except np.linalg.LinAlgError:
        LOGGER("companion eigenvalues failed; using grid brackets only", level=logging.DEBUG)

    grid = np.linspace(-np.pi, np.pi, _grid_size(p.degree) + 1)

    def _scalar(t: float) -> float:
        return float(p.eval(np.asarray([t]))[0])

    values = np.asarray([_scalar(t) for t in grid])
    zero_level = 64.0 * np.finfo(float).eps * max(float(np.sum(np.abs(coeffs))), 1e-300)
    for i, (left, right) in enumerate(zip(grid[:-1], grid[1:])):
        f_left, f_right = values[i], values[i + 1]
        if abs(f_left) <= zero_level:
            candidates.append(float(left))
        elif abs(f_right) <= zero_level:
            continue
        elif f_left * f_right < 0:
            candidates.append(brentq(_scalar, left, right, xtol=1e-15))
    if not candidates:
        return np.empty(0)
    return np.unique(wrap_angle(np.asarray(candidates)))


def _arcs_keep_sign(p: TrigPoly, edges: np.ndarray) -> bool:
    samples = edges[:-1, None] + np.diff(edges)[:, None] * np.linspace(0.05, 0.95, 7)[None, :]
    values = p.eval(samples)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    noise = 1e-12 * max(scale, 1e-300)
    mixed = (np.max(values, axis=1) > noise) & (np.min(values, axis=1) < -noise)
    return not bool(np.any(mixed))


def l1_norm(p: TrigPoly, tol: float | None = None) -> float:
    """Integral of |p| over one period.

    Integrates exactly through the antiderivative between consecutive zeros, falling back to adaptive
    integration when an arc between located zeros still changes sign.
    """
    tol = SETTINGS.chebquad_default_tol if tol is None else tol
    if p.degree == 0:
        return TWO_PI * abs(p.a[0])
    roots = real_roots(p)
    if roots.size == 0:
        return abs(float(TWO_PI * p.a[0]))
    edges = np.concatenate([roots, [roots[0] + TWO_PI]])
    if not _arcs_keep_sign(p, edges):
        LOGGER("sign change missed between located zeros; falling back to adaptive integration", level=logging.DEBUG)
        value, _ = integrate_function(lambda t: np.abs(p.eval(t)), edges[0], edges[-1], breakpoints=edges[1:-1], rel_tol=tol)
        return value
    primitive = p.antiderivative_values(edges)
    return float(np.sum(np.abs(np.diff(primitive))))


@lru_cache(maxsize=256)
def weight_moments(w: WeightSpec, n: int, tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Moments of cos(kt) and sin(kt), k = 0..n, against a circle weight.

    Returns
    -------
    tuple[np.ndarray, np.ndarray]
        Cosine moments and sine moments, each of length n + 1. The sine moment at k = 0 is zero.
    """
    if w.domain != Domain.CIRCLE:
        LOGGER(exc_info=PreconditionError("moments are defined for circle weights"))
    tol = SETTINGS.chebquad_default_tol if tol is None else tol
    k = np.arange(n + 1, dtype=float)

    def _integrand(theta: float) -> np.ndarray:
        density = float(w.density(np.asarray([theta]))[0])
        return density * np.concatenate([np.cos(k * theta), np.sin(k * theta)])

    # High-order moments of smooth weights are roundoff limited, so the target has an absolute floor.
    abs_floor = _MOMENT_ABS_FLOOR * w.total_mass
    moments = integrate_vector(
        _integrand, -np.pi, np.pi, breakpoints=w.breakpoints_in(-np.pi, np.pi), rel_tol=tol, abs_tol=abs_floor
    )
    LOGGER(f"computed {n=} moments of {w.family.key} weight", level=logging.DEBUG)
    return moments[: n + 1], moments[n + 1 :]


def integrate_against(p: TrigPoly, w: WeightSpec, tol: float | None = None) -> float:
    """Integral of p times a circle weight over one period, through cached weight moments."""
    mu_cos, mu_sin = weight_moments(w, p.degree, tol)
    return float(p.a @ mu_cos + p.b @ mu_sin)


def equispaced_integral(q: TrigPoly, n: int) -> float:
    """2pi/(2n+1) times the sum of q over the 2n+1 equispaced nodes 2 pi j/(2n+1). Exact when 2n >= deg q."""
    if 2 * n < q.degree:
        LOGGER(exc_info=NodeCountError(f"{2 * n + 1} nodes cannot integrate degree {q.degree} exactly"))
    count = 2 * n + 1
    nodes = TWO_PI * np.arange(count) / count
    return float(TWO_PI / count * np.sum(q.eval(nodes)))


def remez_measure(p: TrigPoly, n: int, s: float, grid: int = 1 << 16) -> float:
    """Measure of the set where |p| >= max|p| exp(-4 n s), estimated on a uniform grid."""
    theta = np.linspace(-np.pi, np.pi, grid, endpoint=False)
    magnitude = np.abs(p.eval(theta))
    threshold = float(np.max(magnitude)) * np.exp(-4.0 * n * s)
    return float(TWO_PI * np.count_nonzero(magnitude >= threshold) / grid)
