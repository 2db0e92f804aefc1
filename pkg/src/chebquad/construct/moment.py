"""The moment map t -> I phi(t) - int phi W and mass-equipartition seeding."""

import logging

import numpy as np
from pydantic import Field
from scipy.optimize import brentq

from chebquad.base import CqBaseModel
from chebquad.errors import ChebQuadError, PreconditionError
from chebquad.logging_chebquad import LOGGER
from chebquad.shared import TWO_PI
from chebquad.trig.norms import weight_moments
from chebquad.weight.spec import Domain, WeightSpec


class WeightVanishesError(ChebQuadError): ...


MOMENT_TOL = 1e-13
CUMULATIVE_CELLS = 512


class MomentVector(CqBaseModel):
    """Entries ordered cos t, sin t, cos 2t, sin 2t, ..."""

    n: int = Field(ge=1)
    x: float
    entries: tuple[float, ...]


def _require_circle(w: WeightSpec) -> None:
    if w.domain != Domain.CIRCLE:
        LOGGER(exc_info=PreconditionError("the moment map is defined for circle weights"))


def basis_moments(w: WeightSpec, n: int) -> np.ndarray:
    """Weighted integrals of cos t, sin t, ..., cos nt, sin nt, interleaved."""
    mu_cos, mu_sin = weight_moments(w, n, MOMENT_TOL)
    return np.column_stack([mu_cos[1:], mu_sin[1:]]).ravel()


def moment_matrix(w: WeightSpec, n: int, nodes: np.ndarray) -> np.ndarray:
    """Moment map evaluated at every node, shape (len(nodes), 2n)."""
    _require_circle(w)
    k = np.arange(1, n + 1)
    angles = np.multiply.outer(np.asarray(nodes, dtype=float), k)
    basis = np.stack([np.cos(angles), np.sin(angles)], axis=-1).reshape(angles.shape[0], 2 * n)
    return w.total_mass * basis - basis_moments(w, n)[None, :]


def moment_map(w: WeightSpec, n: int, x: float) -> MomentVector:
    if n < 1:
        LOGGER(exc_info=PreconditionError(f"n must be positive: {n=}"))
    return MomentVector(n=n, x=x, entries=tuple(moment_matrix(w, n, np.asarray([x]))[0]))


def equipartition_init(w: WeightSpec, node_count: int) -> np.ndarray:
    """Mass medians of `node_count` consecutive equal-mass arcs starting at -pi.

    Raises
    ------
    WeightVanishesError
        If the weight has zero mass on a run of cells covering at least 1/64 of the circle.
    """
    _require_circle(w)
    if node_count < 1:
        LOGGER(exc_info=PreconditionError(f"node count must be positive: {node_count=}"))
    edges = np.linspace(-np.pi, np.pi, CUMULATIVE_CELLS + 1)
    cell_mass = np.array([w.integrate(lo, hi, tol=1e-12) for lo, hi in zip(edges[:-1], edges[1:])])
    _check_zero_runs(cell_mass)
    cumulative = np.concatenate([[0.0], np.cumsum(cell_mass)])
    total = cumulative[-1]
    if total <= 0:
        LOGGER(exc_info=WeightVanishesError("weight has zero total mass"))

    targets = (np.arange(node_count) + 0.5) * total / node_count
    medians = np.empty(node_count)
    for i, target in enumerate(targets):
        j = max(int(np.searchsorted(cumulative, target, side="left")) - 1, 0)
        left, right = edges[j], edges[j + 1]
        offset = target - cumulative[j]
        if offset <= 0:
            medians[i] = left
            continue
        if w.integrate(left, right, tol=1e-12) <= offset:
            medians[i] = right
            continue
        medians[i] = brentq(lambda t: w.integrate(left, t, tol=1e-12) - offset, left, right, xtol=1e-14)
    LOGGER(f"equipartition of {node_count} nodes", level=logging.DEBUG)
    return medians


def _check_zero_runs(cell_mass: np.ndarray) -> None:
    longest = run = 0
    for mass in np.concatenate([cell_mass, cell_mass]):
        run = run + 1 if mass <= 0 else 0
        longest = max(longest, run)
    if longest >= CUMULATIVE_CELLS // 64:
        arc = TWO_PI * min(longest, CUMULATIVE_CELLS) / CUMULATIVE_CELLS
        LOGGER(exc_info=WeightVanishesError(f"weight vanishes on an arc of length {arc:.4g}"))
