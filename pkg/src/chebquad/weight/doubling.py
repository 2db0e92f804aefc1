"""Grid estimates of the doubling constant."""

import logging
from typing import Sequence

import numpy as np
from pydantic import Field

from chebquad.base import CqBaseModel
from chebquad.errors import ChebQuadError, PreconditionError
from chebquad.logging_chebquad import LOGGER, log_it
from chebquad.weight.spec import Domain, WeightSpec
from chebquad.weight.window import window_mass


class NotDoublingError(ChebQuadError):
    def __init__(self, a: float, delta: float) -> None:
        super().__init__(f"not doubling at ({a=}, {delta=}): inner window has zero mass")
        self.a = a
        self.delta = delta


DEFAULT_A_POINTS = 512
DEFAULT_DELTA_LEVELS = 14

# Ratios growing over this many of the finest scales flag an unbounded doubling ratio.
_GROWTH_RUN = 3


class DoublingEstimate(CqBaseModel):
    """Largest doubled-window mass ratio seen on the grids. Always a lower estimate of the true constant."""

    value: float = Field(description="Estimated doubling constant.")
    a: float = Field(description="Window centre attaining the estimate.")
    delta: float = Field(description="Window half-width attaining the estimate.")
    grows: bool = Field(description="True if the ratio at the worst centre keeps increasing as delta shrinks.")


def default_a_grid(w: WeightSpec, points: int = DEFAULT_A_POINTS) -> np.ndarray:
    if w.domain == Domain.CIRCLE:
        return np.linspace(-np.pi, np.pi, points, endpoint=False)
    return np.linspace(-1.0, 1.0, points)


def default_delta_grid(w: WeightSpec, levels: int = DEFAULT_DELTA_LEVELS) -> np.ndarray:
    """Dyadic half-widths 2^-k (k = 1..levels), scaled by pi on the circle."""
    scale = np.pi if w.domain == Domain.CIRCLE else 1.0
    return scale * 2.0 ** -np.arange(1, levels + 1, dtype=float)


@log_it
def estimate_doubling_constant(
    w: WeightSpec,
    delta_grid: Sequence[float] | None = None,
    a_grid: Sequence[float] | None = None,
    tol: float | None = None,
) -> DoublingEstimate:
    """Maximize the window mass ratio over the supplied grids.

    Parameters
    ----------
    w : WeightSpec
        Weight on either domain.
    delta_grid : Sequence[float] | None
        Positive half-widths. Defaults to `default_delta_grid`.
    a_grid : Sequence[float] | None
        Window centres. Defaults to `default_a_grid`.
    tol : float | None
        Integration tolerance.

    Raises
    ------
    NotDoublingError
        If an inner window has zero mass at the coarsest half-width. Zero mass at a finer half-width is
        reported as unbounded growth instead.
    """
    deltas = np.sort(np.asarray(default_delta_grid(w) if delta_grid is None else delta_grid, dtype=float))[::-1]
    centres = np.asarray(default_a_grid(w) if a_grid is None else a_grid, dtype=float)
    if deltas.size == 0 or centres.size == 0:
        LOGGER(exc_info=PreconditionError("doubling grids must be non-empty"))
    if np.any(deltas <= 0):
        LOGGER(exc_info=PreconditionError("doubling half-widths must be positive"))

    ratios = np.empty((centres.size, deltas.size))
    for i, a in enumerate(centres):
        for j, delta in enumerate(deltas):
            inner = window_mass(w, float(a), float(delta), tol=tol)
            if inner <= 0 and j == 0:
                LOGGER(exc_info=NotDoublingError(float(a), float(delta)))
            # Positive at a coarser scale but zero here: the mass underflowed, so the ratio is unbounded.
            ratios[i, j] = window_mass(w, float(a), 2.0 * float(delta), tol=tol) / inner if inner > 0 else np.inf

    unbounded = ~np.isfinite(ratios)
    finite = np.where(unbounded, -np.inf, ratios)
    i_best, j_best = np.unravel_index(int(np.argmax(finite)), finite.shape)
    tail = ratios[i_best, -_GROWTH_RUN:]
    grows = bool(deltas.size >= _GROWTH_RUN and np.all(np.diff(tail) > 0) and j_best == deltas.size - 1)
    grows = grows or bool(np.any(unbounded))
    estimate = DoublingEstimate(
        value=float(ratios[i_best, j_best]), a=float(centres[i_best]), delta=float(deltas[j_best]), grows=grows
    )
    LOGGER(f"{estimate=}", level=logging.DEBUG)
    if grows:
        LOGGER(f"doubling ratio grows toward the finest scale at a={estimate.a}", level=logging.WARNING)
    return estimate
