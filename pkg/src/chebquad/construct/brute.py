"""Exhaustive small-instance oracle for the minimal equal-weight node count."""

import logging

import dask
import numpy as np
from pydantic import Field

from chebquad.base import CqBaseModel
from chebquad.construct.moment import WeightVanishesError, equipartition_init
from chebquad.construct.quadrature import Quadrature, verify
from chebquad.construct.solver import MomentSystem, damped_least_squares
from chebquad.errors import PreconditionError
from chebquad.logging_chebquad import LOGGER, log_it
from chebquad.shared import TWO_PI, compute_ordered, spawn_rngs
from chebquad.weight.spec import Domain, WeightSpec

MAX_DEGREE = 3
MAX_NODES = 8
MAX_GRID = 64


class BruteForceResult(CqBaseModel):
    n: int
    min_nodes: int | None = Field(description="Smallest feasible node count found, None if none up to the cap.")
    n_max: int
    grid: int
    best_residuals: tuple[float, ...] = Field(description="Best verify residual reached for N = 1..n_max.")
    tol: float


def _grid_starts(base: np.ndarray, grid: int, seed: int) -> list[np.ndarray]:
    """Rotations of the seed nodes by grid steps, then random multisets of grid points."""
    step = TWO_PI / grid
    rotations = [base + k * step for k in range(grid // 2)]
    points = -np.pi + step * np.arange(grid)
    multisets = [rng.choice(points, size=base.size, replace=True) for rng in spawn_rngs(seed, grid - len(rotations))]
    return rotations + multisets


@log_it
def brute_force_min_N(
    w: WeightSpec,
    n: int,
    n_max: int,
    grid: int,
    tol: float = 1e-6,
    seed: int = 0,
    max_iter: int = 100,
) -> BruteForceResult:
    """Smallest N <= n_max for which a grid start polished by damped least squares verifies at degree n.

    Infeasibility is empirical. A None result means no start reached `tol`.
    """
    if w.domain != Domain.CIRCLE:
        LOGGER(exc_info=PreconditionError("brute_force_min_N requires a circle weight"))
    if not (1 <= n <= MAX_DEGREE and 1 <= n_max <= MAX_NODES and 1 <= grid <= MAX_GRID):
        limits = f"{n=} (<= {MAX_DEGREE}), {n_max=} (<= {MAX_NODES}), {grid=} (<= {MAX_GRID})"
        LOGGER(exc_info=PreconditionError(f"instance too large: {limits}"))

    system = MomentSystem(w, n)
    best_residuals: list[float] = []
    for node_count in range(1, n_max + 1):
        try:
            base = equipartition_init(w, node_count)
        except WeightVanishesError:
            base = -np.pi + TWO_PI * (np.arange(node_count) + 0.5) / node_count
        starts = _grid_starts(base, grid, seed)
        tasks = [dask.delayed(damped_least_squares)(system, start, max_iter, 1e-2 * tol) for start in starts]
        best = np.inf
        for nodes, _ in compute_ordered(tasks):
            candidate = Quadrature(domain=Domain.CIRCLE, degree=n, nodes=tuple(nodes), weight=w.total_mass / node_count)
            best = min(best, verify(candidate, w, tol=tol).max_residual)
        best_residuals.append(best)
        LOGGER(f"brute force {n=} N={node_count}: best residual {best:.3e}", level=logging.DEBUG)
        if best <= tol:
            return BruteForceResult(
                n=n, min_nodes=node_count, n_max=n_max, grid=grid, best_residuals=tuple(best_residuals), tol=tol
            )
    return BruteForceResult(n=n, min_nodes=None, n_max=n_max, grid=grid, best_residuals=tuple(best_residuals), tol=tol)
