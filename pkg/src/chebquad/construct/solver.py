"""Damped least-squares moment matching for equal-weight circle quadratures."""

import logging

import dask
import numpy as np
from pydantic import Field
from scipy.linalg import solve

from chebquad.base import CqBaseModel
from chebquad.construct.moment import basis_moments, equipartition_init
from chebquad.construct.quadrature import Quadrature, verify
from chebquad.errors import ChebQuadError, PreconditionError
from chebquad.logging_chebquad import LOGGER, log_it
from chebquad.settings import SETTINGS
from chebquad.shared import TWO_PI, compute_ordered, spawn_rngs, wrap_angle
from chebquad.weight.spec import Domain, WeightSpec


class ConvergenceError(ChebQuadError):
    def __init__(self, msg: str, best_residual: float) -> None:
        super().__init__(msg)
        self.best_residual = best_residual


_MAX_HALVINGS = 12
_MAX_DAMPING = 1e10


class SolverOptions(CqBaseModel):
    max_iter: int = Field(default=200, ge=1, description="Iteration budget per restart.")
    restarts: int = Field(default=8, ge=1, description="Restart 0 starts from the seed nodes, the rest are jittered copies.")
    seed: int = 0
    jitter: float = Field(default=0.3, ge=0, description="Jitter scale as a fraction of the mean node spacing.")
    target: float = Field(default=1e-9, gt=0, description="Verify residual a solution must reach.")


class MomentSystem:
    """Normalised residual (1/N) sum_j phi(t_j) - mu / I and its Jacobian for a fixed weight and degree."""

    def __init__(self, w: WeightSpec, n: int) -> None:
        self.n = n
        self.k = np.arange(1, n + 1, dtype=float)
        self.total_mass = w.total_mass
        moments = basis_moments(w, n) if n > 0 else np.empty(0)
        self.target = moments / self.total_mass
        self.scale = self.total_mass / (1.0 + np.abs(moments))

    def residual(self, nodes: np.ndarray) -> np.ndarray:
        angles = np.multiply.outer(nodes, self.k)
        means = np.stack([np.cos(angles).mean(axis=0), np.sin(angles).mean(axis=0)], axis=-1).ravel()
        return means - self.target

    def jacobian(self, nodes: np.ndarray) -> np.ndarray:
        angles = np.multiply.outer(nodes, self.k)
        d_cos = -self.k[None, :] * np.sin(angles)
        d_sin = self.k[None, :] * np.cos(angles)
        return np.stack([d_cos, d_sin], axis=-1).reshape(nodes.size, 2 * self.n).T / nodes.size

    def verify_scale(self, residual: np.ndarray) -> float:
        """Largest residual in the units reported by `verify`."""
        return float(np.max(np.abs(residual) * self.scale)) if residual.size else 0.0


def damped_least_squares(system: MomentSystem, nodes: np.ndarray, max_iter: int, stop: float) -> tuple[np.ndarray, float]:
    """Levenberg-Marquardt on the moment residual with step halving. Nodes are wrapped and sorted after every step.

    Uses the minimum-norm form J^T (J J^T + lambda s I)^-1 r so under- and over-determined systems share one path.
    """
    nodes = np.sort(wrap_angle(nodes))
    residual = system.residual(nodes)
    cost = float(residual @ residual)
    damping = 1e-3
    for iteration in range(max_iter):
        if system.verify_scale(residual) <= stop:
            break
        jac = system.jacobian(nodes)
        normal = jac @ jac.T
        scale = max(float(np.trace(normal)) / normal.shape[0], 1e-300)
        step = -jac.T @ solve(normal + damping * scale * np.eye(normal.shape[0]), residual, assume_a="pos")
        fraction = 1.0
        for _ in range(_MAX_HALVINGS):
            trial = np.sort(wrap_angle(nodes + fraction * step))
            trial_residual = system.residual(trial)
            trial_cost = float(trial_residual @ trial_residual)
            if trial_cost < cost:
                nodes, residual, cost = trial, trial_residual, trial_cost
                damping = max(damping / 3.0, 1e-12)
                break
            fraction *= 0.5
        else:
            damping *= 10.0
            if damping > _MAX_DAMPING:
                LOGGER(f"damping exhausted after {iteration} iterations", level=logging.DEBUG)
                break
    return nodes, system.verify_scale(residual)


def _restart_nodes(base: np.ndarray, options: SolverOptions) -> list[np.ndarray]:
    spacing = TWO_PI / base.size
    starts = [base]
    for rng in spawn_rngs(options.seed, options.restarts - 1):
        starts.append(base + options.jitter * spacing * rng.standard_normal(base.size))
    return starts


@log_it
def solve_quadrature(
    w: WeightSpec,
    n: int,
    node_count: int,
    init: np.ndarray | None = None,
    options: SolverOptions | None = None,
) -> Quadrature:
    """Find `node_count` equal-weight nodes exact for circle polynomials of degree n.

    Restarts run in batches of `SETTINGS.chebquad_threads`. The first restart index that verifies wins.

    Raises
    ------
    ConvergenceError
        If no restart reaches the verify target. Carries the best residual seen.
    """
    if w.domain != Domain.CIRCLE:
        LOGGER(exc_info=PreconditionError("solve_quadrature requires a circle weight"))
    if node_count < 1 or n < 0:
        LOGGER(exc_info=PreconditionError(f"invalid problem size: {n=} {node_count=}"))
    options = SolverOptions() if options is None else options
    base = equipartition_init(w, node_count) if init is None else np.asarray(init, dtype=float)
    if base.size != node_count:
        LOGGER(exc_info=PreconditionError(f"init has {base.size} nodes, expected {node_count}"))
    system = MomentSystem(w, n)
    weight = w.total_mass / node_count
    stop = 1e-2 * options.target

    starts = _restart_nodes(base, options)
    best = np.inf
    batch = SETTINGS.chebquad_threads
    for first in range(0, len(starts), batch):
        tasks = [
            dask.delayed(damped_least_squares)(system, start, options.max_iter, stop) for start in starts[first : first + batch]
        ]
        for offset, (nodes, _) in enumerate(compute_ordered(tasks)):
            candidate = Quadrature(domain=Domain.CIRCLE, degree=n, nodes=tuple(nodes), weight=weight)
            report = verify(candidate, w, tol=options.target)
            best = min(best, report.max_residual)
            if report.accepted:
                LOGGER(f"solved {n=} N={node_count} on restart {first + offset}: residual {report.max_residual:.3e}")
                return candidate
    LOGGER(exc_info=ConvergenceError(f"no restart reached {options.target=} for {n=} N={node_count}", best_residual=best))
    raise AssertionError("unreachable")
