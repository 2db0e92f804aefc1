"""Node-count upper bounds: the supremum search over nonnegative polynomials and the explicit bounds."""

import logging
import math
from typing import Sequence

import dask
import numpy as np
from pydantic import Field
from scipy.linalg import toeplitz
from scipy.optimize import minimize

from chebquad.base import CqBaseModel
from chebquad.bounds.sharpness import r_trig
from chebquad.errors import PreconditionError
from chebquad.logging_chebquad import LOGGER, log_it
from chebquad.shared import TWO_PI, compute_ordered, spawn_rngs
from chebquad.trig.norms import integrate_against, l1_norm, weight_moments
from chebquad.trig.poly import NonnegParam, realize_nonneg_coeffs
from chebquad.weight.spec import Domain, FamilyKey, WeightSpec

Interval = tuple[float, float]

# Roundoff allowed when an excluded set sits exactly at its measure budget.
_BUDGET_SLACK = 1e-12


class KaneSearchOptions(CqBaseModel):
    restarts: int = Field(default=16, ge=1, description="Number of optimizer starts. Start 0 is a translated Fejer kernel.")
    iters: int = Field(default=200, ge=1, description="Iteration budget per start.")
    seed: int = Field(default=0, description="Seed for the random starts.")
    grid_factor: int = Field(default=32, ge=4, description="Sampling points per unit degree for the inner objective.")


class KaneSupEstimate(CqBaseModel):
    n: int
    sup_estimate: float = Field(
        description="Ratio attained by an explicit nonnegative polynomial, a lower estimate of the supremum."
    )
    node_bound: int
    best_param: NonnegParam
    low_confidence: bool = Field(description="True if no start improved on its initial polynomial.")
    restarts: int


def kane_node_bound(total_mass: float, sup_estimate: float) -> int:
    return int(math.floor(0.5 * total_mass * sup_estimate)) + 1


class _RatioObjective:
    """Negated derivative-mass ratio of |g|^2 and its gradient in the real and imaginary parts of g's coefficients.

    The numerator is a periodic trapezoid sum of |p'|. The denominator is the exact Toeplitz form built
    from the weight moments.
    """

    def __init__(self, w: WeightSpec, n: int, grid_factor: int) -> None:
        mu_cos, mu_sin = weight_moments(w, n)
        moments = mu_cos + 1j * mu_sin
        self.n = n
        self.k = np.arange(n + 1, dtype=float)
        self.toeplitz = toeplitz(np.conj(moments), moments)
        points = grid_factor * (n + 1)
        theta = np.linspace(-np.pi, np.pi, points, endpoint=False)
        self.basis = np.exp(1j * np.multiply.outer(theta, self.k))
        self.step = TWO_PI / points

    def split(self, x: np.ndarray) -> np.ndarray:
        return x[: self.n + 1] + 1j * x[self.n + 1 :]

    def __call__(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        c = self.split(x)
        g = self.basis @ c
        g_prime = self.basis @ (1j * self.k * c)
        p_prime = 2.0 * np.real(np.conj(g) * g_prime)
        signs = np.sign(p_prime)
        numerator = self.step * float(np.sum(np.abs(p_prime)))
        forward = np.conj(self.basis).T @ (signs * g_prime)
        backward = self.basis.T @ (signs * np.conj(g))
        grad_numerator = 2.0 * self.step * np.concatenate(
            [np.real(forward + 1j * self.k * backward), np.real(-1j * forward - self.k * backward)]
        )
        tc = self.toeplitz @ c
        denominator = float(np.real(np.conj(c) @ tc))
        grad_denominator = 2.0 * np.concatenate([np.real(tc), np.imag(tc)])
        ratio = numerator / denominator
        grad = (grad_numerator * denominator - numerator * grad_denominator) / denominator**2
        return -ratio, -grad


def exact_ratio(w: WeightSpec, coeffs: np.ndarray) -> float:
    """Derivative L1 norm over weighted integral for |sum c_k e^{ikt}|^2."""
    p = realize_nonneg_coeffs(coeffs)
    denominator = integrate_against(p, w)
    if denominator <= 0:
        return 0.0
    return l1_norm(p.derivative()) / denominator


def fejer_start(n: int, center: float) -> np.ndarray:
    """Coefficients whose squared modulus is F_m(t - center) with m = n // 2."""
    m = n // 2
    coeffs = np.zeros(n + 1, dtype=complex)
    j = np.arange(2 * m + 1)
    coeffs[: 2 * m + 1] = np.exp(-1j * j * center) / (2 * m + 1)
    return coeffs


def _run_start(objective: _RatioObjective, w: WeightSpec, start: np.ndarray, iters: int) -> tuple[np.ndarray, float, float]:
    x0 = np.concatenate([start.real, start.imag])
    x0 = x0 / np.linalg.norm(x0)
    result = minimize(objective, x0, jac=True, method="L-BFGS-B", options={"maxiter": iters})
    start_ratio = exact_ratio(w, objective.split(x0))
    final = objective.split(result.x)
    final_ratio = exact_ratio(w, final) if np.any(final != 0) else 0.0
    if final_ratio < start_ratio:
        return objective.split(x0), start_ratio, start_ratio
    return final, final_ratio, start_ratio


@log_it
def kane_sup(w: WeightSpec, n: int, options: KaneSearchOptions | None = None, center: float | None = None) -> KaneSupEstimate:
    """Multi-start ascent of the derivative-mass ratio over nonnegative polynomials of degree n.

    Parameters
    ----------
    w : WeightSpec
        Circle weight.
    n : int
        Polynomial degree.
    options : KaneSearchOptions | None
        Search budget and seed.
    center : float | None
        Centre of the Fejer start. Defaults to the window-mass minimizer.
    """
    if n < 1:
        LOGGER(exc_info=PreconditionError(f"n must be positive: {n=}"))
    if w.domain != Domain.CIRCLE:
        LOGGER(exc_info=PreconditionError("kane_sup requires a circle weight"))
    options = KaneSearchOptions() if options is None else options
    center = r_trig(w, n).minimizer if center is None else center
    objective = _RatioObjective(w, n, options.grid_factor)

    starts = [fejer_start(n, center)]
    for rng in spawn_rngs(options.seed, options.restarts - 1):
        starts.append(rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1))
    tasks = [dask.delayed(_run_start)(objective, w, start, options.iters) for start in starts]
    outcomes = compute_ordered(tasks)

    best_index = int(np.argmax([ratio for _, ratio, _ in outcomes]))
    best_coeffs, best_ratio, _ = outcomes[best_index]
    improved = any(ratio > start_ratio * (1.0 + 1e-9) for _, ratio, start_ratio in outcomes)
    low_confidence = best_ratio <= 0.0 or not improved
    if low_confidence:
        LOGGER(f"kane_sup {n=}: no start improved its initial polynomial", level=logging.WARNING)
    estimate = KaneSupEstimate(
        n=n,
        sup_estimate=best_ratio,
        node_bound=kane_node_bound(w.total_mass, best_ratio),
        best_param=NonnegParam.from_complex(best_coeffs),
        low_confidence=low_confidence,
        restarts=options.restarts,
    )
    LOGGER(f"kane_sup {n=}: sup>={estimate.sup_estimate} bound={estimate.node_bound} (start {best_index})", level=logging.DEBUG)
    return estimate


def bernstein_mt_node_bound(w: WeightSpec, n: int, mt_constant: float, r_value: float | None = None) -> int:
    """Node bound from the chain I int|p'| <= I n int|p| <= C R int p W, with an empirical averaging constant C."""
    r_value = r_trig(w, n).value if r_value is None else r_value
    return kane_node_bound(w.total_mass, n * r_value * mt_constant / w.total_mass)


def _validate_intervals(intervals: Sequence[Interval]) -> list[Interval]:
    merged: list[Interval] = []
    for lo, hi in sorted((float(lo), float(hi)) for lo, hi in intervals):
        if hi <= lo:
            LOGGER(exc_info=PreconditionError(f"excluded interval must have positive length: {(lo, hi)}"))
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    return merged


def _covered(points: np.ndarray, intervals: Sequence[Interval], period: float | None) -> np.ndarray:
    covered = np.zeros(points.shape, dtype=bool)
    for lo, hi in intervals:
        if period is None:
            covered |= (points >= lo) & (points <= hi)
        else:
            offset = np.mod(points - lo, period)
            covered |= offset <= hi - lo
    return covered


def essinf_off(w: WeightSpec, excluded: Sequence[Interval] = (), samples: int = 1 << 14) -> float:
    """Essential infimum of a circle weight outside `excluded`. Constant and stretched exponential weights use closed forms."""
    merged = _validate_intervals(excluded)
    family = w.family
    if family.key == FamilyKey.CONSTANT:
        return float(family.density(np.zeros(1))[0])
    if family.key == FamilyKey.STRETCHED_EXPONENTIAL:
        gap = 0.0
        for lo, hi in merged:
            if lo < 0.0 < hi:
                gap = min(-lo, hi)
        return float(family.density(np.asarray([gap]))[0])
    theta = np.linspace(-np.pi, np.pi, samples, endpoint=False)
    keep = ~_covered(theta, merged, TWO_PI)
    if not np.any(keep):
        LOGGER(exc_info=PreconditionError("excluded set covers the whole circle"))
    return float(np.min(w.density(theta[keep])))


def _excluded_budget(n: int, eta: float, span: float) -> float:
    return (1.0 - eta) ** 2 * span / (2 * n + 1)


def default_exclusion(w: WeightSpec, n: int, eta: float, samples: int = 1 << 14) -> list[Interval]:
    """Largest admissible excluded interval, centred where the weight (or sqrt(1 - t^2) w(t)) is smallest.

    Circle intervals may extend past -pi or pi. Interval exclusions are clipped to [-1, 1] in the arcsin pullback.
    """
    if not 0 < eta < 1:
        LOGGER(exc_info=PreconditionError(f"eta must lie in (0, 1): {eta=}"))
    family = w.family
    if w.domain == Domain.CIRCLE:
        if family.key == FamilyKey.CONSTANT:
            return []
        half = 0.5 * _excluded_budget(n, eta, TWO_PI)
        if family.key == FamilyKey.STRETCHED_EXPONENTIAL:
            centre = 0.0
        else:
            theta = np.linspace(-np.pi, np.pi, samples, endpoint=False)
            centre = float(theta[np.argmin(w.density(theta))])
        return [(centre - half, centre + half)]
    half = 0.5 * _excluded_budget(n, eta, np.pi)
    theta = np.linspace(0.0, np.pi, samples)
    phase = float(np.arcsin(np.cos(theta[np.argmin(family.lifted_density(theta))])))
    lo, hi = max(phase - half, -0.5 * np.pi), min(phase + half, 0.5 * np.pi)
    return [(float(np.sin(lo)), float(np.sin(hi)))]


def general_upper_bound(w: WeightSpec, n: int, excluded: Sequence[Interval], eta: float) -> int | float:
    """ceil((1/eta) (I / essinf off D) n), or infinity when the weight vanishes off D."""
    if not 0 < eta < 1:
        LOGGER(exc_info=PreconditionError(f"eta must lie in (0, 1): {eta=}"))
    merged = _validate_intervals(excluded)
    measure = sum(hi - lo for lo, hi in merged)
    budget = _excluded_budget(n, eta, TWO_PI)
    if measure > budget * (1.0 + _BUDGET_SLACK):
        LOGGER(exc_info=PreconditionError(f"excluded set too large: {measure=} > {budget=}"))
    floor_value = essinf_off(w, merged)
    if floor_value <= 0:
        LOGGER("weight vanishes off the excluded set; upper bound is infinite", level=logging.DEBUG)
        return math.inf
    return int(math.ceil(w.total_mass / floor_value * n / eta))


def interval_upper_bound(w: WeightSpec, n: int, excluded: Sequence[Interval], eta: float, samples: int = 1 << 14) -> int | float:
    """ceil((2/eta) (I / essinf sqrt(1 - t^2) w(t) off D) n) with D measured in the arccos pullback."""
    if not 0 < eta < 1:
        LOGGER(exc_info=PreconditionError(f"eta must lie in (0, 1): {eta=}"))
    if w.domain != Domain.INTERVAL:
        LOGGER(exc_info=PreconditionError("interval_upper_bound requires an interval weight"))
    merged = _validate_intervals(excluded)
    if any(lo < -1.0 or hi > 1.0 for lo, hi in merged):
        LOGGER(exc_info=PreconditionError("excluded intervals must lie in [-1, 1]"))
    measure = sum(float(np.arcsin(hi) - np.arcsin(lo)) for lo, hi in merged)
    budget = _excluded_budget(n, eta, np.pi)
    if measure > budget * (1.0 + _BUDGET_SLACK):
        LOGGER(exc_info=PreconditionError(f"excluded set too large: {measure=} > {budget=}"))
    theta = np.linspace(0.0, np.pi, samples)
    keep = ~_covered(np.cos(theta), merged, None)
    floor_value = float(np.min(w.family.lifted_density(theta[keep])))
    if floor_value <= 0:
        LOGGER("sqrt(1 - t^2) w(t) vanishes off the excluded set; upper bound is infinite", level=logging.DEBUG)
        return math.inf
    return int(math.ceil(2.0 * w.total_mass / floor_value * n / eta))
