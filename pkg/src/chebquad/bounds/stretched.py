"""Node-count growth for the stretched exponential weight exp(-|t|^-alpha)."""

import logging
import math
from enum import StrEnum, unique
from typing import Sequence

import dask
import numpy as np
from pydantic import Field
from scipy.optimize import curve_fit, minimize_scalar

from chebquad.base import CqBaseModel
from chebquad.errors import PreconditionError
from chebquad.logging_chebquad import LOGGER, log_it
from chebquad.shared import FitError, compute_ordered
from chebquad.trig.poly import fejer_closed_form, fejer_edge_value
from chebquad.weight.integrate import integrate_function
from chebquad.weight.spec import Domain, StretchedExponentialFamily, WeightSpec


@unique
class ParameterMode(StrEnum):
    """How the Fejer index m and power r are chosen for each n.

    Attributes
    ----------
    OPTIMIZED : str
        Best admissible pair with 2 m r <= n.
    EXPLICIT : str
        The closed-form choices in n and alpha, clamped to at least 1.
    """

    OPTIMIZED = "optimized"
    EXPLICIT = "explicit"


class StretchedExpPoint(CqBaseModel):
    n: int
    m: int
    r: int
    log_bound: float = Field(description="log of I / int F_m^r W, a lower estimate of the log node bound.")
    log_lower: float = Field(description="log of the certified node-count floor. Zero when no certificate applies.")
    log_upper: float = Field(description="log n^(1 + 1/(alpha+1)) + 13 n^(alpha/(alpha+1)), the explicit upper growth.")


class ScalingFit(CqBaseModel):
    alpha: float
    mode: ParameterMode
    exponent: float = Field(description="Fitted power beta in log N = c n^beta + d.")
    predicted: float = Field(description="alpha / (alpha + 1).")
    scale: float
    offset: float
    points: tuple[StretchedExpPoint, ...]


def stretched_exp_weight(alpha: float) -> WeightSpec:
    return WeightSpec(domain=Domain.CIRCLE, family=StretchedExponentialFamily(alpha=alpha))


def stretched_exp_peak(r: int, alpha: float) -> tuple[float, float]:
    """Numeric and closed-form maximum of t^(-2r) exp(-t^(-alpha)) over t > 0.

    The closed form is (2r / (e alpha))^(2r/alpha), attained at t = (alpha / 2r)^(1/alpha).
    """
    peak = (alpha / (2.0 * r)) ** (1.0 / alpha)
    result = minimize_scalar(
        lambda t: 2.0 * r * math.log(t) + t ** (-alpha), bounds=(peak / 8.0, 8.0 * peak), method="bounded", options={"xatol": 1e-12}
    )
    numeric = math.exp(-float(result.fun))
    closed = (2.0 * r / (math.e * alpha)) ** (2.0 * r / alpha)
    return numeric, closed


def explicit_parameters(alpha: float, n: int) -> tuple[int, int]:
    m = math.floor(6.0 ** (alpha / (alpha + 1.0)) * n ** (1.0 / (alpha + 1.0)) / 12.0)
    r = math.floor(min(6.0 ** (1.0 / (alpha + 1.0)), alpha / 6.0 ** (alpha + 1.0)) * n ** (alpha / (alpha + 1.0)))
    return max(m, 1), max(r, 1)


def _fejer_power_mass(w: WeightSpec, m: int, r: int, shifted_by_edge: bool = False, abs_tol: float = 1e-300) -> float:
    edge = fejer_edge_value(m)
    zeros = [2.0 * np.pi * k / (2 * m + 1) for k in range(1, min(m, 4) + 1)]
    breakpoints = [0.0, *zeros, *(-z for z in zeros)]

    def _integrand(theta: np.ndarray) -> np.ndarray:
        kernel = fejer_closed_form(m, theta)
        values = kernel**r * w.density(theta)
        return values * (kernel - edge) if shifted_by_edge else values

    value, _ = integrate_function(_integrand, -np.pi, np.pi, breakpoints=breakpoints, rel_tol=1e-10, abs_tol=abs_tol)
    return value


def _log_lower(w: WeightSpec, n: int, m: int) -> float:
    ell = n // (2 * m) - 1
    if ell < 1:
        return 0.0
    power_mass = _fejer_power_mass(w, m, ell)
    if power_mass <= 0 or _fejer_power_mass(w, m, ell, shifted_by_edge=True, abs_tol=1e-10 * power_mass) <= 0:
        return 0.0
    log_floor = math.log(w.total_mass) + ell * math.log(fejer_edge_value(m)) - math.log(power_mass)
    return max(log_floor, 0.0)


def stretched_exp_certificate(alpha: float, n: int, mode: ParameterMode = ParameterMode.OPTIMIZED) -> StretchedExpPoint:
    """Fejer-power bounds for one degree n."""
    w = stretched_exp_weight(alpha)
    log_mass = math.log(w.total_mass)
    if mode == ParameterMode.EXPLICIT:
        candidates = [explicit_parameters(alpha, n)]
    else:
        candidates = [(m, n // (2 * m)) for m in range(1, n // 2 + 1)]
    best: tuple[float, int, int] | None = None
    for m, r in candidates:
        power_mass = _fejer_power_mass(w, m, r)
        if power_mass <= 0:
            continue
        log_bound = log_mass - math.log(power_mass)
        if best is None or log_bound > best[0]:
            best = (log_bound, m, r)
    if best is None:
        LOGGER(exc_info=FitError(f"no admissible Fejer power for {alpha=} {n=}"))
    assert best is not None
    log_bound, m, r = best
    log_lower = max(_log_lower(w, n, m_) for m_ in range(1, n // 4 + 1)) if n >= 4 else 0.0
    log_upper = (1.0 + 1.0 / (alpha + 1.0)) * math.log(n) + 13.0 * n ** (alpha / (alpha + 1.0))
    point = StretchedExpPoint(n=n, m=m, r=r, log_bound=log_bound, log_lower=log_lower, log_upper=log_upper)
    LOGGER(f"{point=}", level=logging.DEBUG)
    return point


def _growth_model(n: np.ndarray, scale: float, exponent: float, offset: float) -> np.ndarray:
    return scale * n**exponent + offset


@log_it
def stretched_exp_scaling(alpha: float, n_list: Sequence[int], mode: ParameterMode = ParameterMode.OPTIMIZED) -> ScalingFit:
    """Fit log N = c n^beta + d to the per-n Fejer-power bounds and report beta."""
    if alpha <= 0:
        LOGGER(exc_info=PreconditionError(f"alpha must be positive: {alpha=}"))
    ns = [int(n) for n in n_list]
    if len(ns) < 4 or any(b <= a for a, b in zip(ns[:-1], ns[1:])) or ns[0] < 1:
        LOGGER(exc_info=FitError(f"need at least four increasing positive degrees: {ns=}"))
    tasks = [dask.delayed(stretched_exp_certificate)(alpha, n, mode) for n in ns]
    points: list[StretchedExpPoint] = compute_ordered(tasks)

    x = np.asarray(ns, dtype=float)
    y = np.asarray([p.log_bound for p in points])
    try:
        (scale, exponent, offset), _ = curve_fit(
            _growth_model,
            x,
            y,
            p0=(1.0, alpha / (alpha + 1.0), 0.0),
            bounds=([0.0, 0.0, -np.inf], [np.inf, 2.0, np.inf]),
            maxfev=20_000,
        )
    except (RuntimeError, ValueError) as exc:
        LOGGER(exc_info=FitError(f"growth fit failed: {exc}"))
    fit = ScalingFit(
        alpha=alpha,
        mode=mode,
        exponent=float(exponent),
        predicted=alpha / (alpha + 1.0),
        scale=float(scale),
        offset=float(offset),
        points=tuple(points),
    )
    LOGGER(f"stretched exponential {alpha=}: fitted exponent {fit.exponent:.4f} vs {fit.predicted:.4f}")
    return fit
