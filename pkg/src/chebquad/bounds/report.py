"""Per-degree bound summaries and their tabular form."""

import logging
import math

import pandas as pd
from pydantic import Field

from chebquad.base import CqBaseModel
from chebquad.bounds.certificate import certificate_lower_bound
from chebquad.bounds.kane import (
    KaneSearchOptions,
    bernstein_mt_node_bound,
    default_exclusion,
    general_upper_bound,
    interval_upper_bound,
    kane_sup,
)
from chebquad.bounds.sharpness import mt_ratio, r_interval, r_trig
from chebquad.logging_chebquad import LOGGER, log_it
from chebquad.weight.doubling import NotDoublingError, default_a_grid, default_delta_grid, estimate_doubling_constant
from chebquad.weight.spec import Domain, WeightSpec

CSV_COLUMNS = (
    "n",
    "r_value",
    "kane_sup",
    "kane_bound",
    "upper",
    "lower_cert",
    "mt_ratio",
    "bernstein_mt_bound",
    "minimizer_x",
    "tol",
    "restarts",
)


class BoundReport(CqBaseModel):
    n: int = Field(ge=1)
    r_value: float = Field(description="Interval functional for interval weights, circle functional otherwise.")
    minimizer_x: float = Field(description="Window centre attaining the minimal window mass.")
    kane_sup_estimate: float
    kane_node_bound: int = Field(ge=1)
    general_upper_bound: float | None = Field(default=None, description="Explicit upper bound. Infinite when the weight vanishes.")
    certificate_lower_bound: int | None = Field(default=None, description="Certified floor on the node count, if any.")
    mt_ratio: float | None = Field(default=None, description="Sampled averaging constant of the weight at this degree.")
    bernstein_mt_node_bound: int | None = Field(default=None, description="Node bound from Bernstein's inequality and `mt_ratio`.")
    tol: float
    restarts: int

    def to_row(self) -> dict[str, float | int | None]:
        return {
            "n": self.n,
            "r_value": self.r_value,
            "kane_sup": self.kane_sup_estimate,
            "kane_bound": self.kane_node_bound,
            "upper": self.general_upper_bound,
            "lower_cert": self.certificate_lower_bound,
            "mt_ratio": self.mt_ratio,
            "bernstein_mt_bound": self.bernstein_mt_node_bound,
            "minimizer_x": self.minimizer_x,
            "tol": self.tol,
            "restarts": self.restarts,
        }


def reports_to_frame(reports: list[BoundReport]) -> pd.DataFrame:
    return pd.DataFrame([report.to_row() for report in reports], columns=list(CSV_COLUMNS))


def resolve_doubling_constant(w: WeightSpec, supplied: float | None = None) -> float | None:
    """Supplied constant, else the weight's own, else a coarse grid estimate. None if the weight is not doubling."""
    if supplied is not None:
        return supplied
    if w.known_doubling_constant is not None:
        return w.known_doubling_constant
    try:
        estimate = estimate_doubling_constant(w, delta_grid=default_delta_grid(w, levels=8), a_grid=default_a_grid(w, points=64))
    except NotDoublingError as exc:
        LOGGER(f"skipping certificate: {exc}", level=logging.WARNING)
        return None
    return None if estimate.grows else estimate.value


@log_it
def compute_bound_report(
    w: WeightSpec,
    n: int,
    eta: float = 0.5,
    doubling_constant: float | None = None,
    ell: int | None = None,
    search: KaneSearchOptions | None = None,
    tol: float = 1e-10,
    mt_samples: int = 64,
) -> BoundReport:
    """All bounds for one degree. Interval weights are lifted for the circle quantities.

    The explicit upper bound excludes the largest admissible interval around the weight's minimum, so a
    weight with a single zero still gets a finite bound.
    """
    search = KaneSearchOptions() if search is None else search
    circle = w.lift() if w.domain == Domain.INTERVAL else w
    trig = r_trig(circle, n, tol=tol)
    primary = r_interval(w, n, tol=tol) if w.domain == Domain.INTERVAL else trig
    kane = kane_sup(circle, n, search, center=trig.minimizer)
    if w.domain == Domain.INTERVAL:
        upper = interval_upper_bound(w, n, default_exclusion(w, n, eta), eta)
    else:
        upper = general_upper_bound(w, n, default_exclusion(w, n, eta), eta)
    averaging = mt_ratio(circle, n, samples=mt_samples)
    mt_bound = bernstein_mt_node_bound(circle, n, averaging, r_value=trig.value) if math.isfinite(trig.value) else None

    lower: int | None = None
    if doubling_constant is not None:
        certificate = certificate_lower_bound(circle, n, doubling_constant, 1, ell=ell, center=trig.minimizer)
        lower = certificate.node_floor
    return BoundReport(
        n=n,
        r_value=primary.value,
        minimizer_x=primary.minimizer,
        kane_sup_estimate=kane.sup_estimate,
        kane_node_bound=kane.node_bound,
        general_upper_bound=float(upper) if not math.isinf(upper) else math.inf,
        certificate_lower_bound=lower,
        mt_ratio=averaging,
        bernstein_mt_node_bound=mt_bound,
        tol=tol,
        restarts=search.restarts,
    )
