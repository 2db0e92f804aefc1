"""Lower-bound certificates built from powers of the Fejer kernel."""

import logging
import math

import numpy as np
from pydantic import Field

from chebquad.base import CqBaseModel
from chebquad.bounds.sharpness import r_trig
from chebquad.errors import PreconditionError
from chebquad.logging_chebquad import LOGGER, log_it
from chebquad.trig.norms import integrate_against
from chebquad.trig.poly import fejer_edge_value, fejer_kernel, multiply, power
from chebquad.weight.spec import Domain, WeightSpec
from chebquad.weight.window import window_mass


class CertificateReport(CqBaseModel):
    """Outcome of the localization certificate for one candidate node count.

    `certified` is True when every equal-weight quadrature of degree n with `node_count` nodes is ruled out.
    """

    n: int
    node_count: int
    ell: int
    m: int
    certified: bool
    reason: str
    center: float = Field(default=0.0, description="Window-mass minimizer the certificate polynomial is centred on.")
    localization: float = Field(default=0.0, description="Weighted integral of the localization polynomial. Must be positive.")
    power_mass: float = Field(default=0.0, description="Weighted integral of the centred Fejer power.")
    node_floor: int | None = Field(default=None, description="Every feasible node count is at least this value.")
    chain_lhs: float = Field(default=0.0, description="(I/N)(2/pi)^(2 ell).")
    chain_rhs: float = Field(default=0.0, description="Three times the weight mass of the central window.")


def default_ell(doubling_constant: float) -> int:
    """ceil(5 log2(pi^2 L))."""
    return int(math.ceil(5.0 * math.log2(np.pi**2 * doubling_constant)))


@log_it
def certificate_lower_bound(
    w: WeightSpec,
    n: int,
    doubling_constant: float,
    node_count: int,
    ell: int | None = None,
    center: float | None = None,
) -> CertificateReport:
    """Try to rule out `node_count` nodes for exactness degree n.

    The polynomial F_m^ell (F_m - F_m(pi/(2m+1))) centred at the window minimizer has degree
    2m(ell+1) <= n. A positive weighted integral forces a node inside the central window, after which
    exactness on F_m^ell gives (I/N) F_m(pi/(2m+1))^ell < int F_m^ell W. The certificate holds when the given
    node count violates that inequality.
    The decision uses the exact integral of F_m^ell, through `node_floor`, which is sharper than the window-mass
    chain `chain_lhs <= chain_rhs`. That chain is reported alongside and never certifies a count the floor does not.

    Parameters
    ----------
    w : WeightSpec
        Circle weight.
    n : int
        Exactness degree.
    doubling_constant : float
        Estimated doubling constant, used to choose `ell`.
    node_count : int
        Candidate node count.
    ell : int | None
        Override of the Fejer power.
    center : float | None
        Override of the window minimizer.
    """
    if w.domain != Domain.CIRCLE:
        LOGGER(exc_info=PreconditionError("certificate_lower_bound requires a circle weight"))
    if node_count < 1:
        LOGGER(exc_info=PreconditionError(f"node count must be positive: {node_count=}"))
    ell = default_ell(doubling_constant) if ell is None else ell
    if ell < 1:
        LOGGER(exc_info=PreconditionError(f"{ell=} must be positive"))
    m = n // (2 * (ell + 1))
    if m == 0:
        reason = f"certificate void: {n=} < 2(ell+1)"
        return CertificateReport(n=n, node_count=node_count, ell=ell, m=m, certified=False, reason=reason)

    center = r_trig(w, n).minimizer if center is None else center
    kernel = fejer_kernel(m)
    edge = fejer_edge_value(m)
    kernel_power = power(kernel, ell)
    localizer = multiply(kernel_power, kernel - edge).shift(center)
    localization = integrate_against(localizer, w)
    power_mass = integrate_against(kernel_power.shift(center), w)
    chain_lhs = w.total_mass / node_count * (2.0 / np.pi) ** (2 * ell)
    chain_rhs = 3.0 * window_mass(w, center, np.pi / (2 * m + 1))
    common = dict(
        n=n, node_count=node_count, ell=ell, m=m, center=center, localization=localization,
        power_mass=power_mass, chain_lhs=chain_lhs, chain_rhs=chain_rhs,
    )  # fmt: skip
    if localization <= 0:
        reason = "localization integral is not positive"
        return CertificateReport(**common, certified=False, reason=reason)  # type: ignore[arg-type]

    threshold = w.total_mass * edge**ell / power_mass
    node_floor = int(math.floor(threshold * (1.0 - 1e-9))) + 1
    certified = node_count < node_floor
    reason = "node count below the certified floor" if certified else "no contradiction at this node count"
    LOGGER(f"certificate {n=} {node_count=} {ell=} {m=}: {certified=} {node_floor=}", level=logging.DEBUG)
    return CertificateReport(**common, certified=certified, reason=reason, node_floor=node_floor)  # type: ignore[arg-type]
