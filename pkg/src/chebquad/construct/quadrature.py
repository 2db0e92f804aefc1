"""Equal-weight quadratures, exactness checks and the interval/circle node transfer."""

import logging
from typing import Any

import numpy as np
import pandas as pd
from pydantic import Field, model_validator

from chebquad.base import CqBaseModel
from chebquad.errors import PreconditionError
from chebquad.logging_chebquad import LOGGER
from chebquad.shared import TWO_PI, wrap_angle
from chebquad.trig.norms import weight_moments
from chebquad.weight.spec import Domain, WeightSpec

MOMENT_TOL = 1e-13


class ClusterDiagnostics(CqBaseModel):
    min_gap: float = Field(description="Smallest distance between neighbouring nodes, cyclic on the circle.")
    close_pairs: int = Field(description="Neighbouring pairs closer than the threshold.")
    threshold: float


class Quadrature(CqBaseModel):
    """Sorted nodes sharing one weight. Multiplicities are allowed."""

    domain: Domain
    degree: int = Field(ge=0, description="Claimed exactness degree.")
    nodes: tuple[float, ...] = Field(min_length=1)
    weight: float = Field(gt=0, description="Common weight, total mass over node count.")

    @model_validator(mode="before")
    @classmethod
    def _sort_nodes_(cls, data: Any) -> Any:
        if isinstance(data, dict) and "nodes" in data:
            nodes = np.asarray(data["nodes"], dtype=float)
            if Domain(data.get("domain")) == Domain.CIRCLE:
                nodes = wrap_angle(nodes)
            data = data | {"nodes": tuple(float(x) for x in np.sort(nodes))}
        return data

    @model_validator(mode="after")
    def _validate_interval_nodes_(self) -> "Quadrature":
        if self.domain == Domain.INTERVAL and (self.nodes[0] < -1.0 or self.nodes[-1] > 1.0):
            raise ValueError("interval nodes must lie in [-1, 1]")
        return self

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def total_mass(self) -> float:
        return self.weight * self.node_count

    def clustering(self, threshold: float = 1e-12) -> ClusterDiagnostics:
        nodes = np.asarray(self.nodes)
        gaps = np.diff(nodes)
        if self.domain == Domain.CIRCLE:
            gaps = np.append(gaps, nodes[0] + TWO_PI - nodes[-1])
        min_gap = float(np.min(gaps)) if gaps.size else np.inf
        return ClusterDiagnostics(min_gap=min_gap, close_pairs=int(np.count_nonzero(gaps < threshold)), threshold=threshold)

    def to_frame(self) -> pd.DataFrame:
        """One row per node with its index, the node count and the shared weight."""
        frame = pd.DataFrame({"index": np.arange(self.node_count), "node": self.nodes})
        return frame.assign(node_count=self.node_count, weight=self.weight)


class VerifyReport(CqBaseModel):
    domain: Domain
    degree: int
    basis: tuple[str, ...] = Field(description="Basis labels in residual order.")
    residuals: tuple[float, ...] = Field(description="|quadrature sum - integral| / (1 + |integral|) per basis function.")
    max_residual: float
    tol: float
    accepted: bool


def _circle_residuals(q: Quadrature, w: WeightSpec) -> tuple[list[str], np.ndarray]:
    mu_cos, mu_sin = weight_moments(w, q.degree, MOMENT_TOL)
    k = np.arange(q.degree + 1)
    angles = np.multiply.outer(np.asarray(q.nodes), k)
    sums_cos = q.weight * np.cos(angles).sum(axis=0)
    sums_sin = q.weight * np.sin(angles).sum(axis=0)
    labels = ["1"] + [label for j in k[1:] for label in (f"cos{j}", f"sin{j}")]
    res_cos = np.abs(sums_cos - mu_cos) / (1.0 + np.abs(mu_cos))
    res_sin = np.abs(sums_sin - mu_sin) / (1.0 + np.abs(mu_sin))
    residuals = np.concatenate([[res_cos[0]], np.column_stack([res_cos[1:], res_sin[1:]]).ravel()])
    return labels, residuals


def _interval_residuals(q: Quadrature, w: WeightSpec) -> tuple[list[str], np.ndarray]:
    # int T_k w over [-1, 1] is half the k-th cosine moment of the lifted weight
    mu_cos, _ = weight_moments(w.lift(), q.degree, MOMENT_TOL)
    moments = 0.5 * mu_cos
    sums = q.weight * np.polynomial.chebyshev.chebvander(np.asarray(q.nodes), q.degree).sum(axis=0)
    labels = [f"T{j}" for j in range(q.degree + 1)]
    return labels, np.abs(sums - moments) / (1.0 + np.abs(moments))


def verify(q: Quadrature, w: WeightSpec, tol: float = 1e-9) -> VerifyReport:
    """Residuals of `q` on the degree-`q.degree` test basis of its domain."""
    if q.domain != w.domain:
        LOGGER(exc_info=PreconditionError(f"quadrature domain {q.domain} does not match weight domain {w.domain}"))
    labels, residuals = _circle_residuals(q, w) if q.domain == Domain.CIRCLE else _interval_residuals(q, w)
    max_residual = float(np.max(residuals))
    report = VerifyReport(
        domain=q.domain,
        degree=q.degree,
        basis=tuple(labels),
        residuals=tuple(float(r) for r in residuals),
        max_residual=max_residual,
        tol=tol,
        accepted=max_residual <= tol,
    )
    LOGGER(f"verify N={q.node_count} degree={q.degree}: {max_residual=:.3e} accepted={report.accepted}", level=logging.DEBUG)
    return report


def transfer_nodes(q: Quadrature) -> Quadrature:
    """Circle nodes map to their cosines. Interval nodes map to the multiset of both arccos branches."""
    nodes = np.asarray(q.nodes)
    if q.domain == Domain.CIRCLE:
        return Quadrature(domain=Domain.INTERVAL, degree=q.degree, nodes=tuple(np.cos(nodes)), weight=0.5 * q.weight)
    angles = np.arccos(np.clip(nodes, -1.0, 1.0))
    return Quadrature(domain=Domain.CIRCLE, degree=q.degree, nodes=tuple(np.concatenate([angles, -angles])), weight=q.weight)
