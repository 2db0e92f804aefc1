"""Sweep runners. One runner per mode, each writing CSV and JSON artifacts into the output directory."""

import json
import logging
import math
from abc import ABC, abstractmethod
from typing import Any

import dask
import numpy as np
import pandas as pd
from pydantic import Field

from chebquad.base import CqBaseModel
from chebquad.bounds.kane import KaneSearchOptions, kane_sup
from chebquad.bounds.report import BoundReport, compute_bound_report, reports_to_frame, resolve_doubling_constant
from chebquad.bounds.sharpness import r_interval, r_trig
from chebquad.bounds.stretched import ScalingFit, stretched_exp_scaling
from chebquad.cli.config import SweepConfig, SweepMode, Tolerances
from chebquad.construct.brute import BruteForceResult, brute_force_min_N
from chebquad.construct.faithful import FaithfulOptions, kane_construct
from chebquad.construct.quadrature import ClusterDiagnostics, Quadrature, VerifyReport, transfer_nodes, verify
from chebquad.construct.solver import SolverOptions, solve_quadrature
from chebquad.errors import ChebQuadError
from chebquad.logging_chebquad import LOGGER
from chebquad.shared import compute_ordered, fit_power_law, get_or_create_path
from chebquad.weight.spec import Domain, WeightSpec


class VerificationError(ChebQuadError): ...


SCHEMA_VERSION = 1
CONSTRUCT_CSV_COLUMNS = ("n", "node_count", "index", "node", "weight", "method", "tol", "restarts")


class _Document(CqBaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, serialization_alias="schema")
    mode: SweepMode
    seed: int
    tolerances: Tolerances


class BoundsDocument(_Document):
    weight: WeightSpec
    reports: tuple[BoundReport, ...]
    r_exponent: float | None = Field(description="Fitted power of n in the sharpness functional. Needs two or more degrees.")


class ConstructedQuadrature(CqBaseModel):
    n: int
    method: str
    quadrature: Quadrature
    verify: VerifyReport
    clustering: ClusterDiagnostics
    restarts: int


class ConstructDocument(_Document):
    weight: WeightSpec
    results: tuple[ConstructedQuadrature, ...]


class VerifyDocument(_Document):
    weight: WeightSpec
    report: VerifyReport


class ScalingDocument(_Document):
    r_exponent: float | None
    stretched: ScalingFit | None


class BruteDocument(_Document):
    weight: WeightSpec
    results: tuple[BruteForceResult, ...]


class AbstractSweepRunner(ABC):
    """Runs one sweep mode over the configured degrees.

    Parameters
    ----------
    config : SweepConfig
        Validated sweep configuration.
    """

    def __init__(self, config: SweepConfig) -> None:
        self._cfg = config

    @property
    def weight(self) -> WeightSpec:
        if self._cfg.weight is None:
            raise ValueError(f"mode '{self._cfg.mode}' requires a weight")
        return self._cfg.weight

    @property
    def circle_weight(self) -> WeightSpec:
        return self.weight.lift() if self.weight.domain == Domain.INTERVAL else self.weight

    @property
    def kane_options(self) -> KaneSearchOptions:
        return KaneSearchOptions(restarts=self._cfg.restarts, iters=self._cfg.iters, seed=self._cfg.seed)

    def run(self) -> None:
        LOGGER(f"running {self._cfg.mode} for n={list(self._cfg.n_list)}")
        LOGGER(self._cfg.model_dump_json(exclude={"weight"}), level=logging.DEBUG)
        get_or_create_path(self._cfg.output)
        self._run_impl_()
        LOGGER("success")

    @abstractmethod
    def _run_impl_(self) -> None: ...

    def _document_fields_(self) -> dict[str, Any]:
        return dict(mode=self._cfg.mode, seed=self._cfg.seed, tolerances=self._cfg.tolerances)

    def _write_csv_(self, frame: pd.DataFrame) -> None:
        path = self._cfg.output / f"{self._cfg.mode.value}.csv"
        LOGGER(f"writing {path}")
        frame.to_csv(path, index=False, float_format="%.17g")

    def _write_json_(self, document: _Document) -> None:
        path = self._cfg.output / f"{self._cfg.mode.value}.json"
        LOGGER(f"writing {path}")
        path.write_text(document.model_dump_json(by_alias=True, indent=2))


class BoundsRunner(AbstractSweepRunner):
    def _run_impl_(self) -> None:
        cfg = self._cfg
        doubling_constant = resolve_doubling_constant(self.circle_weight, cfg.doubling_constant)
        tasks = [
            dask.delayed(compute_bound_report)(
                self.weight,
                n,
                eta=cfg.eta,
                doubling_constant=doubling_constant,
                ell=cfg.ell,
                search=self.kane_options,
                tol=cfg.tolerances.integration,
            )
            for n in cfg.n_list
        ]
        reports: list[BoundReport] = compute_ordered(tasks)
        r_exponent = None
        if len(reports) >= 2 and all(math.isfinite(r.r_value) for r in reports):
            r_exponent = fit_power_law([r.n for r in reports], [r.r_value for r in reports])
            LOGGER(f"sharpness functional exponent {r_exponent:.4f}")
        self._write_csv_(reports_to_frame(reports))
        document = BoundsDocument(weight=self.weight, reports=tuple(reports), r_exponent=r_exponent, **self._document_fields_())
        self._write_json_(document)


class ConstructRunner(AbstractSweepRunner):
    def _construct_one_(self, n: int) -> ConstructedQuadrature:
        cfg = self._cfg
        circle = self.circle_weight
        node_count = cfg.node_count
        sup_estimate = None
        if node_count is None:
            estimate = kane_sup(circle, n, self.kane_options)
            node_count, sup_estimate = estimate.node_bound, estimate.sup_estimate
        if cfg.faithful:
            options = FaithfulOptions(
                seed=cfg.seed, target=cfg.tolerances.faithful, sup_estimate=sup_estimate, kane=self.kane_options
            )
            quadrature = kane_construct(circle, n, node_count, options)
            method, restarts = "faithful", options.starts
        else:
            solver = SolverOptions(max_iter=cfg.iters, restarts=cfg.restarts, seed=cfg.seed, target=cfg.tolerances.solver)
            quadrature = solve_quadrature(circle, n, node_count, options=solver)
            method, restarts = "solver", solver.restarts
        if self.weight.domain == Domain.INTERVAL:
            quadrature = transfer_nodes(quadrature)
        report = verify(quadrature, self.weight, tol=cfg.tolerances.verify)
        return ConstructedQuadrature(
            n=n, method=method, quadrature=quadrature, verify=report, clustering=quadrature.clustering(), restarts=restarts
        )

    def _run_impl_(self) -> None:
        results: list[ConstructedQuadrature] = compute_ordered([dask.delayed(self._construct_one_)(n) for n in self._cfg.n_list])
        frames = [r.quadrature.to_frame().assign(n=r.n, method=r.method, tol=r.verify.tol, restarts=r.restarts) for r in results]
        for r in results:
            path = self._cfg.output / f"quadrature_n{r.n}.json"
            LOGGER(f"writing {path}")
            path.write_text(r.quadrature.model_dump_json(indent=2))
        self._write_csv_(pd.concat(frames, ignore_index=True)[list(CONSTRUCT_CSV_COLUMNS)])
        self._write_json_(ConstructDocument(weight=self.weight, results=tuple(results), **self._document_fields_()))


class VerifyRunner(AbstractSweepRunner):
    def _run_impl_(self) -> None:
        cfg = self._cfg
        assert cfg.quadrature is not None
        quadrature = Quadrature.model_validate(json.loads(cfg.quadrature.read_text()))
        report = verify(quadrature, self.weight, tol=cfg.tolerances.verify)
        frame = pd.DataFrame({"basis": report.basis, "residual": report.residuals}).assign(tol=report.tol)
        self._write_csv_(frame)
        self._write_json_(VerifyDocument(weight=self.weight, report=report, **self._document_fields_()))
        if not report.accepted:
            LOGGER(exc_info=VerificationError(f"verify rejected the quadrature: {report.max_residual:.3e} > {report.tol:.3e}"))


class ScalingRunner(AbstractSweepRunner):
    def _r_value_(self, n: int) -> float:
        tol = self._cfg.tolerances.integration
        if self.weight.domain == Domain.INTERVAL:
            return r_interval(self.weight, n, tol=tol).value
        return r_trig(self.weight, n, tol=tol).value

    def _run_impl_(self) -> None:
        cfg = self._cfg
        frame = pd.DataFrame({"n": list(cfg.n_list)})
        r_exponent = None
        if cfg.weight is not None:
            r_values: list[float] = compute_ordered([dask.delayed(self._r_value_)(n) for n in cfg.n_list])
            frame["r_value"] = r_values
            if len(r_values) >= 2 and all(np.isfinite(r_values)):
                r_exponent = fit_power_law(cfg.n_list, r_values)
        stretched = None
        if cfg.alpha is not None:
            stretched = stretched_exp_scaling(cfg.alpha, cfg.n_list)
            frame["m"] = [p.m for p in stretched.points]
            frame["r"] = [p.r for p in stretched.points]
            frame["log_bound"] = [p.log_bound for p in stretched.points]
            frame["log_lower"] = [p.log_lower for p in stretched.points]
            frame["log_upper"] = [p.log_upper for p in stretched.points]
        frame["tol"] = cfg.tolerances.integration
        self._write_csv_(frame)
        self._write_json_(ScalingDocument(r_exponent=r_exponent, stretched=stretched, **self._document_fields_()))


class BruteRunner(AbstractSweepRunner):
    def _run_impl_(self) -> None:
        cfg = self._cfg
        circle = self.circle_weight
        tasks = [
            dask.delayed(brute_force_min_N)(
                circle, n, cfg.n_max, cfg.grid, tol=cfg.tolerances.brute, seed=cfg.seed, max_iter=cfg.iters
            )
            for n in cfg.n_list
        ]
        results: list[BruteForceResult] = compute_ordered(tasks)
        frame = pd.DataFrame(
            [
                dict(n=r.n, min_nodes=r.min_nodes, best_residual=r.best_residuals[-1], n_max=r.n_max, grid=r.grid, tol=r.tol)
                for r in results
            ]
        )
        self._write_csv_(frame)
        self._write_json_(BruteDocument(weight=self.weight, results=tuple(results), **self._document_fields_()))


def mode_to_runner(mode: SweepMode) -> type[AbstractSweepRunner]:
    match mode:
        case SweepMode.BOUNDS:
            return BoundsRunner
        case SweepMode.CONSTRUCT:
            return ConstructRunner
        case SweepMode.VERIFY:
            return VerifyRunner
        case SweepMode.SCALING:
            return ScalingRunner
        case SweepMode.BRUTE:
            return BruteRunner
