"""Weight functions on [-1, 1] and on the circle [-pi, pi)."""

from abc import ABC, abstractmethod
from enum import StrEnum, unique
from functools import cached_property
from typing import Annotated, Any, Callable, ClassVar, Literal

import numpy as np
from pydantic import Field, model_validator
from scipy.special import beta as beta_function

from chebquad.base import CqBaseModel
from chebquad.errors import PreconditionError
from chebquad.logging_chebquad import LOGGER
from chebquad.settings import SETTINGS
from chebquad.shared import TWO_PI, wrap_angle
from chebquad.weight.integrate import integrate_function


@unique
class Domain(StrEnum):
    INTERVAL = "interval"
    CIRCLE = "circle"


@unique
class FamilyKey(StrEnum):
    CONSTANT = "constant"
    JACOBI = "jacobi"
    GENERALIZED_JACOBI = "generalized_jacobi"
    STRETCHED_EXPONENTIAL = "stretched_exponential"
    CUSTOM = "custom"
    LIFTED = "lifted"


def _half_angle_jacobi(theta: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    # w(cos t)|sin t| for the Jacobi factor, free of 0 * inf at t = 0 and t = pi
    with np.errstate(divide="ignore", invalid="ignore"):
        return (
            2.0 ** (alpha + beta + 1.0)
            * np.abs(np.sin(theta / 2.0)) ** (2.0 * alpha + 1.0)
            * np.abs(np.cos(theta / 2.0)) ** (2.0 * beta + 1.0)
        )


class AbstractFamily(ABC, CqBaseModel):
    """Parametric form of a weight density.

    Interval families also know how to evaluate their lift `w(cos t)|sin t|` so lifted weights can use
    closed forms near the poles.
    """

    domains: ClassVar[tuple[Domain, ...]] = (Domain.INTERVAL, Domain.CIRCLE)

    @abstractmethod
    def density(self, x: np.ndarray) -> np.ndarray: ...

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def exact_mass(self, domain: Domain) -> float | None:
        return None

    def lifted_density(self, theta: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            values = self.density(np.cos(theta)) * np.abs(np.sin(theta))
        return np.nan_to_num(values, nan=0.0, posinf=0.0)

    @property
    def lifted_breakpoints(self) -> tuple[float, ...]:
        points = {0.0, -np.pi}
        for point in self.breakpoints:
            angle = float(np.arccos(np.clip(point, -1.0, 1.0)))
            points.update({angle, float(wrap_angle(-angle))})
        return tuple(sorted(points))


class ConstantFamily(AbstractFamily):
    key: Literal["constant"] = "constant"
    value: float = Field(default=1.0, gt=0, description="Constant density value.")

    def density(self, x: np.ndarray) -> np.ndarray:
        return np.full(np.shape(x), self.value, dtype=float)

    def exact_mass(self, domain: Domain) -> float | None:
        return self.value * (2.0 if domain == Domain.INTERVAL else TWO_PI)

    def lifted_density(self, theta: np.ndarray) -> np.ndarray:
        return self.value * np.abs(np.sin(theta))


class JacobiFamily(AbstractFamily):
    """Density (1 - t)^alpha (1 + t)^beta on [-1, 1]."""

    domains: ClassVar[tuple[Domain, ...]] = (Domain.INTERVAL,)

    key: Literal["jacobi"] = "jacobi"
    alpha: float = Field(gt=-1, description="Exponent at t = 1.")
    beta: float = Field(gt=-1, description="Exponent at t = -1.")

    def density(self, x: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return (1.0 - x) ** self.alpha * (1.0 + x) ** self.beta

    def exact_mass(self, domain: Domain) -> float | None:
        return float(2.0 ** (self.alpha + self.beta + 1.0) * beta_function(self.alpha + 1.0, self.beta + 1.0))

    def lifted_density(self, theta: np.ndarray) -> np.ndarray:
        return _half_angle_jacobi(theta, self.alpha, self.beta)


class SingularPoint(CqBaseModel):
    location: float = Field(gt=-1, lt=1)
    exponent: float = Field(gt=-1)


class GeneralizedJacobiFamily(AbstractFamily):
    """Jacobi density times |t - s_i|^gamma_i factors and a positive polynomial h (ascending coefficients)."""

    domains: ClassVar[tuple[Domain, ...]] = (Domain.INTERVAL,)

    key: Literal["generalized_jacobi"] = "generalized_jacobi"
    alpha: float = Field(default=0.0, gt=-1)
    beta: float = Field(default=0.0, gt=-1)
    singular_points: tuple[SingularPoint, ...] = ()
    h_poly: tuple[float, ...] = Field(default=(1.0,), min_length=1, description="Ascending power coefficients of h.")

    @model_validator(mode="after")
    def _validate_h_positive_(self) -> "GeneralizedJacobiFamily":
        grid = np.linspace(-1.0, 1.0, 2001)
        if np.min(np.polynomial.polynomial.polyval(grid, self.h_poly)) <= 0:
            raise ValueError("h must be positive on [-1, 1]")
        return self

    def _interior_factor(self, t: np.ndarray) -> np.ndarray:
        factor = np.polynomial.polynomial.polyval(t, self.h_poly)
        with np.errstate(divide="ignore", invalid="ignore"):
            for point in self.singular_points:
                factor = factor * np.abs(t - point.location) ** point.exponent
        return factor

    def density(self, x: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self._interior_factor(x) * (1.0 - x) ** self.alpha * (1.0 + x) ** self.beta

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(sorted(p.location for p in self.singular_points))

    def exact_mass(self, domain: Domain) -> float | None:
        if self.singular_points or len(self.h_poly) > 1:
            return None
        return JacobiFamily(alpha=self.alpha, beta=self.beta).exact_mass(domain) * self.h_poly[0]  # type: ignore[operator]

    def lifted_density(self, theta: np.ndarray) -> np.ndarray:
        return self._interior_factor(np.cos(theta)) * _half_angle_jacobi(theta, self.alpha, self.beta)


class StretchedExponentialFamily(AbstractFamily):
    """Density exp(-|t|^(-alpha)) on the circle. Vanishes to infinite order at 0."""

    domains: ClassVar[tuple[Domain, ...]] = (Domain.CIRCLE,)

    key: Literal["stretched_exponential"] = "stretched_exponential"
    alpha: float = Field(gt=0)

    def density(self, x: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", over="ignore"):
            return np.exp(-(np.abs(x) ** (-self.alpha)))

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (0.0,)


class CustomFamily(AbstractFamily):
    """In-memory density. Only the singularity hints survive JSON serialization."""

    key: Literal["custom"] = "custom"
    function: Callable[[np.ndarray], np.ndarray] = Field(exclude=True)
    singularity_hints: tuple[float, ...] = ()

    def density(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.function(x), dtype=float)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(sorted(self.singularity_hints))


class LiftedFamily(AbstractFamily):
    """Circle density w(cos t)|sin t| of an interval weight `base`."""

    domains: ClassVar[tuple[Domain, ...]] = (Domain.CIRCLE,)

    key: Literal["lifted"] = "lifted"
    base: "WeightSpec"

    @model_validator(mode="after")
    def _validate_base_(self) -> "LiftedFamily":
        if self.base.domain != Domain.INTERVAL:
            raise ValueError("only interval weights can be lifted")
        return self

    def density(self, x: np.ndarray) -> np.ndarray:
        return self.base.family.lifted_density(x)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.base.family.lifted_breakpoints

    def exact_mass(self, domain: Domain) -> float | None:
        return 2.0 * self.base.total_mass


WeightFamily = Annotated[
    ConstantFamily | JacobiFamily | GeneralizedJacobiFamily | StretchedExponentialFamily | CustomFamily | LiftedFamily,
    Field(discriminator="key"),
]


class WeightSpec(CqBaseModel):
    """A nonnegative integrable weight with positive total mass.

    Interval weights are zero-extended outside [-1, 1]. Circle weights are 2pi-periodic and evaluated
    after reducing the argument into [-pi, pi).

    Both a nested document ``{"domain": ..., "family": {"key": ..., ...}}`` and a flat document
    ``{"domain": ..., "family": "<key>", <parameters>}`` are accepted. Dumps are always nested.
    """

    domain: Domain = Field(description="Either 'interval' for [-1, 1] or 'circle' for [-pi, pi).")
    family: WeightFamily
    known_doubling_constant: float | None = Field(default=None, ge=1, description="Optional user supplied doubling constant.")

    @model_validator(mode="before")
    @classmethod
    def _fold_flat_document_(cls, data: Any) -> Any:
        if isinstance(data, dict) and isinstance(data.get("family"), str):
            outer = {"domain", "family", "known_doubling_constant"}
            family = {"key": FamilyKey(data["family"]).value, **{k: v for k, v in data.items() if k not in outer}}
            data = {k: v for k, v in data.items() if k in outer} | {"family": family}
        return data

    @model_validator(mode="after")
    def _validate_domain_(self) -> "WeightSpec":
        if self.domain not in self.family.domains:
            raise ValueError(f"family '{self.family.key}' is not defined on domain '{self.domain}'")
        return self

    @property
    def lower(self) -> float:
        return -1.0 if self.domain == Domain.INTERVAL else -np.pi

    @property
    def upper(self) -> float:
        return 1.0 if self.domain == Domain.INTERVAL else np.pi

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.family.breakpoints

    def density(self, x: np.ndarray | float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.domain == Domain.CIRCLE:
            return np.asarray(self.family.density(wrap_angle(x)), dtype=float)
        inside = np.abs(x) <= 1.0
        return np.where(inside, self.family.density(np.clip(x, -1.0, 1.0)), 0.0)

    def breakpoints_in(self, a: float, b: float) -> list[float]:
        """Singular abscissae in (a, b), repeated periodically for circle weights."""
        if self.domain == Domain.INTERVAL:
            return [p for p in self.breakpoints if a < p < b]
        found: list[float] = []
        for point in self.breakpoints:
            k_lo = int(np.ceil((a - point) / TWO_PI))
            k_hi = int(np.floor((b - point) / TWO_PI))
            found.extend(point + TWO_PI * k for k in range(k_lo, k_hi + 1) if a < point + TWO_PI * k < b)
        return sorted(found)

    def integrate(self, a: float, b: float, tol: float | None = None) -> float:
        """Integral of the density over [a, b] with relative error at most `tol`."""
        tol = SETTINGS.chebquad_default_tol if tol is None else tol
        if self.domain == Domain.INTERVAL:
            a, b = max(a, -1.0), min(b, 1.0)
            if a >= b:
                return 0.0
        value, _ = integrate_function(self.density, a, b, breakpoints=self.breakpoints_in(a, b), rel_tol=tol)
        return value

    @cached_property
    def total_mass(self) -> float:
        exact = self.family.exact_mass(self.domain)
        mass = exact if exact is not None else self.integrate(self.lower, self.upper, tol=SETTINGS.chebquad_mass_tol)
        if not mass > 0:
            LOGGER(exc_info=PreconditionError(f"weight must have positive total mass: {mass=}"))
        return float(mass)

    def lift(self) -> "WeightSpec":
        if self.domain != Domain.INTERVAL:
            LOGGER(exc_info=PreconditionError("only interval weights can be lifted"))
        return WeightSpec(domain=Domain.CIRCLE, family=LiftedFamily(base=self))


LiftedFamily.model_rebuild()
WeightSpec.model_rebuild()
