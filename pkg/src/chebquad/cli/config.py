"""Sweep configuration shared by every subcommand."""

import json
from enum import StrEnum, unique
from pathlib import Path
from typing import Any

import yaml
from pydantic import Field, field_validator, model_validator

from chebquad.base import CqBaseModel
from chebquad.shared import PathExistingFile
from chebquad.weight.spec import WeightSpec

DEFAULT_ROOT_KEY = "chebquad"


@unique
class SweepMode(StrEnum):
    """Work performed for every degree in the sweep.

    Attributes
    ----------
    BOUNDS : str
        Sharpness functionals and node-count bounds.
    CONSTRUCT : str
        Build equal-weight quadratures.
    VERIFY : str
        Check a stored quadrature against a weight.
    SCALING : str
        Growth exponent fits.
    BRUTE : str
        Smallest feasible node count on tiny instances.
    """

    BOUNDS = "bounds"
    CONSTRUCT = "construct"
    VERIFY = "verify"
    SCALING = "scaling"
    BRUTE = "brute"


class Tolerances(CqBaseModel):
    integration: float = Field(default=1e-10, gt=0, description="Relative tolerance of weighted integrals.")
    verify: float = Field(default=1e-9, gt=0, description="Acceptance threshold of the verify residual.")
    solver: float = Field(default=1e-9, gt=0, description="Residual target of the damped least-squares solver.")
    faithful: float = Field(default=1e-8, gt=0, description="Residual target of the hull fixed-point construction.")
    brute: float = Field(default=1e-6, gt=0, description="Residual accepted by the brute-force oracle.")


def load_weight_document(value: str | Path) -> dict[str, Any]:
    """Parse a weight document from a JSON file path or an inline JSON string."""
    text = str(value)
    path = Path(text)
    if not text.lstrip().startswith("{") and path.is_file():
        text = path.read_text()
    return json.loads(text)


class SweepConfig(CqBaseModel):
    mode: SweepMode
    weight: WeightSpec | None = Field(default=None, description="Weight document, a path to one, or inline JSON.")
    n_list: tuple[int, ...] = Field(min_length=1, description="Degrees, strictly increasing.")
    output: Path = Field(description="Directory receiving the CSV and JSON artifacts.")
    seed: int = Field(default=0, ge=0, lt=2**64)
    tolerances: Tolerances = Tolerances()
    node_count: int | None = Field(
        default=None, ge=1, description="Node count for construct. Defaults to the node bound per degree."
    )
    eta: float = Field(default=0.5, gt=0, lt=1, description="Excluded-set parameter of the explicit upper bound.")
    alpha: float | None = Field(default=None, gt=0, description="Stretched exponential parameter for scaling.")
    faithful: bool = Field(default=False, description="Use the hull fixed-point construction instead of the solver.")
    restarts: int = Field(default=8, ge=1)
    iters: int = Field(default=200, ge=1)
    ell: int | None = Field(default=None, ge=1, description="Fejer power override for the lower-bound certificate.")
    doubling_constant: float | None = Field(default=None, ge=1)
    quadrature: PathExistingFile | None = Field(default=None, description="Quadrature JSON checked by verify.")
    n_max: int = Field(default=8, ge=1, description="Largest node count tried by brute.")
    grid: int = Field(default=32, ge=1, description="Grid resolution of brute-force starts.")

    @field_validator("weight", mode="before")
    @classmethod
    def _load_weight_(cls, value: Any) -> Any:
        if isinstance(value, (str, Path)):
            return load_weight_document(value)
        return value

    @field_validator("n_list")
    @classmethod
    def _validate_n_list_(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if value[0] < 1:
            raise ValueError(f"degrees must be positive: {value}")
        if any(b <= a for a, b in zip(value[:-1], value[1:])):
            raise ValueError(f"degrees must be strictly increasing: {value}")
        return value

    @model_validator(mode="after")
    def _validate_mode_inputs_(self) -> "SweepConfig":
        if self.weight is None and not (self.mode == SweepMode.SCALING and self.alpha is not None):
            raise ValueError(f"mode '{self.mode}' requires a weight")
        if self.mode == SweepMode.VERIFY and self.quadrature is None:
            raise ValueError("verify requires a quadrature file")
        return self


def read_yaml_config(yaml_path: Path, root_key: str = DEFAULT_ROOT_KEY) -> dict[str, Any]:
    """The mapping stored under `root_key` of a YAML document."""
    data = yaml.safe_load(yaml_path.read_text())
    if not isinstance(data, dict) or not isinstance(data.get(root_key), dict):
        raise ValueError(f"YAML file {yaml_path} has no mapping under root key '{root_key}'")
    return dict(data[root_key])
