"""Command-line interface for equal-weight quadrature bounds, constructions and checks."""

import json
import os
from pathlib import Path
from typing import Any

import typer
import yaml
from pydantic import ValidationError

from chebquad.base import CqBaseModel
from chebquad.cli.config import DEFAULT_ROOT_KEY, SweepConfig, SweepMode, read_yaml_config
from chebquad.cli.runner import mode_to_runner
from chebquad.errors import ChebQuadError

os.environ["NO_COLOR"] = "1"
app = typer.Typer(pretty_exceptions_enable=False)

EXIT_USAGE = 2
EXIT_NUMERIC = 3


class _HelpMessage(CqBaseModel):
    weight: str = "Weight JSON document: a file path or inline JSON."
    n: str = "Comma-separated, strictly increasing degrees, e.g. 8,16,32."
    out: str = "Output directory for CSV and JSON artifacts."
    seed: str = "Seed for every random start."
    tol: str = "Primary tolerance of the mode: integration (bounds, scaling), solver/faithful (construct), verify, brute."
    restarts: str = "Restarts of the supremum search and the solver."
    yaml_path: str = "Path to a YAML file holding the sweep configuration under the root key. Flags override its values."
    root_key: str = "Key of the sweep configuration inside the YAML file."


class _DefaultValue(CqBaseModel):
    root_key: str = DEFAULT_ROOT_KEY


class _FlagName(CqBaseModel):
    weight: str = "--weight"
    n: str = "--n"
    out: str = "--out"
    seed: str = "--seed"
    tol: str = "--tol"
    restarts: str = "--restarts"
    yaml_path: str = "--yaml-path"
    root_key: str = "--root-key"


_HELP = _HelpMessage()
_DEFAULT = _DefaultValue()
_FLAG_NAME = _FlagName()

_TOLERANCE_KEY = {
    SweepMode.BOUNDS: "integration",
    SweepMode.SCALING: "integration",
    SweepMode.CONSTRUCT: "solver",
    SweepMode.VERIFY: "verify",
    SweepMode.BRUTE: "brute",
}


def parse_n_list(value: str | None) -> tuple[int, ...] | None:
    if value is None:
        return None
    try:
        return tuple(int(item) for item in value.split(",") if item.strip())
    except ValueError as exc:
        raise typer.BadParameter(f"expected comma-separated integers, got '{value}'") from exc


def _build_config(mode: SweepMode, yaml_path: Path | None, root_key: str, tol: float | None, **flags: Any) -> SweepConfig:
    data = read_yaml_config(yaml_path, root_key) if yaml_path is not None else {}
    data.update({k: v for k, v in flags.items() if v is not None})
    data["mode"] = mode
    if tol is not None:
        key = "faithful" if mode == SweepMode.CONSTRUCT and data.get("faithful") else _TOLERANCE_KEY[mode]
        data["tolerances"] = dict(data.get("tolerances", {})) | {key: tol}
    return SweepConfig.model_validate(data)


def _run(mode: SweepMode, yaml_path: Path | None, root_key: str, tol: float | None, **flags: Any) -> None:
    try:
        config = _build_config(mode, yaml_path, root_key, tol, **flags)
    except (ValidationError, json.JSONDecodeError, yaml.YAMLError, ValueError, OSError) as exc:
        typer.echo(f"invalid {mode} configuration: {exc}", err=True)
        raise typer.Exit(code=EXIT_USAGE)
    try:
        mode_to_runner(mode)(config).run()
    except ChebQuadError as exc:
        typer.echo(f"{mode} failed in {type(exc).__name__}: {exc}", err=True)
        raise typer.Exit(code=EXIT_NUMERIC)


_YAML_OPTION = typer.Option(None, _FLAG_NAME.yaml_path, help=_HELP.yaml_path, exists=True, dir_okay=False)
_ROOT_KEY_OPTION = typer.Option(_DEFAULT.root_key, _FLAG_NAME.root_key, help=_HELP.root_key)
_WEIGHT_OPTION = typer.Option(None, _FLAG_NAME.weight, help=_HELP.weight)
_N_OPTION = typer.Option(None, _FLAG_NAME.n, help=_HELP.n)
_OUT_OPTION = typer.Option(None, _FLAG_NAME.out, help=_HELP.out, file_okay=False)
_SEED_OPTION = typer.Option(None, _FLAG_NAME.seed, help=_HELP.seed)
_TOL_OPTION = typer.Option(None, _FLAG_NAME.tol, help=_HELP.tol)
_RESTARTS_OPTION = typer.Option(None, _FLAG_NAME.restarts, help=_HELP.restarts)


@app.command(name="bounds", help="Sharpness functionals, node bounds and lower-bound certificates per degree.")
def bounds(
    weight: str = _WEIGHT_OPTION,
    n: str = _N_OPTION,
    out: Path = _OUT_OPTION,
    eta: float = typer.Option(None, "--eta", help="Excluded-set parameter of the explicit upper bound, in (0, 1)."),
    ell: int = typer.Option(None, "--ell", help="Fejer power override for the lower-bound certificate."),
    doubling_constant: float = typer.Option(None, "--doubling-constant", help="Known doubling constant of the weight."),
    seed: int = _SEED_OPTION,
    tol: float = _TOL_OPTION,
    restarts: int = _RESTARTS_OPTION,
    yaml_path: Path = _YAML_OPTION,
    root_key: str = _ROOT_KEY_OPTION,
) -> None:
    _run(
        SweepMode.BOUNDS,
        yaml_path,
        root_key,
        tol,
        weight=weight,
        n_list=parse_n_list(n),
        output=out,
        eta=eta,
        ell=ell,
        doubling_constant=doubling_constant,
        seed=seed,
        restarts=restarts,
    )


@app.command(name="construct", help="Build equal-weight quadratures and write them as JSON.")
def construct(
    weight: str = _WEIGHT_OPTION,
    n: str = _N_OPTION,
    node_count: int = typer.Option(None, "--N", help="Node count. Defaults to the node bound of each degree."),
    out: Path = _OUT_OPTION,
    faithful: bool = typer.Option(None, "--faithful/--solver", help="Use the hull fixed-point construction (n <= 3)."),
    seed: int = _SEED_OPTION,
    tol: float = _TOL_OPTION,
    restarts: int = _RESTARTS_OPTION,
    yaml_path: Path = _YAML_OPTION,
    root_key: str = _ROOT_KEY_OPTION,
) -> None:
    _run(
        SweepMode.CONSTRUCT,
        yaml_path,
        root_key,
        tol,
        weight=weight,
        n_list=parse_n_list(n),
        node_count=node_count,
        output=out,
        faithful=faithful,
        seed=seed,
        restarts=restarts,
    )


@app.command(name="verify", help="Check a quadrature JSON file against a weight. Exits 3 if rejected.")
def verify(
    weight: str = _WEIGHT_OPTION,
    quadrature: Path = typer.Option(None, "--quadrature", help="Quadrature JSON file.", exists=True, dir_okay=False),
    out: Path = _OUT_OPTION,
    tol: float = _TOL_OPTION,
    yaml_path: Path = _YAML_OPTION,
    root_key: str = _ROOT_KEY_OPTION,
) -> None:
    n_list = None
    if quadrature is not None and quadrature.is_file():
        n_list = (max(int(json.loads(quadrature.read_text()).get("degree", 1)), 1),)
    _run(SweepMode.VERIFY, yaml_path, root_key, tol, weight=weight, quadrature=quadrature, n_list=n_list, output=out)


@app.command(name="scaling", help="Growth exponent fits of the sharpness functional and the stretched exponential law.")
def scaling(
    weight: str = _WEIGHT_OPTION,
    n: str = _N_OPTION,
    alpha: float = typer.Option(None, "--alpha", help="Stretched exponential parameter."),
    out: Path = _OUT_OPTION,
    tol: float = _TOL_OPTION,
    yaml_path: Path = _YAML_OPTION,
    root_key: str = _ROOT_KEY_OPTION,
) -> None:
    _run(SweepMode.SCALING, yaml_path, root_key, tol, weight=weight, n_list=parse_n_list(n), alpha=alpha, output=out)


@app.command(name="brute", help="Smallest feasible node count on tiny instances (n <= 3, N <= 8).")
def brute(
    weight: str = _WEIGHT_OPTION,
    n: str = _N_OPTION,
    n_max: int = typer.Option(None, "--n-max", help="Largest node count tried."),
    grid: int = typer.Option(None, "--grid", help="Grid resolution of the starts, at most 64."),
    out: Path = _OUT_OPTION,
    seed: int = _SEED_OPTION,
    tol: float = _TOL_OPTION,
    yaml_path: Path = _YAML_OPTION,
    root_key: str = _ROOT_KEY_OPTION,
) -> None:
    _run(
        SweepMode.BRUTE,
        yaml_path,
        root_key,
        tol,
        weight=weight,
        n_list=parse_n_list(n),
        n_max=n_max,
        grid=grid,
        output=out,
        seed=seed,
    )


if __name__ == "__main__":
    app()
